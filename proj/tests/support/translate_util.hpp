#pragma once

#include "accb/translate/translate.hpp"

#include <regex>
#include <stdexcept>
#include <string>

namespace accb::test {

inline translate::Program program(std::string_view text) {
  std::vector<Diagnostic> diags;
  auto p = translate::analyze(text, diags);
  if (!p) {
    std::string msg = "analysis failed:";
    for (const auto &d : diags)
      msg += " " + d.code + " " + d.message;
    throw std::runtime_error(msg);
  }
  return std::move(*p);
}

/// Code of the CompileError `fn` throws, or "" if it returns normally.
template <class F> std::string error_code(F &&fn) {
  try {
    fn();
  } catch (const CompileError &e) {
    return e.diagnostic().code;
  }
  return "";
}

inline int count_matches(const std::string &text, const std::string &pattern) {
  std::regex re(pattern);
  return static_cast<int>(
      std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

/// Occurrences of calls to `name` in `text`.
inline int count_calls(const std::string &text, const std::string &name) {
  return count_matches(text, "\\b" + name + "\\s*\\(");
}

/// Host part of a generated file: without the runtime prelude, the forward
/// declarations and the device code.
inline std::string host_section(const std::string &out) {
  auto cut = [](std::string s, std::string_view from, std::string_view to) {
    auto a = s.find(from);
    if (a == std::string::npos)
      return s;
    auto b = to.empty() ? std::string::npos : s.find(to, a);
    return s.substr(0, a) + (b == std::string::npos ? "" : s.substr(b + to.size()));
  };
  std::string s = cut(out, translate::device_begin, {});
  s = cut(s, translate::runtime_begin, translate::runtime_end);
  return cut(s, translate::forward_begin, translate::forward_end);
}

} // namespace accb::test
