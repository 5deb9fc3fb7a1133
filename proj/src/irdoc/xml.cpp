#include "accb/irdoc/ir.hpp"

#include <charconv>

namespace accb::irdoc {

namespace {

// Attribute values also escape quotes and the whitespace characters an XML
// parser would normalize away.
void escape(std::string_view s, bool attribute, std::string &out) {
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"':
      out += attribute ? "&quot;" : "\"";
      break;
    case '\n':
      out += attribute ? "&#10;" : "\n";
      break;
    case '\r': out += "&#13;"; break;
    case '\t':
      out += attribute ? "&#9;" : "\t";
      break;
    default: out += c;
    }
  }
}

void attr(std::string &out, std::string_view name, std::string_view value) {
  out += ' ';
  out += name;
  out += "=\"";
  escape(value, true, out);
  out += '"';
}

void attr(std::string &out, std::string_view name, long long value) {
  attr(out, name, std::to_string(value));
}

void write(std::span<const IrTag> tags, std::string &out) {
  for (const IrTag &t : tags) {
    if (const auto *c = t.ccode()) {
      out += "<ccode>";
      escape(c->text, false, out);
      out += "</ccode>";
    } else if (const auto *p = t.pragma()) {
      const auto &d = p->directive;
      out += "<pragma";
      attr(out, "directive", accvalidate::to_string(d.kind));
      attr(out, "text", d.text);
      attr(out, "line", d.location.line);
      attr(out, "col", d.location.column);
      attr(out, "token", static_cast<long long>(d.token));
      attr(out, "attached", std::to_string(d.attached.begin) + ":" +
                                std::to_string(d.attached.end));
      out += '>';
      write(p->children, out);
      out += "</pragma>";
    } else if (const auto *f = t.forloop()) {
      out += "<forloop";
      attr(out, "header", f->header);
      attr(out, "init", f->init);
      attr(out, "cond", f->cond);
      attr(out, "step", f->step);
      if (f->governor)
        attr(out, "governor", *f->governor);
      attr(out, "line", f->location.line);
      attr(out, "col", f->location.column);
      attr(out, "token", static_cast<long long>(f->token));
      out += '>';
      write(f->body, out);
      out += "</forloop>";
    }
  }
}

class Reader {
public:
  explicit Reader(std::string_view xml) : s_(xml) {}

  IrDocument document() {
    skip_space();
    open("accir");
    IrDocument doc{content("accir")};
    skip_space();
    if (pos_ != s_.size())
      bad("trailing content after </accir>");
    return doc;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void bad(const std::string &what) {
    fail("E_INTERNAL", "malformed IR document at offset " + std::to_string(pos_) +
                           ": " + what);
  }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\n' ||
                                s_[pos_] == '\t' || s_[pos_] == '\r'))
      ++pos_;
  }

  bool starts(std::string_view p) const { return s_.substr(pos_).starts_with(p); }

  void expect(std::string_view p) {
    if (!starts(p))
      bad("expected '" + std::string(p) + "'");
    pos_ += p.size();
  }

  std::string decode(std::string_view raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      std::size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos)
        bad("unterminated entity");
      std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "amp") out += '&';
      else if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else if (ent.starts_with('#')) {
        unsigned v = 0;
        auto [p, ec] = std::from_chars(ent.data() + 1, ent.data() + ent.size(), v);
        if (ec != std::errc() || p != ent.data() + ent.size() || v > 0x7f)
          bad("unsupported character reference");
        out += static_cast<char>(v);
      } else {
        bad("unknown entity '" + std::string(ent) + "'");
      }
      i = semi;
    }
    return out;
  }

  std::map<std::string, std::string> open(std::string_view name) {
    expect("<");
    expect(name);
    std::map<std::string, std::string> attrs;
    while (true) {
      skip_space();
      if (starts(">")) {
        ++pos_;
        return attrs;
      }
      std::size_t eq = s_.find('=', pos_);
      if (eq == std::string_view::npos)
        bad("expected attribute");
      std::string key(s_.substr(pos_, eq - pos_));
      pos_ = eq + 1;
      expect("\"");
      std::size_t close = s_.find('"', pos_);
      if (close == std::string_view::npos)
        bad("unterminated attribute");
      attrs[key] = decode(s_.substr(pos_, close - pos_));
      pos_ = close + 1;
    }
  }

  static std::string take(std::map<std::string, std::string> &a, const char *key) {
    auto it = a.find(key);
    return it == a.end() ? std::string() : it->second;
  }

  long long number(std::map<std::string, std::string> &a, const char *key) {
    std::string v = take(a, key);
    long long n = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc() || p != v.data() + v.size())
      bad(std::string("attribute '") + key + "' is not a number");
    return n;
  }

  std::vector<IrTag> content(std::string_view closing) {
    std::vector<IrTag> out;
    while (true) {
      if (pos_ >= s_.size())
        bad("missing </" + std::string(closing) + ">");
      if (starts("</")) {
        expect("</");
        expect(closing);
        expect(">");
        return out;
      }
      if (starts("<ccode>")) {
        pos_ += 7;
        std::size_t end = s_.find("</ccode>", pos_);
        if (end == std::string_view::npos)
          bad("missing </ccode>");
        std::string raw(s_.substr(pos_, end - pos_));
        if (raw.find('<') != std::string::npos)
          bad("markup inside <ccode>");
        out.push_back(IrTag{CCodeTag{decode(raw)}});
        pos_ = end + 8;
      } else if (starts("<pragma")) {
        auto a = open("pragma");
        PragmaTag p;
        SourceLocation loc{static_cast<int>(number(a, "line")),
                           static_cast<int>(number(a, "col"))};
        Diagnostic err;
        auto d = accvalidate::parse_directive(take(a, "text"), loc, &err);
        if (!d)
          bad("invalid directive: " + err.message);
        if (accvalidate::to_string(d->kind) != take(a, "directive"))
          bad("directive kind does not match its text");
        d->token = static_cast<std::size_t>(number(a, "token"));
        std::string span = take(a, "attached");
        std::size_t colon = span.find(':');
        if (colon == std::string::npos)
          bad("attached span must be begin:end");
        d->attached.begin = std::stoull(span.substr(0, colon));
        d->attached.end = std::stoull(span.substr(colon + 1));
        p.directive = std::move(*d);
        p.children = content("pragma");
        out.push_back(IrTag{std::move(p)});
      } else if (starts("<forloop")) {
        auto a = open("forloop");
        ForLoopTag f;
        f.header = take(a, "header");
        f.init = take(a, "init");
        f.cond = take(a, "cond");
        f.step = take(a, "step");
        if (a.contains("governor"))
          f.governor = take(a, "governor");
        f.location = {static_cast<int>(number(a, "line")),
                      static_cast<int>(number(a, "col"))};
        f.token = static_cast<std::size_t>(number(a, "token"));
        f.body = content("forloop");
        out.push_back(IrTag{std::move(f)});
      } else {
        bad("unexpected markup");
      }
    }
  }
};

} // namespace

std::string serialize_ir(const IrDocument &doc) {
  std::string out = "<accir>";
  write(doc.tags, out);
  out += "</accir>\n";
  return out;
}

IrDocument deserialize_ir(std::string_view xml) { return Reader(xml).document(); }

} // namespace accb::irdoc
