#pragma once

#include "accb/accvalidate/directive.hpp"
#include "accb/cfront/ast.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace accb::translate {

enum class BindingKind {
  scalar,
  array,
  user_function,
  user_type,
  loop_index,
  constant,      // macro or enumerator
  builtin,       // math library function or limit constant
  external_call, // call to a function with no definition in the file
};

std::string_view to_string(BindingKind k);

struct Binding {
  BindingKind kind = BindingKind::scalar;
  std::string name;
  /// Scalar type, or element type for arrays and pointers.
  std::string element_type;
  /// Declared array extents (texts); empty for pointers.
  std::vector<std::string> extents;
  bool fixed_size = false;
  int pointer_depth = 0;
  /// Declaration or definition the name resolves to.
  cfront::TokenSpan definition;
  cfront::DeclOrigin origin = cfront::DeclOrigin::global;
  /// Declared inside the region itself.
  bool region_local = false;
  /// Normalized token indices of every use inside the region.
  std::vector<std::size_t> uses;
};

/// Identifier bindings of one region, in order of first appearance.
struct ScopeBindings {
  std::vector<Binding> bindings;

  const Binding *find(std::string_view name) const;
  Binding *find(std::string_view name);
};

/// Byte counts for one data-clause variable. All fields are host C
/// expressions.
struct TransferSize {
  std::string offset; // byte offset of the first transferred element
  std::string bytes;  // bytes transferred
  std::string alloc;  // bytes allocated on the device
  std::optional<long long> constant_bytes;
};

/// Fixed correspondence between OpenACC parallelism levels and the
/// execution model (gang/worker are advisory; only vector sizes blocks).
enum class Level { gang, worker, vector, thread };
std::string_view mapped_to(Level level); // "kernel", "thread block", ...

/// One parallel loop mapped onto a grid dimension.
struct LoopDim {
  std::string index;
  std::string index_type;
  std::string lower;
  std::string upper;
  std::string op;  // <, <=, >, >=
  long long step = 1; // signed
  std::string count; // host expression for the trip count
};

struct LaunchGeometry {
  int dims = 1;
  std::array<std::string, 2> grid{"1", "1"};
  std::array<int, 2> block{1, 1};
  std::vector<LoopDim> loops; // one per parallel dimension; empty if sequential

  int threads_per_block() const { return block[0] * block[1]; }
};

struct KernelParam {
  enum class Kind { array, scalar, partials };
  Kind kind = Kind::scalar;
  std::string name;
  std::string type;    // scalar type or element type
  std::string extents; // trailing extents of multi-dimensional arrays, e.g. "[4]"
  std::string host_arg; // launch-site expression (device handle or value)
};

struct ReductionSpec {
  accvalidate::ReductionOp op = accvalidate::ReductionOp::add;
  std::string var;
  std::string type;
  std::string identity;
  std::string partials; // per-block results, one element per block
  std::string scratch;  // block-shared array
};

struct KernelSpec {
  std::string name;
  int region_id = 0;
  std::vector<KernelParam> params;
  /// Declarations placed at the top of the kernel (private copies).
  std::vector<std::string> locals;
  /// Statement executed by each geometry point that passes the guard.
  std::string body;
  /// Empty for sequential kernels.
  std::string guard;
  LaunchGeometry geometry;
  std::vector<ReductionSpec> reductions;
  /// Names of hoisted functions the body calls (already renamed).
  std::vector<std::string> device_functions;
  SourceLocation location;
};

} // namespace accb::translate
