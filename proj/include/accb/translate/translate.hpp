#pragma once

#include "accb/backends/profile.hpp"
#include "accb/irdoc/ir.hpp"
#include "accb/translate/kernel.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace accb::translate {

/// Everything the front half of the pipeline produces for one file.
struct Program {
  cfront::NormalizedSource src;
  cfront::Ast ast;
  std::vector<accvalidate::DirectiveNode> directives;
  irdoc::IrDocument ir;
  irdoc::Reverted reverted;

  std::span<const cfront::Token> tokens() const { return src.tokens; }
  /// Directive whose pragma token is `token`, if any.
  const accvalidate::DirectiveNode *directive_at(std::size_t token) const;
  /// Original location of normalized token `i`.
  SourceLocation location(std::size_t i) const { return src.original_location(i); }
};

/// tokenize, normalize, parse, scan, validate, build the IR and revert.
/// Returns nullopt when an error diagnostic was produced; warnings are
/// appended to `diags` either way.
std::optional<Program> analyze(std::string_view source,
                               std::vector<Diagnostic> &diags);

// ---- scope ----------------------------------------------------------------

/// Binds every identifier of the region's statement. Throws E_UNBOUND.
ScopeBindings resolve_scope(const irdoc::Region &region, const Program &prog);

/// Size of the transfer a data clause implies for an array binding, or
/// nullopt when it cannot be known statically.
std::optional<TransferSize> infer_transfer_size(const Binding &array,
                                                const accvalidate::ClauseVar &var,
                                                const cfront::Ast &ast);

/// Math library functions every target provides.
bool is_builtin_function(std::string_view name);

/// `sizeof` of a C type as host text: "4" for float, "sizeof(point)" ...
std::string element_size(std::string_view type);

// ---- kernels --------------------------------------------------------------

/// A statement of a kernels region that becomes one kernel.
struct KernelUnit {
  const cfront::Stmt *stmt = nullptr; // as it appears in the region
  /// Outermost `for` governed by a loop directive, or null.
  const cfront::Stmt *loop = nullptr;
  const accvalidate::DirectiveNode *directive = nullptr;
};

/// Splits a kernels region into units. Throws E_NOLOOP for an empty region
/// and E_UNSUPPORTED for declarations at the region's top level.
std::vector<KernelUnit> kernel_units(const irdoc::Region &region,
                                     const Program &prog);

/// Geometry of one unit. Throws E_STEP, E_GEOM or E_UNSUPPORTED for loop
/// headers that cannot be distributed.
LaunchGeometry map_parallelism(const KernelUnit &unit, const Program &prog);

/// Builds the kernel for one unit. Throws E_UNSUPPORTED for statements that
/// cannot run on the device.
KernelSpec construct_kernel(const KernelUnit &unit, const ScopeBindings &scope,
                            const LaunchGeometry &geom, const Program &prog,
                            std::string name);

std::string reduction_identity(accvalidate::ReductionOp op, std::string_view type);

// ---- hoisting -------------------------------------------------------------

struct HoistedDecl {
  std::string name; // function name or type key ("point", "struct point")
  bool is_type = false;
  /// Definition text; functions are renamed and stripped of storage class.
  std::string text;
};

/// Types (dependency order) followed by functions (dependency order).
/// Throws E_RECURSE on recursion.
std::vector<HoistedDecl> hoist_declarations(const ScopeBindings &scope,
                                            const Program &prog);

std::string device_name(std::string_view function);

// ---- host lowering ---------------------------------------------------------

/// Device buffers visible at a point of the host program.
struct DataEnv {
  struct Entry {
    std::string handle;
    accvalidate::ClauseKind kind;
  };
  std::map<std::string, Entry, std::less<>> arrays;
};

struct LoweredData {
  std::string prologue; // allocations, mappings and host->device copies
  std::string epilogue; // device->host copies and deallocation
  DataEnv env;          // environment inside the region
};

/// Throws E_SIZE for transfers of unknown size and E_PRESENT for `present`
/// variables with no enclosing allocation.
LoweredData lower_data_clauses(const irdoc::Region &region,
                               const ScopeBindings &scope, const DataEnv &outer,
                               const Program &prog,
                               const backends::TargetProfile &profile);

struct ReductionLowering {
  std::string epilogue;   // device code after the guarded body
  std::string host_merge; // host code after the launch
  /// Serial target only: tree phases the launcher runs after each block's
  /// thread loop.
  std::string block_merge;
};
ReductionLowering lower_reduction(const KernelSpec &spec,
                                  const ReductionSpec &red,
                                  const backends::TargetProfile &profile);

std::string lower_kernel_launch(const KernelSpec &spec,
                                const backends::TargetProfile &profile);

// ---- whole file -------------------------------------------------------------

struct SiteCounts {
  int launches = 0;
  int h2d = 0;
  int d2h = 0;
  int allocs = 0;
  int reductions = 0;
  int partials_allocs = 0;
  int partials_d2h = 0;

  SiteCounts &operator+=(const SiteCounts &o);
  bool operator==(const SiteCounts &) const = default;
};

/// Counts helper-call sites in host text.
SiteCounts count_sites(std::string_view host_text,
                       const backends::TargetProfile &profile);

struct LoweredRegion {
  int id = 0;
  accvalidate::DirectiveKind kind = accvalidate::DirectiveKind::kernels;
  SourceLocation location;
  /// Code this region contributes itself (nested regions excluded).
  std::string own_text;
  SiteCounts counts;
  /// Full replacement for the dummy call, nested regions spliced in.
  std::string block;
  std::vector<std::string> kernels;
};

struct Translation {
  std::string output;
  std::string sidecar; // OpenCL only
  std::vector<LoweredRegion> regions;
  std::vector<KernelSpec> kernels;
  std::vector<HoistedDecl> hoisted;
};

/// Lowers every region for `target`. `sidecar_file` is the file name the
/// OpenCL host program loads its kernels from.
Translation translate(const Program &prog, backends::Target target,
                      std::string_view sidecar_file = {});

// Markers delimiting the generated sections of an output file.
inline constexpr std::string_view runtime_begin = "/* accb: runtime */";
inline constexpr std::string_view runtime_end = "/* accb: end runtime */";
inline constexpr std::string_view forward_begin = "/* accb: forward declarations */";
inline constexpr std::string_view forward_end = "/* accb: end forward declarations */";
inline constexpr std::string_view device_begin = "/* accb: device code */";

} // namespace accb::translate
