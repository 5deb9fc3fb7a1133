#include "accb/backends/emit.hpp"

namespace accb::backends {

namespace {

constexpr std::string_view common_includes = R"(#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <float.h>
#include <limits.h>
)";

// Host address -> device handle table backing acc_present_lookup. The
// handle type and the leading context parameter differ per target, so the
// text is instantiated with {H} and {E} / {EA}.
constexpr std::string_view registry = R"(
typedef struct {
  const void *host;
  acc_handle dev;
} acc_map_entry;
static acc_map_entry *acc_map_table;
static int acc_map_count, acc_map_capacity;

static void acc_map({E}const void *host, acc_handle dev) {
  {EA}
  if (acc_map_count == acc_map_capacity) {
    acc_map_capacity = acc_map_capacity ? 2 * acc_map_capacity : 16;
    acc_map_table = (acc_map_entry *)realloc(
        acc_map_table, (size_t)acc_map_capacity * sizeof(acc_map_entry));
    if (!acc_map_table)
      acc_fatal("out of memory");
  }
  acc_map_table[acc_map_count].host = host;
  acc_map_table[acc_map_count].dev = dev;
  ++acc_map_count;
}

static void acc_unmap({E}const void *host) {
  int i;
  {EA}
  for (i = acc_map_count - 1; i >= 0; --i)
    if (acc_map_table[i].host == host) {
      acc_map_table[i] = acc_map_table[--acc_map_count];
      return;
    }
}

static acc_handle acc_present_lookup({E}const void *host) {
  int i;
  {EA}
  for (i = acc_map_count - 1; i >= 0; --i)
    if (acc_map_table[i].host == host)
      return acc_map_table[i].dev;
  acc_fatal("present data is not on the device");
  return acc_map_table[0].dev;
}
)";

constexpr std::string_view fatal = R"(
static void acc_fatal(const char *what) {
  fprintf(stderr, "accb runtime: %s\n", what);
  exit(70);
}
)";

constexpr std::string_view serial_runtime = R"(
typedef void *acc_handle;
typedef struct {
  int x, y;
} acc_dim;

static acc_dim acc_dim_make(int x, int y) {
  acc_dim d;
  d.x = x;
  d.y = y;
  return d;
}

static acc_handle acc_alloc(size_t bytes) {
  void *p = malloc(bytes ? bytes : 1);
  if (!p)
    acc_fatal("out of memory");
  return p;
}

static void acc_copy_h2d(acc_handle dst, const void *src, size_t bytes, size_t offset) {
  memcpy((char *)dst + offset, (const char *)src + offset, bytes);
}

static void acc_copy_d2h(void *dst, acc_handle src, size_t bytes, size_t offset) {
  memcpy((char *)dst + offset, (const char *)src + offset, bytes);
}

static void acc_free(acc_handle h) { free(h); }

static void acc_sync(void) {}

static acc_handle acc_reduction_alloc(size_t bytes) { return acc_alloc(bytes); }

static void *acc_reduction_d2h(acc_handle partials, size_t bytes) {
  void *host = malloc(bytes ? bytes : 1);
  if (!host)
    acc_fatal("out of memory");
  memcpy(host, partials, bytes);
  return host;
}

static void acc_reduction_free(acc_handle partials, void *host) {
  free(partials);
  free(host);
}
)";

constexpr std::string_view cuda_runtime = R"(
typedef void *acc_handle;

static void acc_check(cudaError_t err, const char *what) {
  if (err != cudaSuccess) {
    fprintf(stderr, "accb runtime: %s: %s\n", what, cudaGetErrorString(err));
    exit(70);
  }
}

static acc_handle acc_alloc(size_t bytes) {
  void *p = 0;
  acc_check(cudaMalloc(&p, bytes ? bytes : 1), "cudaMalloc");
  return p;
}

static void acc_copy_h2d(acc_handle dst, const void *src, size_t bytes, size_t offset) {
  acc_check(cudaMemcpy((char *)dst + offset, (const char *)src + offset, bytes,
                       cudaMemcpyHostToDevice),
            "cudaMemcpy to device");
}

static void acc_copy_d2h(void *dst, acc_handle src, size_t bytes, size_t offset) {
  acc_check(cudaMemcpy((char *)dst + offset, (const char *)src + offset, bytes,
                       cudaMemcpyDeviceToHost),
            "cudaMemcpy to host");
}

static void acc_free(acc_handle h) { acc_check(cudaFree(h), "cudaFree"); }

static void acc_sync(void) {
  acc_check(cudaGetLastError(), "kernel launch");
  acc_check(cudaDeviceSynchronize(), "kernel execution");
}

static acc_handle acc_reduction_alloc(size_t bytes) { return acc_alloc(bytes); }

static void *acc_reduction_d2h(acc_handle partials, size_t bytes) {
  void *host = malloc(bytes ? bytes : 1);
  if (!host)
    acc_fatal("out of memory");
  acc_copy_d2h(host, partials, bytes, 0);
  return host;
}

static void acc_reduction_free(acc_handle partials, void *host) {
  acc_free(partials);
  free(host);
}
)";

constexpr std::string_view opencl_runtime = R"(
typedef cl_mem acc_handle;

typedef struct {
  cl_device_id device;
  cl_context context;
  cl_command_queue queue;
  cl_program program;
} acc_cl_state;
typedef acc_cl_state *acc_cl_env;

typedef struct {
  size_t size;
  const void *value;
} acc_cl_arg;

static void acc_cl_check(cl_int err, const char *what) {
  if (err != CL_SUCCESS) {
    fprintf(stderr, "accb runtime: %s failed (%d)\n", what, (int)err);
    exit(70);
  }
}

/* Kernel source sits next to the executable. */
static char *acc_cl_read_kernels(size_t *length) {
  char path[4096];
  ssize_t n = readlink("/proc/self/exe", path, sizeof path - 1);
  char *slash, *text;
  FILE *f;
  long size;
  if (n < 0)
    n = 0;
  path[n] = 0;
  slash = strrchr(path, '/');
  if (slash)
    slash[1] = 0;
  else
    path[0] = 0;
  if (strlen(path) + strlen(acc_cl_kernel_file) + 1 > sizeof path)
    acc_fatal("kernel file path too long");
  strcat(path, acc_cl_kernel_file);
  f = fopen(path, "rb");
  if (!f)
    f = fopen(acc_cl_kernel_file, "rb");
  if (!f)
    acc_fatal("cannot open kernel file");
  fseek(f, 0, SEEK_END);
  size = ftell(f);
  fseek(f, 0, SEEK_SET);
  text = (char *)malloc((size_t)size + 1);
  if (!text || fread(text, 1, (size_t)size, f) != (size_t)size)
    acc_fatal("cannot read kernel file");
  text[size] = 0;
  fclose(f);
  *length = (size_t)size;
  return text;
}

static acc_cl_env acc_cl_env_get(void) {
  static acc_cl_state state;
  static int ready;
  cl_platform_id platform;
  cl_int err;
  char *source;
  size_t length;
  if (ready)
    return &state;
  acc_cl_check(clGetPlatformIDs(1, &platform, NULL), "clGetPlatformIDs");
  acc_cl_check(clGetDeviceIDs(platform, CL_DEVICE_TYPE_DEFAULT, 1, &state.device, NULL),
               "clGetDeviceIDs");
  state.context = clCreateContext(NULL, 1, &state.device, NULL, NULL, &err);
  acc_cl_check(err, "clCreateContext");
  state.queue = clCreateCommandQueueWithProperties(state.context, state.device, NULL, &err);
  acc_cl_check(err, "clCreateCommandQueueWithProperties");
  source = acc_cl_read_kernels(&length);
  state.program = clCreateProgramWithSource(state.context, 1, (const char **)&source,
                                            &length, &err);
  acc_cl_check(err, "clCreateProgramWithSource");
  err = clBuildProgram(state.program, 1, &state.device, "-cl-std=CL2.0", NULL, NULL);
  if (err != CL_SUCCESS) {
    char log[16384];
    clGetProgramBuildInfo(state.program, state.device, CL_PROGRAM_BUILD_LOG, sizeof log,
                          log, NULL);
    fprintf(stderr, "%s\n", log);
    acc_cl_check(err, "clBuildProgram");
  }
  free(source);
  ready = 1;
  return &state;
}

static acc_handle acc_alloc(acc_cl_env env, size_t bytes) {
  cl_int err;
  cl_mem m = clCreateBuffer(env->context, CL_MEM_READ_WRITE, bytes ? bytes : 1, NULL, &err);
  acc_cl_check(err, "clCreateBuffer");
  return m;
}

static void acc_copy_h2d(acc_cl_env env, acc_handle dst, const void *src, size_t bytes,
                         size_t offset) {
  if (bytes)
    acc_cl_check(clEnqueueWriteBuffer(env->queue, dst, CL_TRUE, offset, bytes,
                                      (const char *)src + offset, 0, NULL, NULL),
                 "clEnqueueWriteBuffer");
}

static void acc_copy_d2h(acc_cl_env env, void *dst, acc_handle src, size_t bytes,
                         size_t offset) {
  if (bytes)
    acc_cl_check(clEnqueueReadBuffer(env->queue, src, CL_TRUE, offset, bytes,
                                     (char *)dst + offset, 0, NULL, NULL),
                 "clEnqueueReadBuffer");
}

static void acc_free(acc_cl_env env, acc_handle h) {
  (void)env;
  clReleaseMemObject(h);
}

static void acc_sync(acc_cl_env env) { acc_cl_check(clFinish(env->queue), "clFinish"); }

static void acc_cl_launch(acc_cl_env env, const char *name, cl_uint dims,
                          const size_t *global, const size_t *local, int nargs,
                          const acc_cl_arg *args) {
  cl_int err;
  int i;
  cl_kernel k = clCreateKernel(env->program, name, &err);
  acc_cl_check(err, "clCreateKernel");
  for (i = 0; i < nargs; ++i)
    acc_cl_check(clSetKernelArg(k, (cl_uint)i, args[i].size, args[i].value),
                 "clSetKernelArg");
  acc_cl_check(clEnqueueNDRangeKernel(env->queue, k, dims, NULL, global, local, 0, NULL,
                                      NULL),
               "clEnqueueNDRangeKernel");
  clReleaseKernel(k);
}

static acc_handle acc_reduction_alloc(acc_cl_env env, size_t bytes) {
  return acc_alloc(env, bytes);
}

static void *acc_reduction_d2h(acc_cl_env env, acc_handle partials, size_t bytes) {
  void *host = malloc(bytes ? bytes : 1);
  if (!host)
    acc_fatal("out of memory");
  acc_copy_d2h(env, host, partials, bytes, 0);
  return host;
}

static void acc_reduction_free(acc_cl_env env, acc_handle partials, void *host) {
  acc_free(env, partials);
  free(host);
}
)";

std::string instantiate(std::string_view text, std::string_view env_param,
                        std::string_view env_use) {
  std::string s(text);
  auto put = [&](std::string_view key, std::string_view value) {
    for (auto p = s.find(key); p != std::string::npos; p = s.find(key, p + value.size()))
      s.replace(p, key.size(), value);
  };
  put("{EA}", env_use);
  put("{E}", env_param);
  return s;
}

} // namespace

std::string emit_host_runtime(const TargetProfile &profile, std::string_view sidecar_file) {
  std::string out;
  switch (profile.target) {
  case Target::serial:
    out += common_includes;
    out += fatal;
    out += serial_runtime;
    out += instantiate(registry, "", "");
    break;
  case Target::cuda:
    out += common_includes;
    out += "#include <cuda_runtime.h>\n";
    out += fatal;
    out += cuda_runtime;
    out += instantiate(registry, "", "");
    break;
  case Target::opencl:
    out += "#define CL_TARGET_OPENCL_VERSION 200\n";
    out += common_includes;
    out += "#include <unistd.h>\n#include <CL/cl.h>\n";
    out += "\nstatic const char acc_cl_kernel_file[] = \"" + std::string(sidecar_file) +
           "\";\n";
    out += fatal;
    out += opencl_runtime;
    out += instantiate(registry, "acc_cl_env env, ", "(void)env;");
    break;
  }
  return out;
}

} // namespace accb::backends
