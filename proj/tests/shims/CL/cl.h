/* Minimal OpenCL host API surface for syntax-only checks without an SDK. */
#pragma once

#include <stddef.h>
#include <stdint.h>

typedef int32_t cl_int;
typedef uint32_t cl_uint;
typedef uint64_t cl_ulong;
typedef cl_ulong cl_bitfield;
typedef cl_bitfield cl_mem_flags;
typedef cl_bitfield cl_device_type;
typedef cl_uint cl_bool;
typedef cl_uint cl_program_build_info;
typedef cl_bitfield cl_queue_properties;
typedef intptr_t cl_context_properties;

typedef struct _cl_platform_id *cl_platform_id;
typedef struct _cl_device_id *cl_device_id;
typedef struct _cl_context *cl_context;
typedef struct _cl_command_queue *cl_command_queue;
typedef struct _cl_mem *cl_mem;
typedef struct _cl_program *cl_program;
typedef struct _cl_kernel *cl_kernel;
typedef struct _cl_event *cl_event;

#define CL_SUCCESS 0
#define CL_TRUE 1
#define CL_FALSE 0
#define CL_MEM_READ_WRITE ((cl_mem_flags)1 << 0)
#define CL_DEVICE_TYPE_DEFAULT ((cl_device_type)1 << 0)
#define CL_PROGRAM_BUILD_LOG 0x1183

cl_int clGetPlatformIDs(cl_uint n, cl_platform_id *platforms, cl_uint *count);
cl_int clGetDeviceIDs(cl_platform_id platform, cl_device_type type, cl_uint n,
                      cl_device_id *devices, cl_uint *count);
cl_context clCreateContext(const cl_context_properties *props, cl_uint n,
                           const cl_device_id *devices,
                           void (*notify)(const char *, const void *, size_t, void *),
                           void *user, cl_int *err);
cl_command_queue clCreateCommandQueueWithProperties(cl_context ctx, cl_device_id dev,
                                                    const cl_queue_properties *props,
                                                    cl_int *err);
cl_program clCreateProgramWithSource(cl_context ctx, cl_uint n, const char **strings,
                                     const size_t *lengths, cl_int *err);
cl_int clBuildProgram(cl_program prog, cl_uint n, const cl_device_id *devices,
                      const char *options, void (*notify)(cl_program, void *), void *user);
cl_int clGetProgramBuildInfo(cl_program prog, cl_device_id dev, cl_program_build_info what,
                             size_t size, void *value, size_t *size_ret);
cl_mem clCreateBuffer(cl_context ctx, cl_mem_flags flags, size_t size, void *host,
                      cl_int *err);
cl_int clEnqueueWriteBuffer(cl_command_queue q, cl_mem buf, cl_bool blocking, size_t offset,
                            size_t size, const void *ptr, cl_uint nwait,
                            const cl_event *wait, cl_event *event);
cl_int clEnqueueReadBuffer(cl_command_queue q, cl_mem buf, cl_bool blocking, size_t offset,
                           size_t size, void *ptr, cl_uint nwait, const cl_event *wait,
                           cl_event *event);
cl_int clReleaseMemObject(cl_mem m);
cl_int clFinish(cl_command_queue q);
cl_kernel clCreateKernel(cl_program prog, const char *name, cl_int *err);
cl_int clSetKernelArg(cl_kernel k, cl_uint index, size_t size, const void *value);
cl_int clEnqueueNDRangeKernel(cl_command_queue q, cl_kernel k, cl_uint dims,
                              const size_t *offset, const size_t *global,
                              const size_t *local, cl_uint nwait, const cl_event *wait,
                              cl_event *event);
cl_int clReleaseKernel(cl_kernel k);
