#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tamdag/kernels.hpp"

namespace tamdag::kernels {

namespace {

Backend detect() {
  if (const char* env = std::getenv("TAMDAG_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return Backend::Scalar;
  }
  return backend_supported(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool backend_supported(Backend b) {
  if (b == Backend::Scalar) return true;
#if defined(TAMDAG_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw std::invalid_argument("SIMD backend not supported on this CPU: " + std::string(backend_name(b)));
  }
  current().store(b, std::memory_order_relaxed);
}

void encode_keys(std::span<const std::int32_t* const> columns, std::span<const std::uint32_t> strides,
                 std::span<std::uint32_t> out) {
#if defined(TAMDAG_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) return avx2::encode_keys(columns, strides, out);
#endif
  scalar::encode_keys(columns, strides, out);
}

void gather_multiply(std::span<const double> table, std::span<const std::uint32_t> index, std::span<double> inout) {
#if defined(TAMDAG_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) return avx2::gather_multiply(table, index, inout);
#endif
  scalar::gather_multiply(table, index, inout);
}

double sum_xlogx(std::span<const double> w) {
#if defined(TAMDAG_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) return avx2::sum_xlogx(w);
#endif
  return scalar::sum_xlogx(w);
}

}  // namespace tamdag::kernels
