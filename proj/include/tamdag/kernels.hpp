#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the exact oracle and the estimators.
// Every kernel has a scalar reference implementation; SIMD variants are
// selected once at runtime from the CPU features and must agree with the
// reference (bit-exactly for the integer and gather kernels, to a few ulps for
// sum_xlogx, whose lane-wise accumulation order differs).
//
// The environment variable TAMDAG_SIMD=scalar forces the reference path.

namespace tamdag::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend b);
bool backend_supported(Backend b);
Backend active_backend();
/// Throws std::invalid_argument if the backend is not supported on this CPU.
void set_backend(Backend b);

/// out[i] = sum_c columns[c][i] * strides[c]  (mod 2^32).
void encode_keys(std::span<const std::int32_t* const> columns, std::span<const std::uint32_t> strides,
                 std::span<std::uint32_t> out);

/// inout[i] *= table[index[i]]
void gather_multiply(std::span<const double> table, std::span<const std::uint32_t> index, std::span<double> inout);

/// sum of w * log(w) over entries w > 0 (non-positive entries contribute 0).
double sum_xlogx(std::span<const double> w);

namespace scalar {
void encode_keys(std::span<const std::int32_t* const> columns, std::span<const std::uint32_t> strides,
                 std::span<std::uint32_t> out);
void gather_multiply(std::span<const double> table, std::span<const std::uint32_t> index, std::span<double> inout);
double sum_xlogx(std::span<const double> w);
}  // namespace scalar

#if defined(TAMDAG_HAVE_AVX2)
namespace avx2 {
void encode_keys(std::span<const std::int32_t* const> columns, std::span<const std::uint32_t> strides,
                 std::span<std::uint32_t> out);
void gather_multiply(std::span<const double> table, std::span<const std::uint32_t> index, std::span<double> inout);
double sum_xlogx(std::span<const double> w);
}  // namespace avx2
#endif

}  // namespace tamdag::kernels
