#include <cmath>

#include "tamdag/kernels.hpp"

namespace tamdag::kernels::scalar {

void encode_keys(std::span<const std::int32_t* const> columns, std::span<const std::uint32_t> strides,
                 std::span<std::uint32_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const std::int32_t* col = columns[c];
    const std::uint32_t stride = strides[c];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += static_cast<std::uint32_t>(col[i]) * stride;
  }
}

void gather_multiply(std::span<const double> table, std::span<const std::uint32_t> index, std::span<double> inout) {
  for (std::size_t i = 0; i < inout.size(); ++i) inout[i] *= table[index[i]];
}

double sum_xlogx(std::span<const double> w) {
  double acc = 0.0;
  for (double x : w) {
    if (x > 0.0) acc += x * std::log(x);
  }
  return acc;
}

}  // namespace tamdag::kernels::scalar
