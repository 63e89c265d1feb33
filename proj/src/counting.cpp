#include "counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "tamdag/kernels.hpp"

namespace tamdag::detail {

namespace {

constexpr std::size_t kDenseCap = std::size_t{1} << 22;

template <typename Key>
std::vector<double> run_lengths(std::vector<Key>& keys) {
  std::sort(keys.begin(), keys.end());
  std::vector<double> counts;
  std::size_t i = 0;
  while (i < keys.size()) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    counts.push_back(static_cast<double>(j - i));
    i = j;
  }
  return counts;
}

}  // namespace

std::vector<double> joint_counts(const Dataset& ds, NodeSet s) {
  const std::size_t n = ds.rows();
  if (s.empty()) return {static_cast<double>(n)};

  // Mixed-radix strides over s; radix as a double so overflow is detectable.
  double radix = 1.0;
  for (int c : s) radix *= ds.support(c);

  if (radix <= static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
    std::vector<const std::int32_t*> cols;
    std::vector<std::uint32_t> strides;
    std::uint32_t stride = 1;
    for (int c : s) {
      cols.push_back(ds.column(c).data());
      strides.push_back(stride);
      stride *= static_cast<std::uint32_t>(ds.support(c));
    }
    std::vector<std::uint32_t> keys(n);
    kernels::encode_keys(cols, strides, keys);

    const auto states = static_cast<std::size_t>(radix);
    if (states <= std::max<std::size_t>(std::size_t{1} << 16, 4 * n) && states <= kDenseCap) {
      std::vector<std::uint32_t> dense(states, 0);
      for (std::uint32_t key : keys) ++dense[key];
      std::vector<double> counts;
      for (std::uint32_t c : dense) {
        if (c) counts.push_back(static_cast<double>(c));
      }
      return counts;
    }
    return run_lengths(keys);
  }

  std::vector<std::uint64_t> keys(n, 0);
  std::uint64_t stride = 1;
  for (int c : s) {
    const auto col = ds.column(c);
    for (std::size_t i = 0; i < n; ++i) keys[i] += static_cast<std::uint64_t>(col[i]) * stride;
    stride *= static_cast<std::uint64_t>(ds.support(c));
  }
  return run_lengths(keys);
}

double entropy_of_weights(const std::vector<double>& w, double total) {
  if (total <= 0.0) return 0.0;
  // H = log T - (1/T) sum w log w
  const double h = std::log(total) - kernels::sum_xlogx(w) / total;
  return h < 0.0 ? 0.0 : h;
}

}  // namespace tamdag::detail
