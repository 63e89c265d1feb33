#include <immintrin.h>

#include <cfloat>
#include <cmath>

#include "tamdag/kernels.hpp"

namespace tamdag::kernels::avx2 {

void encode_keys(std::span<const std::int32_t* const> columns, std::span<const std::uint32_t> strides,
                 std::span<std::uint32_t> out) {
  const std::size_t n = out.size();
  const std::size_t ncols = columns.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i acc = _mm256_setzero_si256();
    for (std::size_t c = 0; c < ncols; ++c) {
      const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(columns[c] + i));
      const __m256i s = _mm256_set1_epi32(static_cast<int>(strides[c]));
      acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(v, s));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), acc);
  }
  for (; i < n; ++i) {
    std::uint32_t key = 0;
    for (std::size_t c = 0; c < ncols; ++c) key += static_cast<std::uint32_t>(columns[c][i]) * strides[c];
    out[i] = key;
  }
}

void gather_multiply(std::span<const double> table, std::span<const std::uint32_t> index, std::span<double> inout) {
  const std::size_t n = inout.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(index.data() + i));
    const __m256d t = _mm256_i32gather_pd(table.data(), idx, 8);
    const __m256d v = _mm256_loadu_pd(inout.data() + i);
    _mm256_storeu_pd(inout.data() + i, _mm256_mul_pd(v, t));
  }
  for (; i < n; ++i) inout[i] *= table[index[i]];
}

namespace {

// log(x) for normal positive doubles: x = m * 2^e with m in [sqrt(1/2), sqrt(2)),
// log(m) = 2 atanh(s), s = (m - 1) / (m + 1), |s| <= 0.1716, series to s^25.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mantissa_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
  const __m256i one_exponent = _mm256_set1_epi64x(0x3ff0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mantissa_mask), one_exponent));

  // Biased exponent as a double via the 2^52 trick.
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(two52))), two52);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(1.0 / 25.0);
  for (int k = 23; k >= 1; k -= 2) p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / k));
  const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), p);

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, log_m));
}

}  // namespace

double sum_xlogx(std::span<const double> w) {
  const std::size_t n = w.size();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d tiny = _mm256_set1_pd(DBL_MIN);
  __m256d acc = zero;
  double tail = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(w.data() + i);
    const __m256d positive = _mm256_cmp_pd(x, zero, _CMP_GT_OQ);
    const __m256d subnormal = _mm256_and_pd(positive, _mm256_cmp_pd(x, tiny, _CMP_LT_OQ));
    if (_mm256_movemask_pd(subnormal) != 0) {
      for (std::size_t j = i; j < i + 4; ++j) {
        if (w[j] > 0.0) tail += w[j] * std::log(w[j]);
      }
      continue;
    }
    const __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), x, positive);
    const __m256d term = _mm256_mul_pd(safe, log_pd(safe));
    acc = _mm256_add_pd(acc, _mm256_and_pd(term, positive));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + tail;
  for (; i < n; ++i) {
    if (w[i] > 0.0) total += w[i] * std::log(w[i]);
  }
  return total;
}

}  // namespace tamdag::kernels::avx2
