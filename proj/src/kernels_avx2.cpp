#include "morrey/kernels.hpp"

#ifdef MORREY_WITH_AVX2

#include <immintrin.h>

namespace morrey {
namespace detail {

namespace {

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
const __m256d kSignMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x8000000000000000ull));

inline __m256d vabs(__m256d x) { return _mm256_and_pd(kAbsMask, x); }
inline __m256d vcopysign(__m256d mag, __m256d sgn) {
  return _mm256_or_pd(mag, _mm256_and_pd(kSignMask, sgn));
}

template <PowKind K>
inline __m256d vpow_abs(__m256d d) {
  if constexpr (K == PowKind::p2) {
    return _mm256_mul_pd(d, d);
  } else if constexpr (K == PowKind::p15) {
    const __m256d a = vabs(d);
    return _mm256_mul_pd(a, _mm256_sqrt_pd(a));
  } else if constexpr (K == PowKind::p3) {
    return _mm256_mul_pd(_mm256_mul_pd(d, d), vabs(d));
  } else {  // p4
    const __m256d d2 = _mm256_mul_pd(d, d);
    return _mm256_mul_pd(d2, d2);
  }
}

template <PowKind K>
inline __m256d vjp(__m256d d) {
  if constexpr (K == PowKind::p2) {
    return d;
  } else if constexpr (K == PowKind::p15) {
    return vcopysign(_mm256_sqrt_pd(vabs(d)), d);
  } else if constexpr (K == PowKind::p3) {
    return _mm256_mul_pd(d, vabs(d));
  } else {  // p4
    return _mm256_mul_pd(_mm256_mul_pd(d, d), d);
  }
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(s, _mm_unpackhi_pd(s, s)));
}

template <PowKind K>
double row_energy_impl(const double* w, const double* u, int len, double ui, double p) {
  const __m256d vui = _mm256_set1_pd(ui);
  __m256d acc = _mm256_setzero_pd();
  int t = 0;
  for (; t + 4 <= len; t += 4) {
    const __m256d d = _mm256_sub_pd(vui, _mm256_loadu_pd(u + t));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + t), vpow_abs<K>(d), acc);
  }
  double sum = hsum(acc);
  for (; t < len; ++t) sum += w[t] * pow_abs(ui - u[t], K, p);
  return sum;
}

template <PowKind K>
double row_jp_impl(const double* w, const double* u, int len, double ui, double p) {
  const __m256d vui = _mm256_set1_pd(ui);
  __m256d acc = _mm256_setzero_pd();
  int t = 0;
  for (; t + 4 <= len; t += 4) {
    const __m256d d = _mm256_sub_pd(vui, _mm256_loadu_pd(u + t));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + t), vjp<K>(d), acc);
  }
  double sum = hsum(acc);
  for (; t < len; ++t) sum += w[t] * j_p_kind(ui - u[t], K, p);
  return sum;
}

double row_holder_max_impl(const double* inva, const double* u, int len, double ui) {
  const __m256d vui = _mm256_set1_pd(ui);
  __m256d acc = _mm256_setzero_pd();
  int t = 0;
  for (; t + 4 <= len; t += 4) {
    const __m256d d = vabs(_mm256_sub_pd(vui, _mm256_loadu_pd(u + t)));
    acc = _mm256_max_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(inva + t), d));
  }
  double best = hmax(acc);
  for (; t < len; ++t) best = std::max(best, inva[t] * std::abs(ui - u[t]));
  return best;
}

template <PowKind K>
constexpr KernelSet make_set() {
  return {&row_energy_impl<K>, &row_jp_impl<K>, &row_holder_max_impl};
}

const KernelSet kSets[] = {
    make_set<PowKind::p2>(), make_set<PowKind::p15>(), make_set<PowKind::p3>(),
    make_set<PowKind::p4>(),
};

}  // namespace

const KernelSet& avx2_kernels(PowKind kind) {
  // std::pow has no vector form here; the general kind stays scalar.
  if (kind == PowKind::general) return scalar_kernels(kind);
  return kSets[static_cast<int>(kind)];
}

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

}  // namespace detail
}  // namespace morrey

#endif  // MORREY_WITH_AVX2
