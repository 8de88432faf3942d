#include "morrey/kernels.hpp"

#ifdef MORREY_WITH_NEON

#include <arm_neon.h>

namespace morrey {
namespace detail {

namespace {

inline float64x2_t vcopysign(float64x2_t mag, float64x2_t sgn) {
  const uint64x2_t mask = vdupq_n_u64(0x8000000000000000ull);
  return vreinterpretq_f64_u64(vorrq_u64(
      vreinterpretq_u64_f64(mag),
      vandq_u64(mask, vreinterpretq_u64_f64(sgn))));
}

template <PowKind K>
inline float64x2_t vpow_abs(float64x2_t d) {
  if constexpr (K == PowKind::p2) {
    return vmulq_f64(d, d);
  } else if constexpr (K == PowKind::p15) {
    const float64x2_t a = vabsq_f64(d);
    return vmulq_f64(a, vsqrtq_f64(a));
  } else if constexpr (K == PowKind::p3) {
    return vmulq_f64(vmulq_f64(d, d), vabsq_f64(d));
  } else {  // p4
    const float64x2_t d2 = vmulq_f64(d, d);
    return vmulq_f64(d2, d2);
  }
}

template <PowKind K>
inline float64x2_t vjp(float64x2_t d) {
  if constexpr (K == PowKind::p2) {
    return d;
  } else if constexpr (K == PowKind::p15) {
    return vcopysign(vsqrtq_f64(vabsq_f64(d)), d);
  } else if constexpr (K == PowKind::p3) {
    return vmulq_f64(d, vabsq_f64(d));
  } else {  // p4
    return vmulq_f64(vmulq_f64(d, d), d);
  }
}

template <PowKind K>
double row_energy_impl(const double* w, const double* u, int len, double ui, double p) {
  const float64x2_t vui = vdupq_n_f64(ui);
  float64x2_t acc = vdupq_n_f64(0.0);
  int t = 0;
  for (; t + 2 <= len; t += 2) {
    const float64x2_t d = vsubq_f64(vui, vld1q_f64(u + t));
    acc = vfmaq_f64(acc, vld1q_f64(w + t), vpow_abs<K>(d));
  }
  double sum = vaddvq_f64(acc);
  for (; t < len; ++t) sum += w[t] * pow_abs(ui - u[t], K, p);
  return sum;
}

template <PowKind K>
double row_jp_impl(const double* w, const double* u, int len, double ui, double p) {
  const float64x2_t vui = vdupq_n_f64(ui);
  float64x2_t acc = vdupq_n_f64(0.0);
  int t = 0;
  for (; t + 2 <= len; t += 2) {
    const float64x2_t d = vsubq_f64(vui, vld1q_f64(u + t));
    acc = vfmaq_f64(acc, vld1q_f64(w + t), vjp<K>(d));
  }
  double sum = vaddvq_f64(acc);
  for (; t < len; ++t) sum += w[t] * j_p_kind(ui - u[t], K, p);
  return sum;
}

double row_holder_max_impl(const double* inva, const double* u, int len, double ui) {
  const float64x2_t vui = vdupq_n_f64(ui);
  float64x2_t acc = vdupq_n_f64(0.0);
  int t = 0;
  for (; t + 2 <= len; t += 2) {
    const float64x2_t d = vabsq_f64(vsubq_f64(vui, vld1q_f64(u + t)));
    acc = vmaxq_f64(acc, vmulq_f64(vld1q_f64(inva + t), d));
  }
  double best = vmaxvq_f64(acc);
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

const KernelSet& neon_kernels(PowKind kind) {
  if (kind == PowKind::general) return scalar_kernels(kind);
  return kSets[static_cast<int>(kind)];
}

}  // namespace detail
}  // namespace morrey

#endif  // MORREY_WITH_NEON
