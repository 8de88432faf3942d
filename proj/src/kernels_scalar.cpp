#include "morrey/kernels.hpp"

namespace morrey {
namespace detail {

namespace {

template <PowKind K>
double row_energy_impl(const double* w, const double* u, int len, double ui, double p) {
  double acc = 0.0;
  for (int t = 0; t < len; ++t) acc += w[t] * pow_abs(ui - u[t], K, p);
  return acc;
}

template <PowKind K>
double row_jp_impl(const double* w, const double* u, int len, double ui, double p) {
  double acc = 0.0;
  for (int t = 0; t < len; ++t) acc += w[t] * j_p_kind(ui - u[t], K, p);
  return acc;
}

double row_holder_max_impl(const double* inva, const double* u, int len, double ui) {
  double best = 0.0;
  for (int t = 0; t < len; ++t) {
    const double v = inva[t] * std::abs(ui - u[t]);
    if (v > best) best = v;
  }
  return best;
}

template <PowKind K>
constexpr KernelSet make_set() {
  return {&row_energy_impl<K>, &row_jp_impl<K>, &row_holder_max_impl};
}

constexpr KernelSet kSets[] = {
    make_set<PowKind::p2>(), make_set<PowKind::p15>(), make_set<PowKind::p3>(),
    make_set<PowKind::p4>(), make_set<PowKind::general>(),
};

}  // namespace

const KernelSet& scalar_kernels(PowKind kind) { return kSets[static_cast<int>(kind)]; }

}  // namespace detail
}  // namespace morrey
