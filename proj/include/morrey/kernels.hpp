#pragma once

#include <cmath>

namespace morrey {

/// Exponent specialization for the hot pairwise loops. p in {2, 1.5, 3, 4}
/// gets branch-free arithmetic; anything else falls back to std::pow.
enum class PowKind { p2, p15, p3, p4, general };

PowKind pow_kind_for(double p);

/// Instruction set of a kernel variant. The scalar set is the reference;
/// vector sets must match it to 1e-12 relative (different reduction trees).
enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);

/// ISA chosen at startup: MORREY_SIMD={scalar,avx2,neon} overrides, otherwise
/// the best supported variant. Unsupported requests fall back to scalar.
Isa active_isa();

/// Row primitives over contiguous weight/value slices, the only O(N^2) loops
/// in the library.
struct KernelSet {
  /// sum_t w[t] * |ui - u[t]|^p
  double (*row_energy)(const double* w, const double* u, int len, double ui, double p);
  /// sum_t w[t] * J_p(ui - u[t])
  double (*row_jp)(const double* w, const double* u, int len, double ui, double p);
  /// max_t inva[t] * |ui - u[t]|
  double (*row_holder_max)(const double* inva, const double* u, int len, double ui);
};

const KernelSet& kernels(PowKind kind, Isa isa);
inline const KernelSet& kernels(PowKind kind) { return kernels(kind, active_isa()); }

/// |a|^{p-2} a with J_p(0) = 0 for every p > 1 (the 1 < p < 2 limit value).
inline double j_p(double a, double p) {
  return std::copysign(std::pow(std::abs(a), p - 1.0), a);
}

/// |d|^p specialized by kind.
inline double pow_abs(double d, PowKind kind, double p) {
  const double a = std::abs(d);
  switch (kind) {
    case PowKind::p2: return d * d;
    case PowKind::p15: return a * std::sqrt(a);
    case PowKind::p3: return d * d * a;
    case PowKind::p4: { const double d2 = d * d; return d2 * d2; }
    case PowKind::general: return std::pow(a, p);
  }
  return std::pow(a, p);
}

/// J_p(d) specialized by kind.
inline double j_p_kind(double d, PowKind kind, double p) {
  switch (kind) {
    case PowKind::p2: return d;
    case PowKind::p15: return std::copysign(std::sqrt(std::abs(d)), d);
    case PowKind::p3: return d * std::abs(d);
    case PowKind::p4: return d * d * d;
    case PowKind::general: return j_p(d, p);
  }
  return j_p(d, p);
}

namespace detail {
const KernelSet& scalar_kernels(PowKind kind);
#ifdef MORREY_WITH_AVX2
const KernelSet& avx2_kernels(PowKind kind);
bool avx2_supported();
#endif
#ifdef MORREY_WITH_NEON
const KernelSet& neon_kernels(PowKind kind);
#endif
}  // namespace detail

}  // namespace morrey
