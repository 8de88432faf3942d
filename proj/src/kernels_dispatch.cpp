#include "morrey/kernels.hpp"

#include <cstdlib>
#include <string>

namespace morrey {

PowKind pow_kind_for(double p) {
  if (p == 2.0) return PowKind::p2;
  if (p == 1.5) return PowKind::p15;
  if (p == 3.0) return PowKind::p3;
  if (p == 4.0) return PowKind::p4;
  return PowKind::general;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "scalar";
}

namespace {

Isa detect_isa() {
#ifdef MORREY_WITH_AVX2
  if (detail::avx2_supported()) return Isa::avx2;
#endif
#ifdef MORREY_WITH_NEON
  return Isa::neon;
#endif
  return Isa::scalar;
}

Isa select_isa() {
  if (const char* env = std::getenv("MORREY_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::scalar;
#ifdef MORREY_WITH_AVX2
    if (v == "avx2" && detail::avx2_supported()) return Isa::avx2;
#endif
#ifdef MORREY_WITH_NEON
    if (v == "neon") return Isa::neon;
#endif
    if (v != "auto") return Isa::scalar;  // unknown or unsupported request
  }
  return detect_isa();
}

}  // namespace

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const KernelSet& kernels(PowKind kind, Isa isa) {
  switch (isa) {
#ifdef MORREY_WITH_AVX2
    case Isa::avx2: return detail::avx2_kernels(kind);
#endif
#ifdef MORREY_WITH_NEON
    case Isa::neon: return detail::neon_kernels(kind);
#endif
    default: return detail::scalar_kernels(kind);
  }
}

}  // namespace morrey
