#include "pmbm/simd/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "pmbm/error.hpp"
#include "pmbm/simd/kernels.hpp"

namespace pmbm::simd {
namespace {

bool cpu_has_avx2() {
#if defined(PMBM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* env = std::getenv("PMBM_ISA");
  if (env != nullptr && std::string(env) == "scalar") return Isa::Scalar;
  return detected_isa();
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

Isa detected_isa() {
  static const bool avx2 = cpu_has_avx2();
  return avx2 ? Isa::Avx2 : Isa::Scalar;
}

bool isa_available(Isa isa) {
  return isa == Isa::Scalar || detected_isa() == Isa::Avx2;
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw InvalidArgument("instruction set " + std::string(isa_name(isa)) +
                          " is not available on this machine");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

#if defined(PMBM_HAVE_AVX2)
#define PMBM_DISPATCH(isa, fn, ...) \
  ((isa) == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define PMBM_DISPATCH(isa, fn, ...) scalar::fn(__VA_ARGS__)
#endif

void accumulate_offset_row(Isa isa, const SourceView& src, int row,
                           const OffsetTap& tap, BoundaryPolicy policy,
                           double* acc) {
  PMBM_DISPATCH(isa, accumulate_offset_row, src, row, tap, policy, acc);
}

void accumulate_lattice_row(Isa isa, const SourceView& src, int row,
                            const LatticeTaps& taps, BoundaryPolicy policy,
                            double* acc) {
  PMBM_DISPATCH(isa, accumulate_lattice_row, src, row, taps, policy, acc);
}

void accumulate_homography_row(Isa isa, const SourceView& src, int row,
                               const double* h, double weight,
                               BoundaryPolicy policy, double* acc) {
  PMBM_DISPATCH(isa, accumulate_homography_row, src, row, h, weight, policy,
                acc);
}

double dot(Isa isa, const double* a, const double* b, std::size_t n) {
  return PMBM_DISPATCH(isa, dot, a, b, n);
}

void axpby(Isa isa, double a, const double* x, double b, double* y,
           std::size_t n) {
  PMBM_DISPATCH(isa, axpby, a, x, b, y, n);
}

#undef PMBM_DISPATCH

}  // namespace pmbm::simd
