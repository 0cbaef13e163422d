#pragma once

#include <string_view>

namespace pmbm::simd {

enum class Isa { Scalar, Avx2 };

/// Best instruction set this binary was built with and the CPU supports.
Isa detected_isa();

/// Instruction set used by the dispatching entry points. Starts at
/// detected_isa() unless the environment variable PMBM_ISA=scalar is set.
Isa active_isa();

/// Throws InvalidArgument when `isa` is not available on this machine.
void set_active_isa(Isa isa);

bool isa_available(Isa isa);
std::string_view isa_name(Isa isa);

}  // namespace pmbm::simd
