#pragma once

namespace ringspice {

// Fixed physical constants, SI units.
struct physical_constants {
    double q = 1.602176634e-19;   // elementary charge, C
    double eps_si = 1.035918e-10; // silicon permittivity, F/m (11.7 * eps0)
    double k_b = 1.380649e-23;    // Boltzmann constant, J/K
};

inline constexpr physical_constants si_constants{};

} // namespace ringspice
