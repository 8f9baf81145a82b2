#pragma once

#include <string>

#include "ringspice/constants.hpp"

namespace ringspice {

enum class mos_polarity { nmos, pmos };

// One named compact-model card. Doping densities are stored in 1/cm^3 as they
// appear in card files; unit conversion happens inside the equations.
struct mos_model_params {
    std::string name;
    mos_polarity polarity = mos_polarity::nmos;
    double vt0 = 0.4;            // unbiased threshold voltage, V (negative for PMOS)
    double gamma = 0.0;          // bulk factor, sqrt(V)
    double n_b = 1e17;           // substrate doping, 1/cm^3
    double n_i = 1e10;           // intrinsic carrier density, 1/cm^3
    double temperature = 300.0;  // K
    double kp = 100e-6;          // transconductance factor mu*Cox', A/V^2
    double slope_n = 1.3;        // subthreshold slope factor, >= 1
    double lambda_clm = 0.0;     // channel-length modulation, 1/V
    double cox_prime = 4.6e-3;   // oxide capacitance per area, F/m^2
    double diode_is = 1e-14;     // bulk junction saturation current, A
    double diode_n = 1.0;        // bulk junction ideality factor, >= 1
    double cg_per_area = 4.6e-3; // lumped gate capacitance per area, F/m^2
    bool conventional_body_effect = false; // textbook form with -gamma*sqrt(2phiF)

    double thermal_voltage(const physical_constants& c = si_constants) const;
    // 2*Vth*ln(n_b/n_i), the zero-bias sqrt argument.
    double bulk_potential(const physical_constants& c = si_constants) const;
    void validate() const; // throws std::invalid_argument

    bool operator==(const mos_model_params&) const = default;
};

enum class mos_region { weak_inversion, moderate, strong_inversion, diode_region };

// Newton linearization state of one device at one bias point.
struct mosfet_state {
    double id = 0.0;  // drain current, A (sign follows raw terminal voltages)
    double gm = 0.0;  // dId/dVgs, S
    double gds = 0.0; // dId/dVds, S
    double gmb = 0.0; // dId/dVbs, S
    mos_region region = mos_region::weak_inversion;
};

struct threshold_result {
    double vt = 0.0;           // polarity-signed threshold voltage, V
    bool diode_region = false; // sqrt argument clamped at zero (junction forward)
};

// Threshold voltage with body effect. v_bs is the raw bulk-source voltage of
// the device; polarity normalization is internal.
threshold_result threshold_voltage(const mos_model_params& p, double v_bs,
                                   const physical_constants& c = si_constants);

// sqrt(2*eps_si*q*N_B)/Cox'. n_b in 1/cm^3.
double bulk_factor_gamma(double n_b_cm3, double cox_prime,
                         const physical_constants& c = si_constants);

// Smooth weak/strong-inversion drain current with derivatives. Raw terminal
// voltages; PMOS handled by internal sign normalization.
mosfet_state drain_current(const mos_model_params& p, double vgs, double vds,
                           double vbs, double w, double l,
                           const physical_constants& c = si_constants);

struct diode_state {
    double i = 0.0; // A, positive for forward bias
    double g = 0.0; // S
};

// Bulk junction diode law with clamped exponent (linear beyond the clamp,
// C1-continuous).
diode_state bulk_diode_current(const mos_model_params& p, double v_forward,
                               const physical_constants& c = si_constants);

// f * C_L * Vdd^2.
double dynamic_power_estimate(double f_hz, double c_load, double vdd);

} // namespace ringspice
