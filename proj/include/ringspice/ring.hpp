#pragma once

#include "ringspice/circuit.hpp"

namespace ringspice {

enum class inverter_style { plain, current_starved, bulk_controlled };

struct ring_config {
    int stages = 4; // quadrature core is fixed at 4; even and >= 4
    inverter_style style = inverter_style::bulk_controlled;
    double vdd = 3.0;
    double vcont = 3.0;
    double wp = 2.5e-6;
    double wn = 1.0e-6;
    double l = 0.35e-6;
    double ff_strength_ratio = 0.33; // feedforward / main device widths
    double c_node = 150e-15;         // extra lumped load per tap, F
    double kick = 0.05;              // start-up asymmetry, V
    std::string nmos_model = "nmos035";
    std::string pmos_model = "pmos035";

    void validate() const; // throws std::invalid_argument
};

// Quadrature ring: per tap one main inverter (tap k -> tap k+1) and one
// feedforward inverter from the opposite-phase node (tap k+3 -> tap k+1,
// i.e. input two stages from output). Tap nodes are out0..out{N-1}; the kick
// goes on out0 (+) and its opposite-phase partner out2 (-), which seeds the
// travelling-wave mode instead of the even-ring latch. Probes cover all taps
// plus every supply current.
circuit build_quadrature_ring(const ring_config& cfg, const model_map& models);

// Odd-stage single-ended ring (no feedforward) with the same inverter and
// loading; the supply-ripple comparison baseline.
circuit build_plain_ring(int stages, const ring_config& cfg, const model_map& models);

// Lumped tap load used by the generator: c_node plus the gate area of every
// device whose gate the tap drives.
double ring_tap_load(const ring_config& cfg, const model_map& models);

// Sum of lumped tap loads and device gate loads, the C_L of the power
// estimate.
double ring_total_load(const ring_config& cfg, const model_map& models);

} // namespace ringspice
