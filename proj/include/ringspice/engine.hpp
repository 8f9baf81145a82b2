#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ringspice/circuit.hpp"

namespace ringspice {

struct solver_settings {
    double abstol = 1e-12;  // KCL residual, A
    double reltol = 1e-4;   // relative voltage update
    double vntol = 1e-6;    // absolute voltage update, V
    int max_newton = 100;
    double gmin = 1e-12;    // conductance to ground per node, S
    double dt = 0;          // base timestep, s
    double tstop = 0;       // end time, s
    integration_method method = integration_method::trapezoidal;
    double v_step_limit = 0.5; // Newton voltage-update clamp, V
    int be_startup_steps = 10; // backward-Euler damping at t = 0
    int max_halvings = 8;      // local dt halving before giving up

    void validate_transient() const; // throws std::invalid_argument
};

// Uniformly sampled multi-signal record.
struct waveform_set {
    std::vector<double> time;
    double dt = 0;
    std::vector<std::string> names;              // column order
    std::vector<std::vector<double>> signals;    // parallel to names

    const std::vector<double>& signal(std::string_view name) const; // throws
    bool has_signal(std::string_view name) const;
    // first column time_s, one column per signal, shortest round-trip decimals
    void write_csv(std::ostream& os) const;
};

// Nonlinear DC solve with damped Newton and gmin stepping.
std::map<std::string, double> dc_operating_point(const circuit& c,
                                                 const solver_settings& s);

// Fixed-base-step implicit transient with local step halving. Initial state:
// DC operating point with .ic nodes and capacitor IC= branches pinned.
// Records probed nodes (all nodes when no .probe) plus every voltage-source
// current; signal names are v(node) / i(source).
waveform_set transient(const circuit& c, const solver_settings& s);

} // namespace ringspice
