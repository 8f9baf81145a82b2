#pragma once

#include <string>
#include <vector>

#include "ringspice/analysis.hpp"
#include "ringspice/ring.hpp"

namespace ringspice {

struct sweep_spec {
    ring_config ring;                   // vdd/vcont fields overridden per grid point
    std::vector<double> vdd_list{3.0};
    double vcont_start = 0.0;
    double vcont_stop = 3.0;
    double vcont_step = 0.025;
    model_map models;
    double seed_frequency_hint = 500e6; // dt sizing at the first grid point
    int record_periods = 48;            // expected periods per record
    int samples_per_period = 200;
    solver_settings solver;             // dt/tstop filled in per point

    void validate() const; // throws std::invalid_argument
};

struct sweep_row {
    double vdd = 0;
    double vcont = 0;
    double frequency = 0; // Hz, 0 when not oscillating
    double i_avg = 0;     // A
    bool oscillating = false;
    bool failed = false;      // engine failure at this grid point
    std::string diagnostic;   // set when failed
};

struct sweep_result {
    std::vector<sweep_row> rows; // vdd in list order, vcont ascending
};

struct peak_info {
    double vcont_star = 0;
    double f_max = 0;
    bool boundary = false; // argmax at the edge of the oscillating range
    bool valid = false;
    std::string note;
};

struct locus_row {
    double vdd = 0;
    peak_info peak;
};

struct tuning_range_row {
    double vdd = 0;
    double f_min = 0;
    double f_max = 0;
    double relative_range = 0; // (f_max - f_min) / f_max
    bool valid = false;
};

// One transient of a configured ring, dt sized from the frequency hint.
struct ring_run {
    waveform_set wave;
    osc_metrics metrics;
};
ring_run run_ring(const ring_config& cfg, const model_map& models, double f_hint,
                  int record_periods, int samples_per_period,
                  const solver_settings& base);

// Grid sweep over (vdd, vcont). Points run from high vcont down so the
// frequency hint chains from the strong-oscillation side; each oscillating
// point reseeds the hint, and the first point of every vdd bootstraps by
// scanning decades below the seed hint until oscillation is found. Engine
// failures are recorded as failed rows; the sweep continues.
sweep_result sweep_vcont(const sweep_spec& spec);

// Grid argmax over oscillating rows at this vdd, refined by 3-point parabolic
// interpolation; boundary argmax is returned unrefined with the flag set.
// Throws analysis_error with fewer than 3 oscillating rows.
peak_info find_peak(const sweep_result& result, double vdd);

// find_peak per vdd over spec.vdd_list (>= 2 entries), sorted by vdd.
std::vector<locus_row> peak_locus(const sweep_spec& spec);

// Per-vdd frequency extremes over oscillating rows, sorted by vdd.
std::vector<tuning_range_row> tuning_range_report(const sweep_result& result);

// vdd_v,vcont_v,freq_hz,iavg_a,oscillating
std::string sweep_csv(const sweep_result& result);
// vdd_v,vcont_star_v,fmax_hz,boundary_flag
std::string locus_csv(const std::vector<locus_row>& rows);

std::vector<std::string> ring_tap_signals(int stages);

} // namespace ringspice
