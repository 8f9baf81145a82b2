#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ringspice/engine.hpp"

namespace ringspice {

struct time_window {
    double t0 = 0;
    double t1 = 0;
};

// Rising mean-crossing times (linear sub-sample interpolation) of the signal
// inside the window, after subtracting the window mean.
std::vector<double> rising_mean_crossings(const waveform_set& w,
                                          std::string_view signal, time_window win);

// (N-1)/(t_last - t_first) over N >= 4 rising mean-crossings.
// Throws analysis_error when the signal does not oscillate in the window.
double estimate_frequency(const waveform_set& w, std::string_view signal,
                          time_window win);

// Phase of b relative to a in [0, 360), from rising mean-crossing offsets
// averaged (circularly) over >= 4 periods. Both signals must oscillate at f
// within 1%.
double phase_difference(const waveform_set& w, std::string_view sig_a,
                        std::string_view sig_b, double f_hz, time_window win);

// Trapezoidal time average over the window.
double average_current(const waveform_set& w, std::string_view signal,
                       time_window win);

struct oscillation_check {
    bool oscillating = false;
    double amplitude = 0; // peak-to-peak in the second half
};

// Split-window test: oscillating iff both halves have >= 4 mean-crossings and
// the second-half peak-to-peak amplitude is >= 0.8x the first half and
// >= min_amplitude (callers pass 1% of Vdd).
oscillation_check detect_oscillation(const waveform_set& w, std::string_view signal,
                                     time_window win, double min_amplitude);

struct osc_metrics {
    double frequency = 0;            // Hz, > 0 iff oscillating
    std::vector<double> phases_deg;  // per tap, [0] == 0
    std::vector<double> amplitude;   // peak-to-peak per tap, V
    double i_avg = 0;                // average supply current, A
    bool oscillating = false;
    time_window window{};
};

// Full ring extraction over the last half of the record: frequency from the
// first tap, per-tap phases, amplitudes, supply current averaged over a whole
// number of periods.
osc_metrics extract_ring_metrics(const waveform_set& w,
                                 const std::vector<std::string>& tap_signals,
                                 std::string_view supply_current_signal, double vdd);

std::string format_metrics_report(const osc_metrics& m);

} // namespace ringspice
