#include "ringspice/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ringspice/errors.hpp"
#include "ringspice/value.hpp"

namespace ringspice {

namespace {

struct window_idx {
    size_t first = 0;
    size_t last = 0; // inclusive
};

window_idx clip(const waveform_set& w, time_window win) {
    if (w.time.empty())
        throw analysis_error("empty waveform");
    if (win.t1 <= win.t0)
        throw analysis_error("empty analysis window");
    window_idx r;
    const auto& t = w.time;
    r.first = static_cast<size_t>(
        std::lower_bound(t.begin(), t.end(), win.t0) - t.begin());
    auto hi = std::upper_bound(t.begin(), t.end(), win.t1);
    if (hi == t.begin())
        throw analysis_error("window outside the record");
    r.last = static_cast<size_t>(hi - t.begin()) - 1;
    if (r.first >= t.size() || r.last <= r.first)
        throw analysis_error("window outside the record");
    return r;
}

double mean_over(const std::vector<double>& y, window_idx w) {
    double acc = 0;
    for (size_t i = w.first; i <= w.last; ++i)
        acc += y[i];
    return acc / static_cast<double>(w.last - w.first + 1);
}

std::vector<double> crossings_in(const waveform_set& w, const std::vector<double>& y,
                                 window_idx idx) {
    double mean = mean_over(y, idx);
    std::vector<double> out;
    for (size_t i = idx.first + 1; i <= idx.last; ++i) {
        double a = y[i - 1] - mean;
        double b = y[i] - mean;
        if (a < 0.0 && b >= 0.0) {
            double frac = (b - a) > 0 ? -a / (b - a) : 0.0;
            out.push_back(w.time[i - 1] + frac * (w.time[i] - w.time[i - 1]));
        }
    }
    return out;
}

double peak_to_peak(const std::vector<double>& y, window_idx idx) {
    double lo = y[idx.first], hi = y[idx.first];
    for (size_t i = idx.first; i <= idx.last; ++i) {
        lo = std::min(lo, y[i]);
        hi = std::max(hi, y[i]);
    }
    return hi - lo;
}

} // namespace

std::vector<double> rising_mean_crossings(const waveform_set& w,
                                          std::string_view signal, time_window win) {
    return crossings_in(w, w.signal(signal), clip(w, win));
}

double estimate_frequency(const waveform_set& w, std::string_view signal,
                          time_window win) {
    auto cr = rising_mean_crossings(w, signal, win);
    if (cr.size() < 4)
        throw analysis_error("signal '" + std::string(signal) +
                             "' is not oscillating (fewer than 4 mean-crossings)");
    return (static_cast<double>(cr.size()) - 1.0) / (cr.back() - cr.front());
}

double phase_difference(const waveform_set& w, std::string_view sig_a,
                        std::string_view sig_b, double f_hz, time_window win) {
    double fa = estimate_frequency(w, sig_a, win);
    double fb = estimate_frequency(w, sig_b, win);
    if (std::fabs(fa - f_hz) > 0.01 * f_hz || std::fabs(fb - f_hz) > 0.01 * f_hz)
        throw analysis_error("phase_difference: signals not at the common frequency");
    auto ca = rising_mean_crossings(w, sig_a, win);
    auto cb = rising_mean_crossings(w, sig_b, win);

    double sum_sin = 0, sum_cos = 0;
    int pairs = 0;
    for (double ta : ca) {
        auto it = std::lower_bound(cb.begin(), cb.end(), ta);
        if (it == cb.end())
            break;
        double phase = 2.0 * std::numbers::pi * f_hz * (*it - ta);
        sum_sin += std::sin(phase);
        sum_cos += std::cos(phase);
        ++pairs;
    }
    if (pairs < 4)
        throw analysis_error("phase_difference: fewer than 4 usable periods");
    double deg = std::atan2(sum_sin, sum_cos) * 180.0 / std::numbers::pi;
    if (deg < 0.0)
        deg += 360.0;
    if (deg >= 360.0)
        deg -= 360.0;
    return deg;
}

double average_current(const waveform_set& w, std::string_view signal,
                       time_window win) {
    const auto& y = w.signal(signal);
    window_idx idx = clip(w, win);
    if (idx.last == idx.first)
        return y[idx.first];
    double acc = 0;
    for (size_t i = idx.first + 1; i <= idx.last; ++i)
        acc += 0.5 * (y[i] + y[i - 1]) * (w.time[i] - w.time[i - 1]);
    return acc / (w.time[idx.last] - w.time[idx.first]);
}

oscillation_check detect_oscillation(const waveform_set& w, std::string_view signal,
                                     time_window win, double min_amplitude) {
    const auto& y = w.signal(signal);
    window_idx idx = clip(w, win);
    size_t mid = idx.first + (idx.last - idx.first) / 2;
    window_idx first{idx.first, mid};
    window_idx second{mid, idx.last};

    oscillation_check r;
    double pp1 = peak_to_peak(y, first);
    double pp2 = peak_to_peak(y, second);
    r.amplitude = pp2;
    if (crossings_in(w, y, first).size() < 4 || crossings_in(w, y, second).size() < 4)
        return r;
    if (pp2 < 0.8 * pp1 || pp2 < min_amplitude)
        return r;
    r.oscillating = true;
    return r;
}

osc_metrics extract_ring_metrics(const waveform_set& w,
                                 const std::vector<std::string>& tap_signals,
                                 std::string_view supply_current_signal, double vdd) {
    osc_metrics m;
    if (tap_signals.empty())
        throw analysis_error("extract_ring_metrics: no tap signals");
    double t_end = w.time.back();
    m.window = {t_end / 2.0, t_end};

    bool all_osc = true;
    for (const auto& tap : tap_signals) {
        auto chk = detect_oscillation(w, tap, m.window, 0.01 * vdd);
        m.amplitude.push_back(chk.amplitude);
        all_osc = all_osc && chk.oscillating;
    }
    m.i_avg = std::fabs(average_current(w, supply_current_signal, m.window));
    if (!all_osc) {
        m.phases_deg.assign(tap_signals.size(), 0.0);
        return m;
    }

    try {
        m.frequency = estimate_frequency(w, tap_signals[0], m.window);
        // average the supply over a whole number of periods
        double span = m.window.t1 - m.window.t0;
        double periods = std::max(1.0, std::round(span * m.frequency));
        time_window iw{m.window.t1 - periods / m.frequency, m.window.t1};
        if (iw.t0 >= m.window.t0)
            m.i_avg = std::fabs(average_current(w, supply_current_signal, iw));
        m.phases_deg.push_back(0.0);
        for (size_t k = 1; k < tap_signals.size(); ++k)
            m.phases_deg.push_back(
                phase_difference(w, tap_signals[0], tap_signals[k], m.frequency,
                                 m.window));
        m.oscillating = true;
    } catch (const analysis_error&) {
        m.frequency = 0.0;
        m.phases_deg.assign(tap_signals.size(), 0.0);
        m.oscillating = false;
    }
    return m;
}

std::string format_metrics_report(const osc_metrics& m) {
    std::ostringstream os;
    os << "oscillating: " << (m.oscillating ? "yes" : "no") << "\n";
    os << "frequency_hz: " << format_double(m.frequency) << "\n";
    os << "i_avg_a: " << format_double(m.i_avg) << "\n";
    os << "analysis_window_s: " << format_double(m.window.t0) << " .. "
       << format_double(m.window.t1) << "\n";
    for (size_t k = 0; k < m.phases_deg.size(); ++k)
        os << "tap" << k << ": phase_deg=" << format_double(m.phases_deg[k])
           << " vpp=" << format_double(m.amplitude[k]) << "\n";
    return os.str();
}

} // namespace ringspice
