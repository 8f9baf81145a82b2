#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "ringspice/analysis.hpp"
#include "ringspice/errors.hpp"

using namespace ringspice;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

waveform_set make_wave(double fs, double tstop,
                       const std::vector<std::pair<std::string,
                                                   std::function<double(double)>>>& gens) {
    waveform_set w;
    w.dt = 1.0 / fs;
    size_t n = static_cast<size_t>(tstop * fs) + 1;
    for (size_t i = 0; i < n; ++i)
        w.time.push_back(static_cast<double>(i) / fs);
    for (const auto& [name, fn] : gens) {
        w.names.push_back(name);
        std::vector<double> sig;
        for (double t : w.time)
            sig.push_back(fn(t));
        w.signals.push_back(std::move(sig));
    }
    return w;
}

} // namespace

TEST_CASE("frequency of a synthetic 1 MHz sine") {
    auto w = make_wave(200e6, 40e-6,
                       {{"a", [](double t) { return std::sin(2 * kPi * 1e6 * t); }}});
    double f = estimate_frequency(w, "a", {0, 40e-6});
    CHECK(f == Approx(1e6).epsilon(1e-4));
}

TEST_CASE("frequency of an asymmetric square wave") {
    auto square = [](double t) {
        double frac = t * 1e6 - std::floor(t * 1e6);
        return frac < 0.4 ? 1.0 : 0.0; // 10% duty asymmetry
    };
    auto w = make_wave(200e6, 40e-6, {{"a", square}});
    double f = estimate_frequency(w, "a", {0, 40e-6});
    CHECK(f == Approx(1e6).epsilon(1e-3));
}

TEST_CASE("flat signal is not oscillating") {
    auto w = make_wave(1e6, 1e-3, {{"a", [](double) { return 0.7; }}});
    CHECK_THROWS_AS(estimate_frequency(w, "a", {0, 1e-3}), analysis_error);
}

TEST_CASE("frequency estimate is invariant under scale and offset") {
    auto w = make_wave(200e6, 40e-6,
                       {{"a", [](double t) { return std::sin(2 * kPi * 1e6 * t); }},
                        {"b",
                         [](double t) {
                             return -3.0 * std::sin(2 * kPi * 1e6 * t) + 0.5;
                         }}});
    double fa = estimate_frequency(w, "a", {0, 40e-6});
    double fb = estimate_frequency(w, "b", {0, 40e-6});
    CHECK(fa == Approx(fb).epsilon(1e-9));
}

TEST_CASE("phase of cosine relative to sine is 270 degrees") {
    auto w = make_wave(200e6, 40e-6,
                       {{"a", [](double t) { return std::sin(2 * kPi * 1e6 * t); }},
                        {"b", [](double t) { return std::cos(2 * kPi * 1e6 * t); }}});
    double ph = phase_difference(w, "a", "b", 1e6, {0, 40e-6});
    CHECK(ph == Approx(270.0).epsilon(1e-3));
}

TEST_CASE("phase of a signal with itself is zero") {
    auto w = make_wave(200e6, 40e-6,
                       {{"a", [](double t) { return std::sin(2 * kPi * 1e6 * t); }}});
    CHECK(phase_difference(w, "a", "a", 1e6, {0, 40e-6}) == Approx(0.0));
}

TEST_CASE("phase differences are antisymmetric mod 360") {
    for (double shift : {0.1, 0.25, 0.6, 0.93}) {
        auto w = make_wave(
            200e6, 40e-6,
            {{"a", [](double t) { return std::sin(2 * kPi * 1e6 * t); }},
             {"b", [shift](double t) {
                  return std::sin(2 * kPi * 1e6 * (t - shift * 1e-6));
              }}});
        double ab = phase_difference(w, "a", "b", 1e6, {0, 40e-6});
        double ba = phase_difference(w, "b", "a", 1e6, {0, 40e-6});
        double sum = std::fmod(ab + ba, 360.0);
        bool near_zero = sum < 1e-6 || (360.0 - sum) < 1e-6;
        CHECK(near_zero);
    }
}

TEST_CASE("phase errors on frequency mismatch") {
    auto w = make_wave(200e6, 40e-6,
                       {{"a", [](double t) { return std::sin(2 * kPi * 1e6 * t); }},
                        {"b", [](double t) { return std::sin(2 * kPi * 1.2e6 * t); }}});
    CHECK_THROWS_AS(phase_difference(w, "a", "b", 1e6, {0, 40e-6}), analysis_error);
}

TEST_CASE("four quadrature taps sum to a full turn") {
    std::vector<std::pair<std::string, std::function<double(double)>>> gens;
    for (int k = 0; k < 4; ++k)
        gens.emplace_back("t" + std::to_string(k), [k](double t) {
            return std::sin(2 * kPi * 1e6 * t - k * kPi / 2.0);
        });
    auto w = make_wave(200e6, 40e-6, gens);
    double sum = 0;
    const char* names[] = {"t0", "t1", "t2", "t3", "t0"};
    for (int k = 0; k < 4; ++k)
        sum += phase_difference(w, names[k], names[k + 1], 1e6, {0, 40e-6});
    double m = std::fmod(sum, 360.0);
    bool ok = m < 0.5 || (360.0 - m) < 0.5;
    CHECK(ok);
    CHECK(sum == Approx(360.0).epsilon(1e-3));
}

TEST_CASE("average current") {
    auto w = make_wave(1e8, 1e-5,
                       {{"const", [](double) { return 1e-3; }},
                        {"ripple", [](double t) {
                             return 1e-3 + 2e-4 * std::sin(2 * kPi * 1e6 * t);
                         }}});
    CHECK(average_current(w, "const", {0, 1e-5}) == Approx(1e-3).epsilon(1e-12));
    // whole number of periods: exactly 10 cycles of the 1 MHz ripple
    CHECK(average_current(w, "ripple", {0, 1e-5}) == Approx(1e-3).epsilon(1e-6));
    CHECK_THROWS_AS(average_current(w, "missing", {0, 1e-5}), analysis_error);
}

TEST_CASE("window-concatenation consistency of the average") {
    auto w = make_wave(1e8, 1e-5, {{"a", [](double t) {
                                        return 1e-3 + 4e-4 * std::sin(2 * kPi * 3.7e5 * t);
                                    }}});
    double full = average_current(w, "a", {0, 1e-5});
    double first = average_current(w, "a", {0, 4e-6});
    double second = average_current(w, "a", {4e-6, 1e-5});
    double stitched = (first * 4e-6 + second * 6e-6) / 1e-5;
    CHECK(stitched == Approx(full).epsilon(1e-12));
}

TEST_CASE("oscillation detection") {
    auto decay = [](double t) {
        // ring-down with a 2-period time constant
        return std::exp(-t * 1e6 / 2.0) * std::sin(2 * kPi * 1e6 * t);
    };
    auto sustained = [](double t) { return 0.4 * std::sin(2 * kPi * 1e6 * t); };
    auto w = make_wave(200e6, 40e-6, {{"decay", decay}, {"ok", sustained}});
    CHECK(!detect_oscillation(w, "decay", {0, 40e-6}, 0.01).oscillating);
    auto chk = detect_oscillation(w, "ok", {0, 40e-6}, 0.01);
    CHECK(chk.oscillating);
    CHECK(chk.amplitude == Approx(0.8).epsilon(1e-3));
    // amplitude floor: a clean but tiny signal is "not oscillating"
    CHECK(!detect_oscillation(w, "ok", {0, 40e-6}, 1.0).oscillating);
}
