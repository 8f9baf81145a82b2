#include <doctest.h>

#include <cmath>

#include "ringspice/errors.hpp"
#include "ringspice/sweep.hpp"

using namespace ringspice;
using doctest::Approx;

namespace {

sweep_result synthetic_rows(const std::vector<std::pair<double, double>>& vf,
                            double vdd = 1.0) {
    sweep_result r;
    for (auto [v, f] : vf) {
        sweep_row row;
        row.vdd = vdd;
        row.vcont = v;
        row.frequency = f;
        row.i_avg = 1e-3;
        row.oscillating = f > 0;
        r.rows.push_back(row);
    }
    return r;
}

} // namespace

TEST_CASE("find_peak refines a sampled parabola") {
    std::vector<std::pair<double, double>> rows;
    for (double v = 0.0; v <= 3.4001; v += 0.1)
        rows.emplace_back(v, 1.0 - (v - 1.7) * (v - 1.7));
    auto peak = find_peak(synthetic_rows(rows), 1.0);
    CHECK(peak.valid);
    CHECK(!peak.boundary);
    CHECK(peak.vcont_star == Approx(1.7).epsilon(1e-3));
    CHECK(peak.f_max == Approx(1.0).epsilon(1e-4));
}

TEST_CASE("find_peak flags a boundary argmax") {
    std::vector<std::pair<double, double>> rows;
    for (double v = 0.0; v <= 2.0001; v += 0.1)
        rows.emplace_back(v, 1.0 + v); // monotone increasing
    auto peak = find_peak(synthetic_rows(rows), 1.0);
    CHECK(peak.valid);
    CHECK(peak.boundary);
    CHECK(peak.vcont_star == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("find_peak needs three oscillating rows") {
    auto r = synthetic_rows({{0.0, 1.0}, {0.1, 2.0}, {0.2, 0.0}, {0.3, 0.0}});
    CHECK_THROWS_AS(find_peak(r, 1.0), analysis_error);
}

TEST_CASE("tuning range report reproduces the reference arithmetic") {
    auto r1 = synthetic_rows({{0.0, 515e6}, {0.1, 540e6}});
    auto t1 = tuning_range_report(r1);
    REQUIRE(t1.size() == 1);
    CHECK(t1[0].valid);
    CHECK(t1[0].relative_range == Approx((540.0 - 515.0) / 540.0).epsilon(1e-12));
    CHECK(t1[0].relative_range == Approx(0.046).epsilon(0.01));

    auto r2 = synthetic_rows({{0.0, 290e3}, {0.1, 690e3}});
    auto t2 = tuning_range_report(r2);
    CHECK(t2[0].relative_range == Approx((690.0 - 290.0) / 690.0).epsilon(1e-12));
    CHECK(t2[0].relative_range == Approx(0.58).epsilon(0.01));

    auto r3 = synthetic_rows({{0.0, 1e6}, {0.1, 1e6}, {0.2, 1e6}});
    CHECK(tuning_range_report(r3)[0].relative_range == 0.0);

    auto r4 = synthetic_rows({{0.0, 1e6}, {0.1, 0.0}});
    CHECK(!tuning_range_report(r4)[0].valid); // insufficient rows -> flagged
}

TEST_CASE("peak_locus requires at least two vdd entries") {
    sweep_spec spec;
    spec.models = default_cards();
    spec.vdd_list = {3.0};
    CHECK_THROWS_AS(peak_locus(spec), std::invalid_argument);
}

TEST_CASE("sweep csv schemas") {
    auto r = synthetic_rows({{0.0, 0.0}, {0.5, 2e6}});
    std::string csv = sweep_csv(r);
    CHECK(csv.rfind("vdd_v,vcont_v,freq_hz,iavg_a,oscillating\n", 0) == 0);
    CHECK(csv.find("\n1,0,0,0.001,0\n") != std::string::npos);
    CHECK(csv.find("\n1,0.5,2e+06,0.001,1\n") != std::string::npos);

    std::vector<locus_row> locus(2);
    locus[0].vdd = 3.0;
    locus[0].peak = {2.5, 5e8, false, true, ""};
    locus[1].vdd = 1.0;
    locus[1].peak.valid = false;
    std::string lcsv = locus_csv(locus);
    CHECK(lcsv.rfind("vdd_v,vcont_star_v,fmax_hz,boundary_flag\n", 0) == 0);
    CHECK(lcsv.find("\n3,2.5,5e+08,0\n") != std::string::npos);
    CHECK(lcsv.find("\n1,nan,0,0\n") != std::string::npos);
}

TEST_CASE("sweep spec validation") {
    sweep_spec spec;
    spec.models = default_cards();
    spec.vcont_step = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.vcont_step = 0.1;
    spec.vcont_start = 2.0;
    spec.vcont_stop = 1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.vcont_stop = 3.5; // beyond vdd for bulk style
    spec.vcont_start = 0.0;
    spec.vdd_list = {3.0};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

// The full-pipeline checks (oscillation, quadrature, peak shape) live in the
// acceptance suite; this keeps one fast end-to-end smoke test here.
TEST_CASE("bulk-controlled ring oscillates at nominal bias") {
    sweep_spec spec;
    spec.models = default_cards();
    ring_run run = run_ring(spec.ring, spec.models, spec.seed_frequency_hint,
                            spec.record_periods, spec.samples_per_period,
                            spec.solver);
    CHECK(run.metrics.oscillating);
    CHECK(run.metrics.frequency > 0);
}

TEST_CASE("single-point sweep equals a standalone run") {
    sweep_spec spec;
    spec.models = default_cards();
    spec.vdd_list = {3.0};
    spec.vcont_start = spec.vcont_stop = 3.0;
    spec.vcont_step = 0.025;
    sweep_result r = sweep_vcont(spec);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].oscillating);

    // replicate the sweep's hint-refinement rule by hand
    ring_config cfg = spec.ring;
    cfg.vdd = 3.0;
    cfg.vcont = 3.0;
    double h = spec.seed_frequency_hint;
    osc_metrics m;
    for (int attempt = 0; attempt < 4; ++attempt) {
        m = run_ring(cfg, spec.models, h, spec.record_periods,
                     spec.samples_per_period, spec.solver)
                .metrics;
        if (!m.oscillating || std::fabs(m.frequency - h) <= 0.3 * h)
            break;
        h = m.frequency;
    }
    CHECK(r.rows[0].frequency == m.frequency);
    CHECK(r.rows[0].i_avg == m.i_avg);
}
