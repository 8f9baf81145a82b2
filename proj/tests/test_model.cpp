#include <doctest.h>

#include <cmath>

#include "ringspice/cards.hpp"
#include "ringspice/errors.hpp"
#include "ringspice/model.hpp"

using namespace ringspice;
using doctest::Approx;

namespace {

// Card with an exactly constructed bulk potential 2*Vth*ln(n_b/n_i).
mos_model_params nmos_card(double vt0, double gamma, double phi2) {
    mos_model_params p;
    p.name = "tn";
    p.polarity = mos_polarity::nmos;
    p.vt0 = vt0;
    p.gamma = gamma;
    p.n_i = 1e10;
    p.temperature = 300.0;
    double vth = p.thermal_voltage();
    p.n_b = p.n_i * std::exp(phi2 / (2.0 * vth));
    p.kp = 170e-6;
    p.slope_n = 1.3;
    p.lambda_clm = 0.06;
    return p;
}

mos_model_params mirror_pmos(const mos_model_params& n) {
    mos_model_params p = n;
    p.name = "tp";
    p.polarity = mos_polarity::pmos;
    p.vt0 = -n.vt0;
    return p;
}

} // namespace

TEST_CASE("physical constants are the pinned values") {
    CHECK(si_constants.q == 1.602176634e-19);
    CHECK(si_constants.k_b == 1.380649e-23);
    CHECK(si_constants.eps_si == 1.035918e-10);
}

TEST_CASE("threshold voltage: gamma = 0 removes the body effect") {
    auto p = nmos_card(0.4, 0.0, 0.7);
    for (double vb : {-2.0, -0.3, 0.0, 0.5, 3.0}) {
        auto r = threshold_voltage(p, vb);
        CHECK(r.vt == 0.4);
        CHECK((vb > 0.7) == r.diode_region); // flag still tracks the argument
    }
}

TEST_CASE("threshold voltage: hand evaluation with reverse bulk bias") {
    auto p = nmos_card(0.4, 0.58, 0.7);
    auto r = threshold_voltage(p, -0.5);
    CHECK(!r.diode_region);
    CHECK(r.vt == Approx(0.4 + 0.58 * std::sqrt(1.2)).epsilon(1e-9));
    CHECK(r.vt == Approx(1.0354).epsilon(1e-4));
}

TEST_CASE("threshold voltage: negative sqrt argument clamps and flags") {
    auto p = nmos_card(0.4, 0.58, 0.7);
    auto r = threshold_voltage(p, 0.9); // arg = 0.7 - 0.9 < 0
    CHECK(r.diode_region);
    CHECK(r.vt == 0.4);
}

TEST_CASE("threshold voltage: conventional form restores vt0 at zero bias") {
    auto p = nmos_card(0.4, 0.58, 0.7);
    p.conventional_body_effect = true;
    auto r = threshold_voltage(p, 0.0);
    CHECK(r.vt == Approx(0.4).epsilon(1e-12));
    // reverse bias still raises vt
    CHECK(threshold_voltage(p, -0.5).vt > 0.4);
}

TEST_CASE("threshold voltage: PMOS sign folding") {
    auto p = mirror_pmos(nmos_card(0.45, 0.6, 0.7));
    // zero bulk bias
    CHECK(threshold_voltage(p, 0.0).vt ==
          Approx(-(0.45 + 0.6 * std::sqrt(0.7))).epsilon(1e-12));
    // vbs = vcont - vdd < 0 forward-biases the PMOS junction, shrinking |vt|
    auto fwd = threshold_voltage(p, -0.4);
    CHECK(std::fabs(fwd.vt) < 0.45 + 0.6 * std::sqrt(0.7));
    CHECK(!fwd.diode_region);
    // deep forward bias trips the diode flag and clamps at vt0
    auto deep = threshold_voltage(p, -1.0);
    CHECK(deep.diode_region);
    CHECK(deep.vt == Approx(-0.45).epsilon(1e-12));
}

TEST_CASE("body-effect derivative matches the analytic expression") {
    auto p = nmos_card(0.4, 0.58, 0.7);
    const double h = 1e-7;
    for (double vb : {-1.0, -0.5, 0.0, 0.3}) {
        double fd = (threshold_voltage(p, vb + h).vt -
                     threshold_voltage(p, vb - h).vt) /
                    (2.0 * h);
        double arg = 0.7 - vb;
        double analytic = -p.gamma / (2.0 * std::sqrt(arg));
        CHECK(fd == Approx(analytic).epsilon(1e-6));
    }
}

TEST_CASE("vt is non-increasing in forward bulk bias, constant after clamp") {
    auto p = nmos_card(0.4, 0.58, 0.7);
    double prev = threshold_voltage(p, -2.0).vt;
    bool clamped = false;
    for (double vb = -2.0; vb <= 1.5; vb += 0.01) {
        auto r = threshold_voltage(p, vb);
        CHECK(r.vt <= prev + 1e-15);
        if (r.diode_region) {
            clamped = true;
            CHECK(r.vt == 0.4);
        }
        prev = r.vt;
    }
    CHECK(clamped);
}

TEST_CASE("bulk factor gamma: direct evaluation and scaling laws") {
    double g = bulk_factor_gamma(1e17, 4.6e-3);
    double expected =
        std::sqrt(2.0 * 1.035918e-10 * 1.602176634e-19 * 1e23) / 4.6e-3;
    CHECK(g == Approx(expected).epsilon(1e-14));
    CHECK(g == Approx(0.396).epsilon(2e-3));
    CHECK(bulk_factor_gamma(4e17, 4.6e-3) == 2.0 * g);
    CHECK(bulk_factor_gamma(1e17, 9.2e-3) == g / 2.0);
    CHECK_THROWS_AS(bulk_factor_gamma(-1.0, 4.6e-3), std::invalid_argument);
    CHECK_THROWS_AS(bulk_factor_gamma(1e17, 0.0), std::invalid_argument);
}

TEST_CASE("drain current at pinch-off sits on the moderate-inversion anchor") {
    auto p = nmos_card(0.4, 0.0, 0.7);
    double w = 1e-6, l = 0.35e-6;
    double vth = p.thermal_voltage();
    auto st = drain_current(p, 0.4, 3.0, 0.0, w, l);
    double anchor = 2.0 * p.slope_n * p.kp * (w / l) * vth * vth *
                    std::log(2.0) * std::log(2.0);
    CHECK(st.id > 0.0);
    CHECK(st.id < 10.0 * anchor);
    CHECK(st.id > anchor / 10.0);
    CHECK(st.region == mos_region::moderate);
}

TEST_CASE("subthreshold leakage and decade slope") {
    auto p = nmos_card(0.4, 0.0, 0.7);
    double w = 1e-6, l = 0.35e-6;
    double vth = p.thermal_voltage();
    double decade = p.slope_n * vth * std::log(10.0);

    auto lo = drain_current(p, 0.0, 3.0, 0.0, w, l);
    CHECK(lo.id > 0.0); // leakage, not zero
    CHECK(lo.region == mos_region::weak_inversion);

    auto hi = drain_current(p, 0.0 + decade, 3.0, 0.0, w, l);
    CHECK(hi.id / lo.id == Approx(10.0).epsilon(0.02));

    // two-point slope oracle deep in weak inversion
    auto a = drain_current(p, -0.1, 3.0, 0.0, w, l);
    auto b = drain_current(p, 0.1, 3.0, 0.0, w, l);
    double slope = 0.2 / std::log10(b.id / a.id);
    CHECK(slope == Approx(decade).epsilon(0.02));
}

TEST_CASE("drain current vanishes exactly at vds = 0") {
    auto p = nmos_card(0.4, 0.58, 0.7);
    CHECK(drain_current(p, 1.3, 0.0, 0.0, 1e-6, 0.35e-6).id == 0.0);
    CHECK(drain_current(p, 0.1, 0.0, -0.2, 2e-6, 1e-6).id == 0.0);
}

TEST_CASE("drain current is continuous across threshold") {
    auto p = nmos_card(0.4, 0.0, 0.7);
    double prev = drain_current(p, 0.2, 3.0, 0.0, 1e-6, 0.35e-6).id;
    for (double vgs = 0.201; vgs <= 0.6; vgs += 0.001) {
        double id = drain_current(p, vgs, 3.0, 0.0, 1e-6, 0.35e-6).id;
        CHECK(std::fabs(id - prev) <= 0.05 * std::max(id, prev));
        prev = id;
    }
}

TEST_CASE("gm, gds, gmb match central finite differences on a bias grid") {
    auto p = nmos_card(0.4, 0.58, 0.7);
    double w = 1e-6, l = 0.35e-6;
    const double h = 1e-6;
    auto id_at = [&](double vgs, double vds, double vbs) {
        return drain_current(p, vgs, vds, vbs, w, l).id;
    };
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
        double vgs = 0.0 + 3.0 * i / 19.0;
        for (int j = 0; j < 20; ++j) {
            double vds = 0.0 + 3.0 * j / 19.0;
            for (int k = 0; k < 5; ++k) {
                double vbs = -1.0 + 1.25 * k / 4.0; // stays clear of the clamp
                auto st = drain_current(p, vgs, vds, vbs, w, l);
                double fd_gm =
                    (id_at(vgs + h, vds, vbs) - id_at(vgs - h, vds, vbs)) / (2 * h);
                double fd_gds =
                    (id_at(vgs, vds + h, vbs) - id_at(vgs, vds - h, vbs)) / (2 * h);
                double fd_gmb =
                    (id_at(vgs, vds, vbs + h) - id_at(vgs, vds, vbs - h)) / (2 * h);
                double scale_gm = std::max(std::fabs(st.gm), 1e-15);
                double scale_gds = std::max(std::fabs(st.gds), 1e-15);
                double scale_gmb = std::max(std::fabs(st.gmb), 1e-15);
                CHECK(std::fabs(fd_gm - st.gm) / scale_gm < 1e-4);
                CHECK(std::fabs(fd_gds - st.gds) / scale_gds < 1e-4);
                CHECK(std::fabs(fd_gmb - st.gmb) / scale_gmb < 1e-4);
                CHECK(st.gds >= 0.0);
                ++checked;
            }
        }
    }
    CHECK(checked == 20 * 20 * 5);
}

TEST_CASE("polarity symmetry is exact") {
    auto n = nmos_card(0.4, 0.58, 0.7);
    auto p = mirror_pmos(n);
    for (double vgs : {0.2, 0.5, 1.1, 2.8}) {
        for (double vds : {0.05, 0.9, 3.0}) {
            for (double vbs : {-0.4, 0.0, 0.2}) {
                auto sn = drain_current(n, vgs, vds, vbs, 1e-6, 0.35e-6);
                auto sp = drain_current(p, -vgs, -vds, -vbs, 1e-6, 0.35e-6);
                CHECK(std::fabs(sp.id + sn.id) <= 1e-12 * std::fabs(sn.id));
                CHECK(sp.gm == Approx(sn.gm).epsilon(1e-12));
                CHECK(sp.gds == Approx(sn.gds).epsilon(1e-12));
                CHECK(sp.gmb == Approx(sn.gmb).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("drain current argument errors") {
    auto p = nmos_card(0.4, 0.0, 0.7);
    CHECK_THROWS_AS(drain_current(p, 1.0, 1.0, 0.0, 0.0, 1e-6),
                    std::invalid_argument);
    CHECK_THROWS_AS(drain_current(p, std::nan(""), 1.0, 0.0, 1e-6, 1e-6),
                    std::invalid_argument);
}

TEST_CASE("bulk diode law") {
    auto p = nmos_card(0.4, 0.0, 0.7);
    p.diode_is = 2e-13;
    p.diode_n = 1.5;
    double nvth = p.diode_n * p.thermal_voltage();

    auto zero = bulk_diode_current(p, 0.0);
    CHECK(zero.i == 0.0);
    CHECK(zero.g == Approx(p.diode_is / nvth).epsilon(1e-12));

    auto ln2 = bulk_diode_current(p, nvth * std::log(2.0));
    CHECK(ln2.i == Approx(p.diode_is).epsilon(1e-12));

    auto rev = bulk_diode_current(p, -1.0);
    CHECK(rev.i == Approx(-p.diode_is).epsilon(1e-10));

    // clamp keeps the law C1-continuous and finite
    double v_clamp = 40.0 * nvth;
    auto just_below = bulk_diode_current(p, v_clamp - 1e-9);
    auto just_above = bulk_diode_current(p, v_clamp + 1e-9);
    CHECK(just_above.i == Approx(just_below.i).epsilon(1e-6));
    CHECK(just_above.g == Approx(just_below.g).epsilon(1e-6));
    CHECK(std::isfinite(bulk_diode_current(p, 100.0).i));
}

TEST_CASE("dynamic power estimate") {
    CHECK(dynamic_power_estimate(240e6, 100e-15, 3.0) == Approx(2.16e-4).epsilon(1e-12));
    CHECK(dynamic_power_estimate(1e9, 1e-12, 0.0) == 0.0);
    double p1 = dynamic_power_estimate(1e8, 2e-13, 1.5);
    double p2 = dynamic_power_estimate(1e8, 2e-13, 3.0);
    CHECK(p2 == 4.0 * p1);
    CHECK_THROWS_AS(dynamic_power_estimate(-1.0, 1e-12, 1.0), std::invalid_argument);
}

TEST_CASE("model cards parse, reject unknown keys, round-trip") {
    auto cards = default_cards();
    REQUIRE(cards.count("nmos035") == 1);
    REQUIRE(cards.count("pmos035") == 1);
    CHECK(cards["nmos035"].polarity == mos_polarity::nmos);
    CHECK(cards["nmos035"].vt0 == 0.4);
    CHECK(cards["pmos035"].vt0 == -0.45);

    auto again = parse_model_cards(format_model_cards(cards));
    CHECK(again == cards);

    CHECK_THROWS_AS(parse_model_cards("[x]\npolarity = nmos\nvt_zero = 1\n"),
                    parse_error);
    CHECK_THROWS_AS(parse_model_cards("[x]\npolarity = nmos\nvt0 = -0.3\n"),
                    std::invalid_argument); // sign mismatch
    auto hef = parse_model_cards(hef4007_cards_text());
    CHECK(hef.at("nmos4007").vt0 == 1.4);
    CHECK(hef.at("pmos4007").vt0 == -1.4);
}
