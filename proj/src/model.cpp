#include "ringspice/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ringspice {

namespace {

// ln(1 + e^x), stable in both tails.
double softlog(double x) {
    if (x > 0.0)
        return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// d/dx ln(1 + e^x) = logistic(x).
double logistic(double x) {
    if (x >= 0.0)
        return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// exponent clamp for the diode law
constexpr double kDiodeExpMax = 40.0;

} // namespace

double mos_model_params::thermal_voltage(const physical_constants& c) const {
    return c.k_b * temperature / c.q;
}

double mos_model_params::bulk_potential(const physical_constants& c) const {
    return 2.0 * thermal_voltage(c) * std::log(n_b / n_i);
}

void mos_model_params::validate() const {
    auto fail = [this](const char* what) {
        throw std::invalid_argument("model card '" + name + "': " + what);
    };
    if (!(n_b > n_i) || !(n_i > 0.0)) fail("requires n_b > n_i > 0");
    if (!(temperature > 0.0)) fail("requires temperature > 0");
    if (!(kp > 0.0)) fail("requires kp > 0");
    if (!(diode_is > 0.0)) fail("requires diode_is > 0");
    if (!(gamma >= 0.0)) fail("requires gamma >= 0");
    if (!(slope_n >= 1.0)) fail("requires slope_n >= 1");
    if (!(lambda_clm >= 0.0)) fail("requires lambda_clm >= 0");
    if (!(diode_n >= 1.0)) fail("requires diode_n >= 1");
    if (!(cox_prime > 0.0)) fail("requires cox_prime > 0");
    if (!(cg_per_area >= 0.0)) fail("requires cg_per_area >= 0");
    if (polarity == mos_polarity::nmos ? !(vt0 > 0.0) : !(vt0 < 0.0))
        fail("sign of vt0 must match polarity");
}

threshold_result threshold_voltage(const mos_model_params& p, double v_bs,
                                   const physical_constants& c) {
    // Normalize to an NMOS-equivalent device: v_b' > 0 forward-biases the
    // bulk junction and lowers |vt|.
    double sign = (p.polarity == mos_polarity::nmos) ? 1.0 : -1.0;
    double v_b = sign * v_bs;
    double phi2 = p.bulk_potential(c);
    double arg = phi2 - v_b;

    threshold_result r;
    if (arg < 0.0) {
        arg = 0.0;
        r.diode_region = true;
    }
    double vt_n = sign * p.vt0 + p.gamma * std::sqrt(arg);
    if (p.conventional_body_effect)
        vt_n -= p.gamma * std::sqrt(phi2);
    r.vt = sign * vt_n;
    return r;
}

double bulk_factor_gamma(double n_b_cm3, double cox_prime,
                         const physical_constants& c) {
    if (!(n_b_cm3 > 0.0) || !(cox_prime > 0.0))
        throw std::invalid_argument("bulk_factor_gamma: inputs must be positive");
    double n_b_m3 = n_b_cm3 * 1e6;
    return std::sqrt(2.0 * c.eps_si * c.q * n_b_m3) / cox_prime;
}

mosfet_state drain_current(const mos_model_params& p, double vgs, double vds,
                           double vbs, double w, double l,
                           const physical_constants& c) {
    if (!(w > 0.0) || !(l > 0.0))
        throw std::invalid_argument("drain_current: w and l must be positive");
    if (!std::isfinite(vgs) || !std::isfinite(vds) || !std::isfinite(vbs))
        throw std::invalid_argument("drain_current: non-finite terminal voltage");

    double sign = (p.polarity == mos_polarity::nmos) ? 1.0 : -1.0;
    double vgs_n = sign * vgs;
    double vds_n = sign * vds;

    threshold_result thr = threshold_voltage(p, vbs, c);
    double vt_n = sign * thr.vt;

    double vth = p.thermal_voltage(c);
    double n = p.slope_n;
    double vp = (vgs_n - vt_n) / n; // pinch-off voltage

    double a = vp / (2.0 * vth);
    double b = (vp - vds_n) / (2.0 * vth);
    double la = softlog(a);
    double lb = softlog(b);
    double sa = logistic(a);
    double sb = logistic(b);

    double big_k = 2.0 * n * p.kp * (w / l) * vth * vth;
    double fwd = la * la - lb * lb;              // vds = 0 makes a == b, fwd == 0
    double clm = 1.0 + p.lambda_clm * std::fabs(vds_n);

    double id_n = big_k * fwd * clm;
    double gm_n = big_k * clm * (la * sa - lb * sb) / (n * vth);
    double sgn_vds = (vds_n > 0.0) ? 1.0 : (vds_n < 0.0 ? -1.0 : 0.0);
    double gds_n = big_k * (clm * lb * sb / vth + p.lambda_clm * sgn_vds * fwd);

    // gmb via the chain rule through vt(v_bs): dvt_n/dv_b' = -gamma/(2 sqrt(arg))
    double gmb_n = 0.0;
    if (!thr.diode_region && p.gamma > 0.0) {
        double phi2 = p.bulk_potential(c);
        double arg = phi2 - sign * vbs;
        if (arg > 0.0)
            gmb_n = gm_n * p.gamma / (2.0 * std::sqrt(arg));
    }

    mosfet_state st;
    st.id = sign * id_n;
    st.gm = gm_n;
    st.gds = gds_n;
    st.gmb = gmb_n;

    double u = (vgs_n - vt_n) / (n * vth);
    if (thr.diode_region)
        st.region = mos_region::diode_region;
    else if (u < -3.0)
        st.region = mos_region::weak_inversion;
    else if (u > 8.0)
        st.region = mos_region::strong_inversion;
    else
        st.region = mos_region::moderate;
    return st;
}

diode_state bulk_diode_current(const mos_model_params& p, double v_forward,
                               const physical_constants& c) {
    double nvth = p.diode_n * p.thermal_voltage(c);
    double x = v_forward / nvth;
    diode_state d;
    if (x <= kDiodeExpMax) {
        double e = std::exp(x);
        d.i = p.diode_is * (e - 1.0);
        d.g = p.diode_is * e / nvth;
    } else {
        // linear extrapolation past the clamp, C1-continuous
        double e_max = std::exp(kDiodeExpMax);
        d.i = p.diode_is * (e_max * (1.0 + (x - kDiodeExpMax)) - 1.0);
        d.g = p.diode_is * e_max / nvth;
    }
    return d;
}

double dynamic_power_estimate(double f_hz, double c_load, double vdd) {
    if (f_hz < 0.0 || c_load < 0.0 || vdd < 0.0)
        throw std::invalid_argument("dynamic_power_estimate: inputs must be >= 0");
    return f_hz * c_load * vdd * vdd;
}

} // namespace ringspice
