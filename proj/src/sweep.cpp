#include "ringspice/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ringspice/errors.hpp"
#include "ringspice/value.hpp"

namespace ringspice {

void sweep_spec::validate() const {
    if (!(vcont_step > 0))
        throw std::invalid_argument("sweep_spec: vcont_step must be positive");
    if (!(vcont_start <= vcont_stop))
        throw std::invalid_argument("sweep_spec: vcont_start must be <= vcont_stop");
    if (vdd_list.empty())
        throw std::invalid_argument("sweep_spec: vdd_list must not be empty");
    if (!(seed_frequency_hint > 0))
        throw std::invalid_argument("sweep_spec: seed_frequency_hint must be positive");
    if (record_periods < 40)
        throw std::invalid_argument("sweep_spec: record_periods must be >= 40");
    if (samples_per_period < 16)
        throw std::invalid_argument("sweep_spec: samples_per_period must be >= 16");
    if (ring.style == inverter_style::bulk_controlled) {
        double vmax = *std::max_element(vdd_list.begin(), vdd_list.end());
        if (vcont_start < 0 || vcont_stop > vmax)
            throw std::invalid_argument(
                "sweep_spec: bulk control stays within [0, vdd]");
    }
}

std::vector<std::string> ring_tap_signals(int stages) {
    std::vector<std::string> taps;
    for (int k = 0; k < stages; ++k)
        taps.push_back("v(out" + std::to_string(k) + ")");
    return taps;
}

ring_run run_ring(const ring_config& cfg, const model_map& models, double f_hint,
                  int record_periods, int samples_per_period,
                  const solver_settings& base) {
    solver_settings s = base;
    s.dt = 1.0 / (samples_per_period * f_hint);
    s.tstop = record_periods / f_hint;
    circuit c = build_quadrature_ring(cfg, models);
    ring_run out;
    out.wave = transient(c, s);
    out.metrics = extract_ring_metrics(out.wave, ring_tap_signals(cfg.stages),
                                       "i(vdd)", cfg.vdd);
    return out;
}

namespace {

struct point_outcome {
    sweep_row row;
    double chained_hint = 0; // 0 when the point gives no usable hint
};

point_outcome run_point(const sweep_spec& spec, double vdd, double vcont,
                        double hint, bool bootstrap) {
    ring_config cfg = spec.ring;
    cfg.vdd = vdd;
    cfg.vcont = vcont;

    point_outcome out;
    out.row.vdd = vdd;
    out.row.vcont = vcont;

    // Bootstrap points scan decades below the seed hint until oscillation
    // shows up; chained points run with the neighbor's measured frequency.
    std::vector<double> candidates{hint};
    if (bootstrap)
        for (double h = hint / 8; h >= 1e3; h /= 8)
            candidates.push_back(h);

    std::string last_error;
    bool ran = false;
    for (double cand : candidates) {
        double h = cand;
        osc_metrics m;
        bool ok = false;
        for (int attempt = 0; attempt < 4; ++attempt) {
            try {
                m = run_ring(cfg, spec.models, h, spec.record_periods,
                             spec.samples_per_period, spec.solver)
                        .metrics;
                ok = true;
                ran = true;
            } catch (const simulation_error& e) {
                last_error = e.what();
                ok = false;
                break;
            }
            if (!m.oscillating)
                break;
            if (std::fabs(m.frequency - h) <= 0.3 * h)
                break;
            h = m.frequency; // re-run with the measured frequency
        }
        if (ok && m.oscillating) {
            out.row.oscillating = true;
            out.row.frequency = m.frequency;
            out.row.i_avg = m.i_avg;
            out.chained_hint = m.frequency;
            return out;
        }
        if (ok) {
            out.row.i_avg = m.i_avg; // non-oscillating point, keep the current
            if (!bootstrap)
                return out;
        }
    }
    if (!ran) {
        out.row.failed = true;
        out.row.diagnostic = last_error.empty() ? "engine failure" : last_error;
    }
    return out;
}

} // namespace

sweep_result sweep_vcont(const sweep_spec& spec) {
    spec.validate();
    sweep_result result;
    bool any_ok = false;
    for (double vdd : spec.vdd_list) {
        double stop = spec.vcont_stop;
        if (spec.ring.style == inverter_style::bulk_controlled)
            stop = std::min(stop, vdd);
        int count =
            static_cast<int>(std::floor((stop - spec.vcont_start) / spec.vcont_step +
                                        1e-9)) +
            1;
        if (count < 1)
            count = 1;
        std::vector<sweep_row> rows(static_cast<size_t>(count));
        double hint = spec.seed_frequency_hint;
        bool have_chain = false;
        for (int i = count - 1; i >= 0; --i) { // high vcont first
            double vcont = spec.vcont_start + i * spec.vcont_step;
            point_outcome po = run_point(spec, vdd, vcont, hint, !have_chain);
            rows[static_cast<size_t>(i)] = po.row;
            if (po.chained_hint > 0) {
                hint = po.chained_hint;
                have_chain = true;
            }
            if (!po.row.failed)
                any_ok = true;
        }
        for (auto& r : rows)
            result.rows.push_back(std::move(r));
    }
    if (!any_ok)
        throw simulation_error("sweep failed at every grid point");
    return result;
}

peak_info find_peak(const sweep_result& result, double vdd) {
    std::vector<const sweep_row*> osc;
    for (const auto& r : result.rows)
        if (r.vdd == vdd && r.oscillating && !r.failed)
            osc.push_back(&r);
    if (osc.size() < 3)
        throw analysis_error("find_peak: fewer than 3 oscillating rows at vdd=" +
                             format_double(vdd));
    size_t best = 0;
    for (size_t i = 1; i < osc.size(); ++i)
        if (osc[i]->frequency > osc[best]->frequency)
            best = i;

    peak_info p;
    p.valid = true;
    if (best == 0 || best + 1 == osc.size()) {
        p.boundary = true;
        p.vcont_star = osc[best]->vcont;
        p.f_max = osc[best]->frequency;
        return p;
    }
    double x1 = osc[best - 1]->vcont, y1 = osc[best - 1]->frequency;
    double x2 = osc[best]->vcont, y2 = osc[best]->frequency;
    double x3 = osc[best + 1]->vcont, y3 = osc[best + 1]->frequency;
    double num = (x2 - x1) * (x2 - x1) * (y2 - y3) - (x2 - x3) * (x2 - x3) * (y2 - y1);
    double den = (x2 - x1) * (y2 - y3) - (x2 - x3) * (y2 - y1);
    double xs = x2;
    if (den != 0.0)
        xs = x2 - 0.5 * num / den;
    xs = std::clamp(xs, x1, x3);
    // Lagrange quadratic through the three points, evaluated at the vertex
    double l1 = (xs - x2) * (xs - x3) / ((x1 - x2) * (x1 - x3));
    double l2 = (xs - x1) * (xs - x3) / ((x2 - x1) * (x2 - x3));
    double l3 = (xs - x1) * (xs - x2) / ((x3 - x1) * (x3 - x2));
    p.vcont_star = xs;
    p.f_max = y1 * l1 + y2 * l2 + y3 * l3;
    return p;
}

std::vector<locus_row> peak_locus(const sweep_spec& spec) {
    if (spec.vdd_list.size() < 2)
        throw std::invalid_argument("peak_locus: vdd_list needs >= 2 entries");
    spec.validate();
    std::vector<locus_row> rows;
    for (double vdd : spec.vdd_list) {
        sweep_spec sub = spec;
        sub.vdd_list = {vdd};
        locus_row lr;
        lr.vdd = vdd;
        try {
            sweep_result r = sweep_vcont(sub);
            lr.peak = find_peak(r, vdd);
        } catch (const analysis_error& e) {
            lr.peak.valid = false;
            lr.peak.note = e.what();
        } catch (const simulation_error& e) {
            lr.peak.valid = false;
            lr.peak.note = e.what();
        }
        rows.push_back(std::move(lr));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const locus_row& a, const locus_row& b) { return a.vdd < b.vdd; });
    return rows;
}

std::vector<tuning_range_row> tuning_range_report(const sweep_result& result) {
    std::vector<tuning_range_row> out;
    std::vector<double> vdds;
    for (const auto& r : result.rows)
        if (std::find(vdds.begin(), vdds.end(), r.vdd) == vdds.end())
            vdds.push_back(r.vdd);
    std::sort(vdds.begin(), vdds.end());
    for (double vdd : vdds) {
        tuning_range_row tr;
        tr.vdd = vdd;
        double lo = 0, hi = 0;
        int n = 0;
        for (const auto& r : result.rows) {
            if (r.vdd != vdd || !r.oscillating || r.failed)
                continue;
            if (n == 0) {
                lo = hi = r.frequency;
            } else {
                lo = std::min(lo, r.frequency);
                hi = std::max(hi, r.frequency);
            }
            ++n;
        }
        if (n >= 2) {
            tr.valid = true;
            tr.f_min = lo;
            tr.f_max = hi;
            tr.relative_range = hi > 0 ? (hi - lo) / hi : 0.0;
        }
        out.push_back(tr);
    }
    return out;
}

std::string sweep_csv(const sweep_result& result) {
    std::ostringstream os;
    os << "vdd_v,vcont_v,freq_hz,iavg_a,oscillating\n";
    for (const auto& r : result.rows)
        os << format_double(r.vdd) << "," << format_double(r.vcont) << ","
           << format_double(r.frequency) << "," << format_double(r.i_avg) << ","
           << (r.oscillating ? 1 : 0) << "\n";
    return os.str();
}

std::string locus_csv(const std::vector<locus_row>& rows) {
    std::ostringstream os;
    os << "vdd_v,vcont_star_v,fmax_hz,boundary_flag\n";
    for (const auto& r : rows) {
        os << format_double(r.vdd) << ",";
        if (r.peak.valid)
            os << format_double(r.peak.vcont_star) << ","
               << format_double(r.peak.f_max) << "," << (r.peak.boundary ? 1 : 0);
        else
            os << "nan,0,0";
        os << "\n";
    }
    return os.str();
}

} // namespace ringspice
