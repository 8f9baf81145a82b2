#include "ringspice/engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ringspice/errors.hpp"
#include "ringspice/value.hpp"

namespace ringspice {

void solver_settings::validate_transient() const {
    if (!(abstol > 0) || !(reltol > 0) || !(vntol > 0))
        throw std::invalid_argument("solver_settings: tolerances must be positive");
    if (!(dt > 0) || !(tstop > dt))
        throw std::invalid_argument("solver_settings: requires 0 < dt < tstop");
}

const std::vector<double>& waveform_set::signal(std::string_view name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name)
            return signals[i];
    throw analysis_error("unknown signal '" + std::string(name) + "'");
}

bool waveform_set::has_signal(std::string_view name) const {
    for (const auto& n : names)
        if (n == name)
            return true;
    return false;
}

void waveform_set::write_csv(std::ostream& os) const {
    os << "time_s";
    for (const auto& n : names)
        os << "," << n;
    os << "\n";
    for (size_t i = 0; i < time.size(); ++i) {
        os << format_double(time[i]);
        for (const auto& sig : signals)
            os << "," << format_double(sig[i]);
        os << "\n";
    }
}

namespace {

struct pin {
    int node_p = 0;
    int node_n = 0;
    double volts = 0;
};

struct mosfet_view {
    const mosfet_element* el;
    const mos_model_params* model;
};

struct cap_state {
    double geq = 0;
    double ieq = 0;
    double v = 0; // branch voltage at accepted step
    double i = 0; // branch current at accepted step
};

// Flattened MNA system: unknowns are node voltages (indices 1..nn-1), then
// one branch current per voltage source, then one per pinned node/branch.
class mna_system {
  public:
    mna_system(const circuit& c, const solver_settings& s) : ckt_(c), set_(s) {
        for (const auto& el : c.elements) {
            if (const auto* m = std::get_if<mosfet_element>(&el))
                mosfets_.push_back({m, &c.model_for(*m)});
            else if (const auto* r = std::get_if<resistor_element>(&el))
                resistors_.push_back(r);
            else if (const auto* cp = std::get_if<capacitor_element>(&el))
                caps_.push_back(cp);
            else if (const auto* v = std::get_if<vsource_element>(&el))
                vsources_.push_back(v);
            else if (const auto* i = std::get_if<isource_element>(&el))
                isources_.push_back(i);
        }
    }

    int node_unknowns() const { return ckt_.node_count() - 1; }
    int size() const {
        return node_unknowns() + static_cast<int>(vsources_.size() + pins_.size());
    }
    const std::vector<const capacitor_element*>& caps() const { return caps_; }
    const std::vector<const vsource_element*>& vsources() const { return vsources_; }

    void set_pins(std::vector<pin> p) { pins_ = std::move(p); }
    void clear_pins() { pins_.clear(); }

    double node_v(const Eigen::VectorXd& x, int node) const {
        return node == 0 ? 0.0 : x[node - 1];
    }
    double source_current(const Eigen::VectorXd& x, int source_index) const {
        return x[node_unknowns() + source_index];
    }

    // use_caps: stamp capacitor companion models (transient); otherwise open
    void assemble(const Eigen::VectorXd& x, bool use_caps,
                  const std::vector<cap_state>& cs, double gmin,
                  Eigen::MatrixXd& jac, Eigen::VectorXd& f) const {
        const int nn = node_unknowns();
        jac.setZero(size(), size());
        f.setZero(size());

        auto row = [&](int node) { return node - 1; }; // node > 0
        auto add_f = [&](int node, double cur) {
            if (node > 0)
                f[row(node)] += cur;
        };
        auto add_j = [&](int node, int col_node, double g) {
            if (node > 0 && col_node > 0)
                jac(row(node), row(col_node)) += g;
        };
        auto stamp_conductance = [&](int a, int b, double g, double i_ab) {
            add_f(a, i_ab);
            add_f(b, -i_ab);
            add_j(a, a, g);
            add_j(a, b, -g);
            add_j(b, a, -g);
            add_j(b, b, g);
        };

        for (int k = 1; k < ckt_.node_count(); ++k) {
            f[row(k)] += gmin * x[row(k)];
            jac(row(k), row(k)) += gmin;
        }

        for (const auto* r : resistors_) {
            double g = 1.0 / r->ohms;
            double v = node_v(x, r->a) - node_v(x, r->b);
            stamp_conductance(r->a, r->b, g, g * v);
        }

        if (use_caps) {
            for (size_t i = 0; i < caps_.size(); ++i) {
                const auto* cp = caps_[i];
                double v = node_v(x, cp->a) - node_v(x, cp->b);
                double cur = cs[i].geq * v + cs[i].ieq;
                add_f(cp->a, cur);
                add_f(cp->b, -cur);
                add_j(cp->a, cp->a, cs[i].geq);
                add_j(cp->a, cp->b, -cs[i].geq);
                add_j(cp->b, cp->a, -cs[i].geq);
                add_j(cp->b, cp->b, cs[i].geq);
            }
        }

        for (const auto* is : isources_) {
            add_f(is->p, is->amps);
            add_f(is->n, -is->amps);
        }

        for (const auto& mv : mosfets_) {
            const auto& m = *mv.el;
            const auto& p = *mv.model;
            double vd = node_v(x, m.d), vg = node_v(x, m.g), vs = node_v(x, m.s),
                   vb = node_v(x, m.b);
            mosfet_state st =
                drain_current(p, vg - vs, vd - vs, vb - vs, m.w, m.l);
            // channel current d -> s
            add_f(m.d, st.id);
            add_f(m.s, -st.id);
            double gss = -(st.gm + st.gds + st.gmb);
            add_j(m.d, m.g, st.gm);
            add_j(m.d, m.d, st.gds);
            add_j(m.d, m.b, st.gmb);
            add_j(m.d, m.s, gss);
            add_j(m.s, m.g, -st.gm);
            add_j(m.s, m.d, -st.gds);
            add_j(m.s, m.b, -st.gmb);
            add_j(m.s, m.s, -gss);
            // bulk junctions: anode at bulk for NMOS, at source/drain for PMOS
            auto junction = [&](int other) {
                int anode = (p.polarity == mos_polarity::nmos) ? m.b : other;
                int cathode = (p.polarity == mos_polarity::nmos) ? other : m.b;
                double v = node_v(x, anode) - node_v(x, cathode);
                diode_state d = bulk_diode_current(p, v);
                stamp_conductance(anode, cathode, d.g, d.i);
            };
            junction(m.s);
            junction(m.d);
        }

        int branch = nn;
        for (const auto* v : vsources_) {
            add_f(v->p, x[branch]);
            add_f(v->n, -x[branch]);
            if (v->p > 0) {
                jac(row(v->p), branch) += 1;
                jac(branch, row(v->p)) += 1;
            }
            if (v->n > 0) {
                jac(row(v->n), branch) -= 1;
                jac(branch, row(v->n)) -= 1;
            }
            f[branch] = node_v(x, v->p) - node_v(x, v->n) - v->volts;
            ++branch;
        }
        for (const auto& pn : pins_) {
            add_f(pn.node_p, x[branch]);
            add_f(pn.node_n, -x[branch]);
            if (pn.node_p > 0) {
                jac(row(pn.node_p), branch) += 1;
                jac(branch, row(pn.node_p)) += 1;
            }
            if (pn.node_n > 0) {
                jac(row(pn.node_n), branch) -= 1;
                jac(branch, row(pn.node_n)) -= 1;
            }
            f[branch] = node_v(x, pn.node_p) - node_v(x, pn.node_n) - pn.volts;
            ++branch;
        }
    }

    // Damped Newton; x is both the initial guess and the result.
    // Returns true on convergence.
    bool newton(Eigen::VectorXd& x, bool use_caps, const std::vector<cap_state>& cs,
                double gmin, std::string* diag) const {
        const int n = size();
        const int nn = node_unknowns();
        Eigen::MatrixXd jac(n, n);
        Eigen::VectorXd f(n), dx(n);
        bool have_update = false;
        Eigen::VectorXd last_dx = Eigen::VectorXd::Zero(n);
        for (int iter = 0; iter < set_.max_newton; ++iter) {
            assemble(x, use_caps, cs, gmin, jac, f);
            if (!f.allFinite()) {
                if (diag)
                    *diag = "non-finite residual";
                return false;
            }
            if (have_update && converged(x, last_dx, f)) {
                if (diag)
                    diag->clear();
                return true;
            }
            dx = jac.partialPivLu().solve(-f);
            if (!dx.allFinite()) {
                if (diag)
                    *diag = "singular Jacobian";
                return false;
            }
            for (int k = 0; k < nn; ++k)
                dx[k] = std::clamp(dx[k], -set_.v_step_limit, set_.v_step_limit);
            x += dx;
            last_dx = dx;
            have_update = true;
        }
        if (diag)
            *diag = "no convergence at node '" + worst_node(x, use_caps, cs, gmin) + "'";
        return false;
    }

    std::string worst_node(const Eigen::VectorXd& x, bool use_caps,
                           const std::vector<cap_state>& cs, double gmin) const {
        Eigen::MatrixXd jac;
        Eigen::VectorXd f;
        assemble(x, use_caps, cs, gmin, jac, f);
        int worst = 1;
        double mag = -1;
        for (int k = 1; k < ckt_.node_count(); ++k)
            if (std::fabs(f[k - 1]) > mag) {
                mag = std::fabs(f[k - 1]);
                worst = k;
            }
        return ckt_.node_names[static_cast<size_t>(worst)];
    }

    bool converged(const Eigen::VectorXd& x, const Eigen::VectorXd& dx,
                   const Eigen::VectorXd& f) const {
        const int nn = node_unknowns();
        for (int k = 0; k < nn; ++k) {
            if (std::fabs(dx[k]) > set_.reltol * std::fabs(x[k]) + set_.vntol)
                return false;
            if (std::fabs(f[k]) > set_.abstol)
                return false;
        }
        for (int k = nn; k < size(); ++k) {
            if (std::fabs(dx[k]) > set_.reltol * std::fabs(x[k]) + set_.abstol)
                return false;
            if (std::fabs(f[k]) > set_.vntol)
                return false;
        }
        return true;
    }

    // DC solve with gmin stepping on non-convergence.
    void solve_dc(Eigen::VectorXd& x) const {
        std::string diag;
        std::vector<cap_state> none;
        if (newton(x, false, none, set_.gmin, &diag))
            return;
        // sweep gmin down in decades, warm-starting each stage
        Eigen::VectorXd xg = Eigen::VectorXd::Zero(size());
        double g = 1e-3;
        while (true) {
            if (!newton(xg, false, none, g, &diag))
                throw simulation_error("dc operating point failed (gmin=" +
                                       format_double(g) + "): " + diag);
            if (g <= set_.gmin)
                break;
            g = std::max(g / 10.0, set_.gmin);
        }
        x = xg;
    }

  private:
    const circuit& ckt_;
    const solver_settings& set_;
    std::vector<mosfet_view> mosfets_;
    std::vector<const resistor_element*> resistors_;
    std::vector<const capacitor_element*> caps_;
    std::vector<const vsource_element*> vsources_;
    std::vector<const isource_element*> isources_;
    std::vector<pin> pins_;
};

std::vector<pin> initial_pins(const circuit& c) {
    std::vector<pin> pins;
    for (const auto& [node, volts] : c.initial_conditions)
        pins.push_back({node, 0, volts});
    for (const auto& el : c.elements)
        if (const auto* cp = std::get_if<capacitor_element>(&el))
            if (cp->ic)
                pins.push_back({cp->a, cp->b, *cp->ic});
    return pins;
}

} // namespace

std::map<std::string, double> dc_operating_point(const circuit& c,
                                                 const solver_settings& s) {
    c.validate();
    mna_system sys(c, s);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.size());
    sys.solve_dc(x);
    std::map<std::string, double> out;
    for (int k = 1; k < c.node_count(); ++k)
        out[c.node_names[static_cast<size_t>(k)]] = x[k - 1];
    return out;
}

namespace {

class transient_runner {
  public:
    transient_runner(const circuit& c, const solver_settings& s)
        : ckt_(c), set_(s), sys_(c, s) {}

    waveform_set run() {
        start();
        const int nsteps = static_cast<int>(std::llround(set_.tstop / set_.dt));
        waveform_set w;
        w.dt = set_.dt;
        setup_record(w);
        record(w, 0.0);
        for (int step = 1; step <= nsteps; ++step) {
            integration_method m = set_.method;
            if (step <= set_.be_startup_steps)
                m = integration_method::backward_euler;
            advance(set_.dt, m, 0, (step - 1) * set_.dt);
            record(w, step * set_.dt);
        }
        return w;
    }

  private:
    void start() {
        // DC with initial conditions pinned, then release
        auto pins = initial_pins(ckt_);
        sys_.set_pins(pins);
        Eigen::VectorXd xp = Eigen::VectorXd::Zero(
            sys_.size());
        sys_.solve_dc(xp);
        sys_.clear_pins();
        x_ = xp.head(sys_.size());
        cs_.assign(sys_.caps().size(), cap_state{});
        for (size_t i = 0; i < sys_.caps().size(); ++i) {
            const auto* cp = sys_.caps()[i];
            cs_[i].v = sys_.node_v(x_, cp->a) - sys_.node_v(x_, cp->b);
            cs_[i].i = 0.0; // steady state carries no capacitor current
        }
    }

    void advance(double h, integration_method m, int depth, double t0) {
        std::vector<cap_state> trial = cs_;
        for (size_t i = 0; i < trial.size(); ++i) {
            double c_f = sys_.caps()[i]->farads;
            if (m == integration_method::backward_euler) {
                trial[i].geq = c_f / h;
                trial[i].ieq = -trial[i].geq * cs_[i].v;
            } else {
                trial[i].geq = 2.0 * c_f / h;
                trial[i].ieq = -(trial[i].geq * cs_[i].v + cs_[i].i);
            }
        }
        Eigen::VectorXd xt = x_;
        std::string diag;
        if (!sys_.newton(xt, true, trial, set_.gmin, &diag) || !xt.allFinite()) {
            if (depth >= set_.max_halvings)
                throw simulation_error("transient step failed at t=" +
                                       format_double(t0) + " s: " + diag);
            advance(h / 2.0, m, depth + 1, t0);
            advance(h / 2.0, m, depth + 1, t0 + h / 2.0);
            return;
        }
        x_ = xt;
        for (size_t i = 0; i < trial.size(); ++i) {
            const auto* cp = sys_.caps()[i];
            double v = sys_.node_v(x_, cp->a) - sys_.node_v(x_, cp->b);
            cs_[i].v = v;
            cs_[i].i = trial[i].geq * v + trial[i].ieq;
        }
    }

    void setup_record(waveform_set& w) {
        node_cols_.clear();
        bool any_node_probe = false;
        for (const auto& p : ckt_.probes)
            if (p.kind == probe_ref::node_voltage)
                any_node_probe = true;
        if (any_node_probe) {
            for (const auto& p : ckt_.probes)
                if (p.kind == probe_ref::node_voltage) {
                    int idx = ckt_.find_node(p.target);
                    if (idx <= 0)
                        throw simulation_error("probe of unknown node '" + p.target +
                                               "'");
                    node_cols_.push_back(idx);
                    w.names.push_back("v(" + p.target + ")");
                }
        } else {
            for (int k = 1; k < ckt_.node_count(); ++k) {
                node_cols_.push_back(k);
                w.names.push_back("v(" + ckt_.node_names[static_cast<size_t>(k)] + ")");
            }
        }
        for (size_t j = 0; j < sys_.vsources().size(); ++j)
            w.names.push_back("i(" + sys_.vsources()[j]->name + ")");
        w.signals.assign(w.names.size(), {});
    }

    void record(waveform_set& w, double t) {
        if (!x_.allFinite())
            throw simulation_error("non-finite state at t=" + format_double(t) + " s");
        w.time.push_back(t);
        size_t col = 0;
        for (int idx : node_cols_)
            w.signals[col++].push_back(x_[idx - 1]);
        for (size_t j = 0; j < sys_.vsources().size(); ++j)
            w.signals[col++].push_back(sys_.source_current(x_, static_cast<int>(j)));
    }

    const circuit& ckt_;
    const solver_settings& set_;
    mna_system sys_;
    Eigen::VectorXd x_;
    std::vector<cap_state> cs_;
    std::vector<int> node_cols_;
};

} // namespace

waveform_set transient(const circuit& c, const solver_settings& s) {
    c.validate();
    s.validate_transient();
    return transient_runner(c, s).run();
}

} // namespace ringspice
