#include "ringspice/ring.hpp"

#include <stdexcept>

namespace ringspice {

void ring_config::validate() const {
    if (stages < 4 || stages % 2 != 0)
        throw std::invalid_argument("ring_config: stages must be even and >= 4");
    if (!(ff_strength_ratio > 0.0) || !(ff_strength_ratio <= 1.0))
        throw std::invalid_argument("ring_config: ff_strength_ratio must be in (0, 1]");
    if (!(wp > 0.0) || !(wn > 0.0) || !(l > 0.0))
        throw std::invalid_argument("ring_config: wp, wn, l must be positive");
    if (!(vdd > 0.0))
        throw std::invalid_argument("ring_config: vdd must be positive");
    if (c_node < 0.0 || kick < 0.0)
        throw std::invalid_argument("ring_config: c_node and kick must be >= 0");
}

namespace {

const mos_model_params& require_model(const model_map& models, const std::string& name) {
    auto it = models.find(name);
    if (it == models.end())
        throw std::invalid_argument("ring generator: model card '" + name +
                                    "' not found");
    return it->second;
}

struct ring_builder {
    circuit c;
    const ring_config& cfg;
    const mos_model_params& nmos;
    const mos_model_params& pmos;
    int vdd_node = 0;

    ring_builder(const ring_config& r, const model_map& models)
        : cfg(r),
          nmos(require_model(models, r.nmos_model)),
          pmos(require_model(models, r.pmos_model)) {
        c.models[nmos.name] = nmos;
        c.models[pmos.name] = pmos;
        vdd_node = c.ensure_node("vdd");
    }

    std::string tap(int k, int n) const { return "out" + std::to_string(((k % n) + n) % n); }

    void inverter(const std::string& suffix, int in, int out, int p_rail, int n_rail,
                  int p_bulk, int n_bulk, double width_scale) {
        mosfet_element mp;
        mp.name = "mp" + suffix;
        mp.d = out;
        mp.g = in;
        mp.s = p_rail;
        mp.b = p_bulk;
        mp.model = pmos.name;
        mp.w = cfg.wp * width_scale;
        mp.l = cfg.l;
        c.elements.push_back(mp);

        mosfet_element mn;
        mn.name = "mn" + suffix;
        mn.d = out;
        mn.g = in;
        mn.s = n_rail;
        mn.b = n_bulk;
        mn.model = nmos.name;
        mn.w = cfg.wn * width_scale;
        mn.l = cfg.l;
        c.elements.push_back(mn);
    }

    void tap_caps(int n, double load) {
        for (int k = 0; k < n; ++k) {
            capacitor_element cap;
            cap.name = "cl" + std::to_string(k);
            cap.a = c.find_node(tap(k, n));
            cap.b = 0;
            cap.farads = load;
            c.elements.push_back(cap);
        }
    }

    void vsource(const std::string& name, int p, int n, double volts) {
        vsource_element v;
        v.name = name;
        v.p = p;
        v.n = n;
        v.volts = volts;
        c.elements.push_back(v);
    }

    void probes(int n, bool has_vcont) {
        for (int k = 0; k < n; ++k)
            c.probes.push_back({probe_ref::node_voltage, tap(k, n)});
        c.probes.push_back({probe_ref::source_current, "vdd"});
        if (has_vcont)
            c.probes.push_back({probe_ref::source_current, "vcont"});
    }
};

} // namespace

double ring_tap_load(const ring_config& cfg, const model_map& models) {
    const auto& nmos = require_model(models, cfg.nmos_model);
    const auto& pmos = require_model(models, cfg.pmos_model);
    double gate = cfg.l * (cfg.wp * pmos.cg_per_area + cfg.wn * nmos.cg_per_area);
    return cfg.c_node + gate * (1.0 + cfg.ff_strength_ratio);
}

double ring_total_load(const ring_config& cfg, const model_map& models) {
    return cfg.stages * ring_tap_load(cfg, models);
}

circuit build_quadrature_ring(const ring_config& cfg, const model_map& models) {
    cfg.validate();
    ring_builder b(cfg, models);
    circuit& c = b.c;
    const int n = cfg.stages;

    const bool bulk_style = cfg.style == inverter_style::bulk_controlled;
    const bool starved = cfg.style == inverter_style::current_starved;

    switch (cfg.style) {
    case inverter_style::plain: c.title = "quadring plain"; break;
    case inverter_style::current_starved: c.title = "quadring starved"; break;
    case inverter_style::bulk_controlled: c.title = "quadring bulk"; break;
    }

    int taps0 = c.ensure_node(b.tap(0, n));
    for (int k = 1; k < n; ++k)
        c.ensure_node(b.tap(k, n));
    (void)taps0;

    int vcont_node = (bulk_style || starved) ? c.ensure_node("vcont") : -1;
    int p_rail = b.vdd_node;
    int n_rail = 0;
    int hdr_gate = -1;
    if (starved) {
        p_rail = c.ensure_node("vddc");
        n_rail = c.ensure_node("gndc");
        hdr_gate = c.ensure_node("hdrg");
    }
    int p_bulk = bulk_style ? vcont_node : b.vdd_node;

    for (int k = 0; k < n; ++k) {
        int in = c.find_node(b.tap(k, n));
        int out = c.find_node(b.tap(k + 1, n));
        b.inverter(std::to_string(k), in, out, p_rail, n_rail, p_bulk, 0, 1.0);
    }
    // feedforward from the opposite-phase node: input two stages from output
    for (int k = 0; k < n; ++k) {
        int in = c.find_node(b.tap(k + 3, n));
        int out = c.find_node(b.tap(k + 1, n));
        b.inverter("f" + std::to_string(k), in, out, p_rail, n_rail, p_bulk, 0,
                   cfg.ff_strength_ratio);
    }
    if (starved) {
        mosfet_element hdr;
        hdr.name = "mphdr";
        hdr.d = p_rail;
        hdr.g = hdr_gate;
        hdr.s = b.vdd_node;
        hdr.b = b.vdd_node;
        hdr.model = b.pmos.name;
        hdr.w = cfg.wp * n;
        hdr.l = cfg.l;
        c.elements.push_back(hdr);
        mosfet_element ftr;
        ftr.name = "mnftr";
        ftr.d = n_rail;
        ftr.g = vcont_node;
        ftr.s = 0;
        ftr.b = 0;
        ftr.model = b.nmos.name;
        ftr.w = cfg.wn * n;
        ftr.l = cfg.l;
        c.elements.push_back(ftr);
    }

    b.tap_caps(n, ring_tap_load(cfg, models));
    b.vsource("vdd", b.vdd_node, 0, cfg.vdd);
    if (bulk_style || starved)
        b.vsource("vcont", vcont_node, 0, cfg.vcont);
    if (starved)
        b.vsource("vhdr", hdr_gate, 0, cfg.vdd - cfg.vcont);

    double mid = cfg.vdd / 2.0;
    c.initial_conditions.emplace_back(c.find_node(b.tap(0, n)), mid + cfg.kick);
    c.initial_conditions.emplace_back(c.find_node(b.tap(2, n)), mid - cfg.kick);

    b.probes(n, bulk_style || starved);
    c.validate();
    return c;
}

circuit build_plain_ring(int stages, const ring_config& cfg, const model_map& models) {
    if (stages < 3 || stages % 2 == 0)
        throw std::invalid_argument("build_plain_ring: stages must be odd and >= 3");
    ring_config rc = cfg;
    rc.stages = 4; // satisfy the quadrature-oriented validation; n below rules
    rc.validate();
    ring_builder b(rc, models);
    circuit& c = b.c;
    const int n = stages;
    c.title = "plain ring " + std::to_string(n);

    for (int k = 0; k < n; ++k)
        c.ensure_node(b.tap(k, n));
    for (int k = 0; k < n; ++k) {
        int in = c.find_node(b.tap(k, n));
        int out = c.find_node(b.tap(k + 1, n));
        b.inverter(std::to_string(k), in, out, b.vdd_node, 0, b.vdd_node, 0, 1.0);
    }
    // same per-tap loading rule, one driven gate pair per tap
    double gate = rc.l * (rc.wp * b.pmos.cg_per_area + rc.wn * b.nmos.cg_per_area);
    b.tap_caps(n, rc.c_node + gate);
    b.vsource("vdd", b.vdd_node, 0, rc.vdd);
    c.initial_conditions.emplace_back(c.find_node(b.tap(0, n)), rc.vdd / 2.0 + rc.kick);
    b.probes(n, false);
    c.validate();
    return c;
}

} // namespace ringspice
