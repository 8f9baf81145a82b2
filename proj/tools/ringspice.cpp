// ringspice: quadrature ring oscillator lab
//   gen        emit a runnable netlist for one oscillator variant
//   run        single transient -> waveform CSV + metrics report
//   sweep      frequency/current vs control voltage -> CSV
//   peak-locus control voltage of maximum frequency vs supply -> CSV

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ringspice/errors.hpp"
#include "ringspice/netlist.hpp"
#include "ringspice/sweep.hpp"

using namespace ringspice;

namespace {

struct common_opts {
    std::string cards_file;
    std::string style = "bulk";
    std::string vdd = "3";
    std::string vcont = "3";
    std::string wp = "2.5u";
    std::string wn = "1u";
    std::string l = "0.35u";
    std::string ff_ratio = "0.33";
    std::string c_node = "150f";
    std::string kick = "50m";
    std::string hint = "500meg";
    int stages = 4;
};

model_map load_cards(const std::string& path) {
    if (path.empty())
        return default_cards();
    return load_model_cards(path);
}

inverter_style style_from(const std::string& s) {
    if (s == "plain")
        return inverter_style::plain;
    if (s == "starved")
        return inverter_style::current_starved;
    if (s == "bulk")
        return inverter_style::bulk_controlled;
    throw std::invalid_argument("style must be plain, starved or bulk");
}

ring_config ring_from(const common_opts& o, const model_map& models) {
    ring_config cfg;
    cfg.stages = o.stages;
    cfg.style = style_from(o.style);
    cfg.vdd = parse_value(o.vdd);
    cfg.vcont = parse_value(o.vcont);
    cfg.wp = parse_value(o.wp);
    cfg.wn = parse_value(o.wn);
    cfg.l = parse_value(o.l);
    cfg.ff_strength_ratio = parse_value(o.ff_ratio);
    cfg.c_node = parse_value(o.c_node);
    cfg.kick = parse_value(o.kick);
    auto it = models.begin();
    for (; it != models.end(); ++it)
        if (it->second.polarity == mos_polarity::nmos)
            cfg.nmos_model = it->first;
        else
            cfg.pmos_model = it->first;
    return cfg;
}

void add_ring_flags(CLI::App* cmd, common_opts& o) {
    cmd->add_option("--cards", o.cards_file, "model card file (builtin default)");
    cmd->add_option("--style", o.style, "plain | starved | bulk")
        ->default_val(o.style);
    cmd->add_option("--stages", o.stages, "ring stages")->default_val(o.stages);
    cmd->add_option("--vdd", o.vdd, "supply voltage")->default_val(o.vdd);
    cmd->add_option("--vcont", o.vcont, "control voltage")->default_val(o.vcont);
    cmd->add_option("--wp", o.wp, "PMOS width")->default_val(o.wp);
    cmd->add_option("--wn", o.wn, "NMOS width")->default_val(o.wn);
    cmd->add_option("--l", o.l, "channel length")->default_val(o.l);
    cmd->add_option("--ff-ratio", o.ff_ratio, "feedforward strength ratio")
        ->default_val(o.ff_ratio);
    cmd->add_option("--cnode", o.c_node, "extra lumped load per tap")
        ->default_val(o.c_node);
    cmd->add_option("--kick", o.kick, "start-up asymmetry")->default_val(o.kick);
    cmd->add_option("--hint", o.hint, "expected frequency for dt sizing")
        ->default_val(o.hint);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write '" + path + "'");
    f << text;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(parse_value(item));
    return out;
}

int cmd_gen(const common_opts& o, const std::string& out_path) {
    model_map models = load_cards(o.cards_file);
    ring_config cfg = ring_from(o, models);
    circuit c = build_quadrature_ring(cfg, models);
    double hint = parse_value(o.hint);
    tran_directive t;
    t.dt = 1.0 / (200.0 * hint);
    t.tstop = 48.0 / hint;
    t.method = integration_method::trapezoidal;
    c.tran = t;
    write_file(out_path, serialize_netlist(c));
    return 0;
}

int cmd_run(const std::string& netlist_path, const std::string& cards_file,
            const std::string& dt, const std::string& tstop,
            const std::string& method, const std::string& out_prefix) {
    std::ifstream f(netlist_path);
    if (!f)
        throw std::invalid_argument("cannot open netlist '" + netlist_path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    circuit c = parse_netlist(ss.str());
    if (!cards_file.empty())
        for (auto& [name, card] : load_model_cards(cards_file))
            c.models.emplace(name, card);

    solver_settings s;
    if (c.tran) {
        s.dt = c.tran->dt;
        s.tstop = c.tran->tstop;
        if (c.tran->method)
            s.method = *c.tran->method;
    }
    if (!dt.empty())
        s.dt = parse_value(dt);
    if (!tstop.empty())
        s.tstop = parse_value(tstop);
    if (!method.empty())
        s.method = method == "be" ? integration_method::backward_euler
                                  : integration_method::trapezoidal;
    if (!(s.dt > 0))
        throw std::invalid_argument("no .tran directive; pass --dt and --tstop");

    waveform_set w = transient(c, s);
    std::ostringstream csv;
    w.write_csv(csv);
    write_file(out_prefix + "_wave.csv", csv.str());

    // ring-style records also get a metrics report
    std::vector<std::string> taps;
    for (int k = 0; w.has_signal("v(out" + std::to_string(k) + ")"); ++k)
        taps.push_back("v(out" + std::to_string(k) + ")");
    const auto* vdd_src = c.find_vsource("vdd");
    if (taps.size() >= 2 && w.has_signal("i(vdd)") && vdd_src != nullptr) {
        osc_metrics m = extract_ring_metrics(w, taps, "i(vdd)", vdd_src->volts);
        write_file(out_prefix + "_metrics.txt", format_metrics_report(m));
        std::cout << format_metrics_report(m);
    }
    std::cout << "wrote " << out_prefix << "_wave.csv\n";
    return 0;
}

sweep_spec spec_from(const common_opts& o, const std::string& vdd_list,
                     const std::string& start, const std::string& stop,
                     const std::string& step) {
    sweep_spec spec;
    spec.models = load_cards(o.cards_file);
    spec.ring = ring_from(o, spec.models);
    spec.vdd_list = parse_list(vdd_list);
    spec.vcont_start = parse_value(start);
    spec.vcont_stop = parse_value(stop);
    spec.vcont_step = parse_value(step);
    spec.seed_frequency_hint = parse_value(o.hint);
    return spec;
}

void print_failed_rows(const sweep_result& r) {
    for (const auto& row : r.rows)
        if (row.failed)
            std::cerr << "grid point vdd=" << format_double(row.vdd)
                      << " vcont=" << format_double(row.vcont)
                      << " failed: " << row.diagnostic << "\n";
}

int cmd_sweep(const sweep_spec& spec, const std::string& out_path,
              bool tuning_report) {
    sweep_result r = sweep_vcont(spec);
    print_failed_rows(r);
    write_file(out_path, sweep_csv(r));
    std::cout << "wrote " << out_path << "\n";
    if (tuning_report) {
        for (const auto& tr : tuning_range_report(r)) {
            std::cout << "vdd=" << format_double(tr.vdd);
            if (tr.valid)
                std::cout << " f_min=" << format_double(tr.f_min)
                          << " f_max=" << format_double(tr.f_max)
                          << " relative_range=" << format_double(tr.relative_range)
                          << "\n";
            else
                std::cout << " insufficient oscillating rows\n";
        }
    }
    return 0;
}

int cmd_locus(const sweep_spec& spec, const std::string& out_path) {
    auto rows = peak_locus(spec);
    write_file(out_path, locus_csv(rows));
    for (const auto& lr : rows) {
        std::cout << "vdd=" << format_double(lr.vdd);
        if (lr.peak.valid)
            std::cout << " vcont*=" << format_double(lr.peak.vcont_star)
                      << " fmax=" << format_double(lr.peak.f_max)
                      << (lr.peak.boundary ? " (boundary)" : "") << "\n";
        else
            std::cout << " no peak: " << lr.peak.note << "\n";
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bulk-controlled quadrature ring oscillator lab"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read flags from a config file");
    app.allow_config_extras(CLI::config_extras_mode::error);

    common_opts gen_o, sweep_o, locus_o;
    std::string gen_out = "ring.sp";
    auto* gen = app.add_subcommand("gen", "emit a netlist");
    add_ring_flags(gen, gen_o);
    gen->add_option("--out", gen_out, "output netlist path")->default_val(gen_out);

    std::string run_netlist, run_cards, run_dt, run_tstop, run_method,
        run_out = "run";
    auto* run = app.add_subcommand("run", "single transient");
    run->add_option("--netlist", run_netlist, "netlist file")->required();
    run->add_option("--cards", run_cards, "extra model card file");
    run->add_option("--dt", run_dt, "timestep override");
    run->add_option("--tstop", run_tstop, "end time override");
    run->add_option("--method", run_method, "be | trap");
    run->add_option("--out-prefix", run_out, "output prefix")->default_val(run_out);

    std::string sweep_vdd = "3", sweep_start = "0", sweep_stop = "3",
                sweep_step = "25m", sweep_out = "sweep.csv";
    bool sweep_tuning = false;
    auto* sw = app.add_subcommand("sweep", "vcont sweep");
    add_ring_flags(sw, sweep_o);
    sw->add_option("--vdd-list", sweep_vdd, "comma-separated supply list")
        ->default_val(sweep_vdd);
    sw->add_option("--vcont-start", sweep_start)->default_val(sweep_start);
    sw->add_option("--vcont-stop", sweep_stop)->default_val(sweep_stop);
    sw->add_option("--vcont-step", sweep_step)->default_val(sweep_step);
    sw->add_option("--out", sweep_out)->default_val(sweep_out);
    sw->add_flag("--tuning-report", sweep_tuning, "print per-vdd tuning ranges");

    std::string locus_vdd = "3,2,1.5,1,0.8", locus_start = "0", locus_stop = "3",
                locus_step = "25m", locus_out = "locus.csv";
    auto* lc = app.add_subcommand("peak-locus", "peak frequency locus over vdd");
    add_ring_flags(lc, locus_o);
    lc->add_option("--vdd-list", locus_vdd, "comma-separated supply list")
        ->default_val(locus_vdd);
    lc->add_option("--vcont-start", locus_start)->default_val(locus_start);
    lc->add_option("--vcont-stop", locus_stop)->default_val(locus_stop);
    lc->add_option("--vcont-step", locus_step)->default_val(locus_step);
    lc->add_option("--out", locus_out)->default_val(locus_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_o, gen_out);
        if (run->parsed())
            return cmd_run(run_netlist, run_cards, run_dt, run_tstop, run_method,
                           run_out);
        if (sw->parsed())
            return cmd_sweep(spec_from(sweep_o, sweep_vdd, sweep_start, sweep_stop,
                                       sweep_step),
                             sweep_out, sweep_tuning);
        if (lc->parsed()) {
            sweep_spec spec =
                spec_from(locus_o, locus_vdd, locus_start, locus_stop, locus_step);
            // per-vdd sweeps stay inside [0, vdd]; clip the common stop
            return cmd_locus(spec, locus_out);
        }
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const simulation_error& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return 2;
    } catch (const analysis_error& e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
