#include "ringspice/netlist.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "ringspice/errors.hpp"

namespace ringspice {

namespace {

struct token {
    std::string text; // lowercased
    int line = 0;
    int col = 0; // 1-based
};

struct logical_line {
    std::vector<token> tokens;
    int line = 0; // first physical line
};

std::string lower(std::string s) {
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

void tokenize_into(const std::string& text, int lineno, std::vector<token>& out,
                   size_t start_col = 0) {
    size_t i = start_col;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        if (i >= text.size())
            break;
        size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])))
            ++j;
        out.push_back({lower(text.substr(i, j - i)), lineno, static_cast<int>(i + 1)});
        i = j;
    }
}

double number(const token& t) {
    try {
        return parse_value(t.text);
    } catch (const std::invalid_argument& e) {
        throw parse_error(e.what(), t.line, t.col);
    }
}

// splits "key=value"; returns false when no '=' present
bool split_kv(const token& t, std::string& key, std::string& value) {
    size_t eq = t.text.find('=');
    if (eq == std::string::npos)
        return false;
    key = t.text.substr(0, eq);
    value = t.text.substr(eq + 1);
    return true;
}

class netlist_parser {
  public:
    explicit netlist_parser(const std::string& text) : text_(text) {}

    circuit run() {
        assemble();
        for (const logical_line& ll : lines_)
            handle(ll);
        resolve_probes();
        try {
            ckt_.validate();
        } catch (const parse_error& e) {
            throw parse_error(e.what(), last_line_);
        }
        return std::move(ckt_);
    }

  private:
    void assemble() {
        std::istringstream in(text_);
        std::string raw;
        int lineno = 0;
        bool have_title = false;
        bool ended = false;
        while (std::getline(in, raw)) {
            ++lineno;
            if (!raw.empty() && raw.back() == '\r')
                raw.pop_back();
            if (!have_title) {
                ckt_.title = raw;
                have_title = true;
                continue;
            }
            if (ended)
                continue;
            size_t first = raw.find_first_not_of(" \t");
            if (first == std::string::npos)
                continue;
            if (raw[first] == '*')
                continue;
            if (raw[first] == '+') {
                if (lines_.empty())
                    throw parse_error("continuation with no previous line", lineno,
                                      static_cast<int>(first + 1));
                tokenize_into(raw, lineno, lines_.back().tokens, first + 1);
                continue;
            }
            logical_line ll;
            ll.line = lineno;
            tokenize_into(raw, lineno, ll.tokens);
            if (!ll.tokens.empty() && ll.tokens[0].text == ".end") {
                ended = true;
                continue;
            }
            lines_.push_back(std::move(ll));
            last_line_ = lineno;
        }
        if (!have_title)
            throw parse_error("empty netlist", 1);
    }

    void handle(const logical_line& ll) {
        const token& head = ll.tokens.at(0);
        if (head.text[0] == '.') {
            directive(ll);
            return;
        }
        switch (head.text[0]) {
        case 'r': parse_two_node<resistor_element>(ll, "resistance"); break;
        case 'c': parse_capacitor(ll); break;
        case 'v': parse_source<vsource_element>(ll, "voltage"); break;
        case 'i': parse_source<isource_element>(ll, "current"); break;
        case 'm': parse_mosfet(ll); break;
        default:
            throw parse_error("unknown element type '" + head.text + "'", head.line,
                              head.col);
        }
    }

    void check_label(const token& t) {
        if (!labels_.insert(t.text).second)
            throw parse_error("duplicate element label '" + t.text + "'", t.line, t.col);
    }

    void want(const logical_line& ll, size_t n, const char* what) {
        if (ll.tokens.size() < n)
            throw parse_error(std::string("expected ") + what, ll.line);
    }

    template <class E>
    void parse_two_node(const logical_line& ll, const char* what) {
        want(ll, 4, "name node node value");
        check_label(ll.tokens[0]);
        E e;
        e.name = ll.tokens[0].text;
        e.a = ckt_.ensure_node(ll.tokens[1].text);
        e.b = ckt_.ensure_node(ll.tokens[2].text);
        e.ohms = number(ll.tokens[3]);
        if (ll.tokens.size() > 4)
            throw parse_error(std::string("unexpected token after ") + what,
                              ll.tokens[4].line, ll.tokens[4].col);
        ckt_.elements.push_back(e);
    }

    void parse_capacitor(const logical_line& ll) {
        want(ll, 4, "name node node value");
        check_label(ll.tokens[0]);
        capacitor_element e;
        e.name = ll.tokens[0].text;
        e.a = ckt_.ensure_node(ll.tokens[1].text);
        e.b = ckt_.ensure_node(ll.tokens[2].text);
        e.farads = number(ll.tokens[3]);
        for (size_t i = 4; i < ll.tokens.size(); ++i) {
            std::string k, v;
            if (!split_kv(ll.tokens[i], k, v) || k != "ic")
                throw parse_error("expected ic=<volts>", ll.tokens[i].line,
                                  ll.tokens[i].col);
            token vt = ll.tokens[i];
            vt.text = v;
            e.ic = number(vt);
        }
        ckt_.elements.push_back(e);
    }

    template <class E>
    void parse_source(const logical_line& ll, const char* what) {
        want(ll, 4, "name node node value");
        check_label(ll.tokens[0]);
        E e;
        e.name = ll.tokens[0].text;
        e.p = ckt_.ensure_node(ll.tokens[1].text);
        e.n = ckt_.ensure_node(ll.tokens[2].text);
        if constexpr (std::is_same_v<E, vsource_element>)
            e.volts = number(ll.tokens[3]);
        else
            e.amps = number(ll.tokens[3]);
        if (ll.tokens.size() > 4)
            throw parse_error(std::string("unexpected token after ") + what + " value",
                              ll.tokens[4].line, ll.tokens[4].col);
        ckt_.elements.push_back(e);
    }

    void parse_mosfet(const logical_line& ll) {
        want(ll, 6, "name d g s b model w=... l=...");
        check_label(ll.tokens[0]);
        mosfet_element e;
        e.name = ll.tokens[0].text;
        e.d = ckt_.ensure_node(ll.tokens[1].text);
        e.g = ckt_.ensure_node(ll.tokens[2].text);
        e.s = ckt_.ensure_node(ll.tokens[3].text);
        e.b = ckt_.ensure_node(ll.tokens[4].text);
        e.model = ll.tokens[5].text;
        bool have_w = false, have_l = false;
        for (size_t i = 6; i < ll.tokens.size(); ++i) {
            std::string k, v;
            if (!split_kv(ll.tokens[i], k, v))
                throw parse_error("expected w=... or l=...", ll.tokens[i].line,
                                  ll.tokens[i].col);
            token vt = ll.tokens[i];
            vt.text = v;
            if (k == "w") {
                e.w = number(vt);
                have_w = true;
            } else if (k == "l") {
                e.l = number(vt);
                have_l = true;
            } else {
                throw parse_error("unknown mosfet parameter '" + k + "'",
                                  ll.tokens[i].line, ll.tokens[i].col);
            }
        }
        if (!have_w || !have_l)
            throw parse_error("mosfet requires w= and l=", ll.line);
        if (!(e.w > 0) || !(e.l > 0))
            throw parse_error("mosfet w and l must be positive", ll.line);
        ckt_.elements.push_back(e);
    }

    void directive(const logical_line& ll) {
        const token& head = ll.tokens[0];
        if (head.text == ".model") {
            want(ll, 3, ".model name nmos|pmos [key=value ...]");
            const token& name = ll.tokens[1];
            if (ckt_.models.count(name.text))
                throw parse_error("duplicate model '" + name.text + "'", name.line,
                                  name.col);
            mos_model_params p;
            p.name = name.text;
            const token& pol = ll.tokens[2];
            if (pol.text == "nmos")
                p.polarity = mos_polarity::nmos;
            else if (pol.text == "pmos")
                p.polarity = mos_polarity::pmos;
            else
                throw parse_error("model polarity must be nmos or pmos", pol.line,
                                  pol.col);
            if (p.polarity == mos_polarity::pmos)
                p.vt0 = -p.vt0; // default sign follows polarity
            for (size_t i = 3; i < ll.tokens.size(); ++i) {
                std::string k, v;
                if (!split_kv(ll.tokens[i], k, v))
                    throw parse_error("expected key=value", ll.tokens[i].line,
                                      ll.tokens[i].col);
                if (k == "polarity")
                    throw parse_error("polarity is set by the third token",
                                      ll.tokens[i].line, ll.tokens[i].col);
                try {
                    set_card_field(p, k, v, ll.tokens[i].line);
                } catch (const std::invalid_argument& e) {
                    throw parse_error(e.what(), ll.tokens[i].line, ll.tokens[i].col);
                }
            }
            try {
                p.validate();
            } catch (const std::invalid_argument& e) {
                throw parse_error(e.what(), ll.line);
            }
            ckt_.models.emplace(name.text, std::move(p));
        } else if (head.text == ".tran") {
            want(ll, 3, ".tran dt tstop [be|trap]");
            tran_directive t;
            t.dt = number(ll.tokens[1]);
            t.tstop = number(ll.tokens[2]);
            if (ll.tokens.size() > 3) {
                const token& m = ll.tokens[3];
                if (m.text == "be")
                    t.method = integration_method::backward_euler;
                else if (m.text == "trap")
                    t.method = integration_method::trapezoidal;
                else
                    throw parse_error("integration method must be be or trap", m.line,
                                      m.col);
                if (ll.tokens.size() > 4)
                    throw parse_error("unexpected token after .tran", ll.tokens[4].line,
                                      ll.tokens[4].col);
            }
            if (!(t.dt > 0) || !(t.tstop > t.dt))
                throw parse_error(".tran requires 0 < dt < tstop", ll.line);
            ckt_.tran = t;
        } else if (head.text == ".probe") {
            for (size_t i = 1; i < ll.tokens.size(); ++i)
                ckt_.probes.push_back(parse_probe_ref(ll.tokens[i]));
        } else if (head.text == ".ic") {
            want(ll, 2, ".ic v(node)=value ...");
            for (size_t i = 1; i < ll.tokens.size(); ++i) {
                const token& t = ll.tokens[i];
                size_t eq = t.text.find('=');
                if (eq == std::string::npos)
                    throw parse_error("expected v(node)=value", t.line, t.col);
                probe_ref ref = parse_probe_ref({t.text.substr(0, eq), t.line, t.col});
                if (ref.kind != probe_ref::node_voltage)
                    throw parse_error(".ic accepts node voltages only", t.line, t.col);
                token vt = t;
                vt.text = t.text.substr(eq + 1);
                ckt_.initial_conditions.emplace_back(ckt_.ensure_node(ref.target),
                                                     number(vt));
            }
        } else {
            throw parse_error("unknown directive '" + head.text + "'", head.line,
                              head.col);
        }
    }

    probe_ref parse_probe_ref(const token& t) {
        if (t.text.size() < 4 || t.text[1] != '(' || t.text.back() != ')')
            throw parse_error("expected v(node) or i(vsource)", t.line, t.col);
        probe_ref ref;
        if (t.text[0] == 'v')
            ref.kind = probe_ref::node_voltage;
        else if (t.text[0] == 'i')
            ref.kind = probe_ref::source_current;
        else
            throw parse_error("expected v(node) or i(vsource)", t.line, t.col);
        ref.target = t.text.substr(2, t.text.size() - 3);
        if (ref.target.empty())
            throw parse_error("empty probe target", t.line, t.col);
        if (ref.kind == probe_ref::node_voltage)
            ckt_.ensure_node(ref.target);
        else
            current_probes_.push_back(t);
        return ref;
    }

    void resolve_probes() {
        for (const token& t : current_probes_) {
            std::string label = t.text.substr(2, t.text.size() - 3);
            if (ckt_.find_vsource(label) == nullptr)
                throw parse_error("current probe references unknown source '" + label +
                                      "'", t.line, t.col);
        }
    }

    const std::string& text_;
    std::vector<logical_line> lines_;
    std::vector<token> current_probes_;
    std::set<std::string> labels_;
    circuit ckt_;
    int last_line_ = 1;
};

} // namespace

circuit parse_netlist(const std::string& text) {
    if (text.empty())
        throw parse_error("empty netlist", 1);
    return netlist_parser(text).run();
}

std::string serialize_netlist(const circuit& c) {
    std::ostringstream os;
    os << c.title << "\n";
    for (const auto& [name, p] : c.models) {
        os << ".model " << name << " "
           << (p.polarity == mos_polarity::nmos ? "nmos" : "pmos");
        os << " vt0=" << format_value(p.vt0);
        os << " gamma=" << format_value(p.gamma);
        os << " n_b=" << format_value(p.n_b);
        os << " n_i=" << format_value(p.n_i);
        os << " temperature=" << format_value(p.temperature);
        os << " kp=" << format_value(p.kp);
        os << " slope_n=" << format_value(p.slope_n);
        os << " lambda_clm=" << format_value(p.lambda_clm);
        os << " cox_prime=" << format_value(p.cox_prime);
        os << " diode_is=" << format_value(p.diode_is);
        os << " diode_n=" << format_value(p.diode_n);
        os << " cg_per_area=" << format_value(p.cg_per_area);
        os << " conventional_body_effect=" << (p.conventional_body_effect ? 1 : 0);
        os << "\n";
    }
    auto node = [&](int idx) { return c.node_names.at(static_cast<size_t>(idx)); };
    for (const auto& el : c.elements) {
        std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, mosfet_element>) {
                    os << e.name << " " << node(e.d) << " " << node(e.g) << " "
                       << node(e.s) << " " << node(e.b) << " " << e.model
                       << " w=" << format_value(e.w) << " l=" << format_value(e.l);
                } else if constexpr (std::is_same_v<T, resistor_element>) {
                    os << e.name << " " << node(e.a) << " " << node(e.b) << " "
                       << format_value(e.ohms);
                } else if constexpr (std::is_same_v<T, capacitor_element>) {
                    os << e.name << " " << node(e.a) << " " << node(e.b) << " "
                       << format_value(e.farads);
                    if (e.ic)
                        os << " ic=" << format_value(*e.ic);
                } else if constexpr (std::is_same_v<T, vsource_element>) {
                    os << e.name << " " << node(e.p) << " " << node(e.n) << " "
                       << format_value(e.volts);
                } else {
                    os << e.name << " " << node(e.p) << " " << node(e.n) << " "
                       << format_value(e.amps);
                }
                os << "\n";
            },
            el);
    }
    if (!c.initial_conditions.empty()) {
        os << ".ic";
        for (const auto& [n, v] : c.initial_conditions)
            os << " v(" << node(n) << ")=" << format_value(v);
        os << "\n";
    }
    if (c.tran) {
        os << ".tran " << format_value(c.tran->dt) << " " << format_value(c.tran->tstop);
        if (c.tran->method)
            os << " "
               << (*c.tran->method == integration_method::backward_euler ? "be"
                                                                         : "trap");
        os << "\n";
    }
    if (!c.probes.empty()) {
        os << ".probe";
        for (const auto& p : c.probes)
            os << " " << (p.kind == probe_ref::node_voltage ? "v(" : "i(") << p.target
               << ")";
        os << "\n";
    }
    os << ".end\n";
    return os.str();
}

} // namespace ringspice
