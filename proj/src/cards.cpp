#include "ringspice/cards.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ringspice/errors.hpp"
#include "ringspice/value.hpp"

namespace ringspice {

namespace {

std::string lower(std::string s) {
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return {};
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, int line) {
    std::string t = lower(v);
    if (t == "1" || t == "true" || t == "yes")
        return true;
    if (t == "0" || t == "false" || t == "no")
        return false;
    throw parse_error("expected boolean, got '" + v + "'", line);
}

} // namespace

void set_card_field(mos_model_params& p, const std::string& key,
                    const std::string& value, int line) {
    std::string k = lower(key);
    auto num = [&] { return parse_value(value); };
    if (k == "polarity") {
        std::string v = lower(value);
        if (v == "nmos")
            p.polarity = mos_polarity::nmos;
        else if (v == "pmos")
            p.polarity = mos_polarity::pmos;
        else
            throw parse_error("polarity must be nmos or pmos, got '" + value + "'", line);
    } else if (k == "vt0") {
        p.vt0 = num();
    } else if (k == "gamma") {
        p.gamma = num();
    } else if (k == "n_b") {
        p.n_b = num();
    } else if (k == "n_i") {
        p.n_i = num();
    } else if (k == "temperature") {
        p.temperature = num();
    } else if (k == "kp") {
        p.kp = num();
    } else if (k == "slope_n") {
        p.slope_n = num();
    } else if (k == "lambda_clm") {
        p.lambda_clm = num();
    } else if (k == "cox_prime") {
        p.cox_prime = num();
    } else if (k == "diode_is") {
        p.diode_is = num();
    } else if (k == "diode_n") {
        p.diode_n = num();
    } else if (k == "cg_per_area") {
        p.cg_per_area = num();
    } else if (k == "conventional_body_effect") {
        p.conventional_body_effect = parse_bool(value, line);
    } else {
        throw parse_error("unknown model parameter '" + key + "'", line);
    }
}

model_map parse_model_cards(const std::string& text) {
    model_map out;
    mos_model_params* current = nullptr;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == '*')
            continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw parse_error("unterminated section header", lineno);
            std::string name = lower(trim(s.substr(1, s.size() - 2)));
            if (name.empty())
                throw parse_error("empty card name", lineno);
            if (out.count(name))
                throw parse_error("duplicate card '" + name + "'", lineno);
            current = &out[name];
            current->name = name;
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw parse_error("expected 'key = value'", lineno);
        if (current == nullptr)
            throw parse_error("key outside of a [card] section", lineno);
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty())
            throw parse_error("expected 'key = value'", lineno);
        try {
            set_card_field(*current, key, value, lineno);
        } catch (const std::invalid_argument& e) {
            throw parse_error(e.what(), lineno);
        }
    }
    if (out.empty())
        throw parse_error("no model cards found", lineno ? lineno : 1);
    for (auto& [name, card] : out)
        card.validate();
    return out;
}

model_map load_model_cards(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("cannot open card file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_model_cards(ss.str());
}

std::string format_model_cards(const model_map& models) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [name, p] : models) {
        if (!first)
            os << "\n";
        first = false;
        os << "[" << name << "]\n";
        os << "polarity = " << (p.polarity == mos_polarity::nmos ? "nmos" : "pmos") << "\n";
        os << "vt0 = " << format_value(p.vt0) << "\n";
        os << "gamma = " << format_value(p.gamma) << "\n";
        os << "n_b = " << format_value(p.n_b) << "\n";
        os << "n_i = " << format_value(p.n_i) << "\n";
        os << "temperature = " << format_value(p.temperature) << "\n";
        os << "kp = " << format_value(p.kp) << "\n";
        os << "slope_n = " << format_value(p.slope_n) << "\n";
        os << "lambda_clm = " << format_value(p.lambda_clm) << "\n";
        os << "cox_prime = " << format_value(p.cox_prime) << "\n";
        os << "diode_is = " << format_value(p.diode_is) << "\n";
        os << "diode_n = " << format_value(p.diode_n) << "\n";
        os << "cg_per_area = " << format_value(p.cg_per_area) << "\n";
        os << "conventional_body_effect = " << (p.conventional_body_effect ? "1" : "0") << "\n";
    }
    return os.str();
}

const std::string& default_cards_text() {
    // Generic long-channel 0.35um pair. vt0 values follow the 0.4 / -0.45 V
    // magnitudes of that node; everything else is chosen for plausible ring
    // behavior, not fitted to any foundry deck. The PMOS n_b sets the bulk
    // potential (~0.45 V) and is deliberately independent of gamma: the two
    // knobs control the diode turn-on point and the body-effect strength
    // separately.
    static const std::string text =
        "# generic 0.35um long-channel model cards\n"
        "[nmos035]\n"
        "polarity = nmos\n"
        "vt0 = 0.4\n"
        "gamma = 0\n"
        "n_b = 100e15\n"
        "n_i = 10e9\n"
        "temperature = 300\n"
        "kp = 170u\n"
        "slope_n = 1.3\n"
        "lambda_clm = 0.06\n"
        "cox_prime = 4.6m\n"
        "diode_is = 100p\n"
        "diode_n = 1.5\n"
        "cg_per_area = 4.6m\n"
        "conventional_body_effect = 0\n"
        "\n"
        "[pmos035]\n"
        "polarity = pmos\n"
        "vt0 = -0.45\n"
        "gamma = 0.6\n"
        "n_b = 60e12\n"
        "n_i = 10e9\n"
        "temperature = 300\n"
        "kp = 60u\n"
        "slope_n = 1.35\n"
        "lambda_clm = 0.06\n"
        "cox_prime = 4.6m\n"
        "diode_is = 100p\n"
        "diode_n = 1.5\n"
        "cg_per_area = 4.6m\n"
        "conventional_body_effect = 0\n";
    return text;
}

const std::string& hef4007_cards_text() {
    // Generic metal-gate CMOS discrete pair; |vt0| = 1.4 V.
    static const std::string text =
        "# generic metal-gate CMOS (HEF4007-class) model cards\n"
        "[nmos4007]\n"
        "polarity = nmos\n"
        "vt0 = 1.4\n"
        "gamma = 0\n"
        "n_b = 1e15\n"
        "n_i = 10e9\n"
        "temperature = 300\n"
        "kp = 30u\n"
        "slope_n = 1.5\n"
        "lambda_clm = 0.01\n"
        "cox_prime = 0.35m\n"
        "diode_is = 1n\n"
        "diode_n = 2\n"
        "cg_per_area = 0.35m\n"
        "conventional_body_effect = 0\n"
        "\n"
        "[pmos4007]\n"
        "polarity = pmos\n"
        "vt0 = -1.4\n"
        "gamma = 1.2\n"
        "n_b = 1e15\n"
        "n_i = 10e9\n"
        "temperature = 300\n"
        "kp = 15u\n"
        "slope_n = 1.5\n"
        "lambda_clm = 0.01\n"
        "cox_prime = 0.35m\n"
        "diode_is = 1n\n"
        "diode_n = 2\n"
        "cg_per_area = 0.35m\n"
        "conventional_body_effect = 0\n";
    return text;
}

model_map default_cards() {
    return parse_model_cards(default_cards_text());
}

} // namespace ringspice
