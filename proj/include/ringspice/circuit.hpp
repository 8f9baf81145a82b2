#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ringspice/cards.hpp"
#include "ringspice/model.hpp"

namespace ringspice {

enum class integration_method { backward_euler, trapezoidal };

// Node-indexed element records. Node 0 is always ground ("0").
struct mosfet_element {
    std::string name;
    int d = 0, g = 0, s = 0, b = 0;
    std::string model;
    double w = 0, l = 0;
    bool operator==(const mosfet_element&) const = default;
};

struct resistor_element {
    std::string name;
    int a = 0, b = 0;
    double ohms = 0;
    bool operator==(const resistor_element&) const = default;
};

struct capacitor_element {
    std::string name;
    int a = 0, b = 0;
    double farads = 0;
    std::optional<double> ic; // initial branch voltage, V
    bool operator==(const capacitor_element&) const = default;
};

struct vsource_element {
    std::string name;
    int p = 0, n = 0;
    double volts = 0;
    bool operator==(const vsource_element&) const = default;
};

struct isource_element {
    std::string name;
    int p = 0, n = 0;
    double amps = 0; // flows p -> n through the source
    bool operator==(const isource_element&) const = default;
};

using element = std::variant<mosfet_element, resistor_element, capacitor_element,
                             vsource_element, isource_element>;

struct tran_directive {
    double dt = 0;
    double tstop = 0;
    std::optional<integration_method> method;
    bool operator==(const tran_directive&) const = default;
};

struct probe_ref {
    enum kind_t { node_voltage, source_current } kind = node_voltage;
    std::string target; // node name or voltage-source label
    bool operator==(const probe_ref&) const = default;
};

struct circuit {
    std::string title;
    std::vector<std::string> node_names; // [0] == "0"
    std::vector<element> elements;       // declaration order
    model_map models;
    std::optional<tran_directive> tran;
    std::vector<probe_ref> probes;
    std::vector<std::pair<int, double>> initial_conditions; // node index -> V

    circuit();

    int ensure_node(const std::string& name); // find or create
    int find_node(const std::string& name) const; // -1 if absent
    int node_count() const { return static_cast<int>(node_names.size()); }

    const mos_model_params& model_for(const mosfet_element& m) const;
    const vsource_element* find_vsource(const std::string& label) const;

    // Checks the structural invariants: ground present, every MOSFET's model
    // card known, every node connected to ground through element terminals.
    // Throws parse_error (line 0) on violation.
    void validate() const;

  private:
    std::unordered_map<std::string, int> node_index_;
};

} // namespace ringspice
