#include "ringspice/circuit.hpp"

#include <numeric>

#include "ringspice/errors.hpp"

namespace ringspice {

circuit::circuit() {
    node_names.push_back("0");
    node_index_["0"] = 0;
}

int circuit::ensure_node(const std::string& name) {
    auto it = node_index_.find(name);
    if (it != node_index_.end())
        return it->second;
    int idx = static_cast<int>(node_names.size());
    node_names.push_back(name);
    node_index_[name] = idx;
    return idx;
}

int circuit::find_node(const std::string& name) const {
    auto it = node_index_.find(name);
    return it == node_index_.end() ? -1 : it->second;
}

const mos_model_params& circuit::model_for(const mosfet_element& m) const {
    auto it = models.find(m.model);
    if (it == models.end())
        throw parse_error("undefined model '" + m.model + "' referenced by " + m.name, 0);
    return it->second;
}

const vsource_element* circuit::find_vsource(const std::string& label) const {
    for (const auto& el : elements)
        if (const auto* v = std::get_if<vsource_element>(&el))
            if (v->name == label)
                return v;
    return nullptr;
}

namespace {

struct union_find {
    std::vector<int> parent;
    explicit union_find(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

void circuit::validate() const {
    union_find uf(node_count());
    auto join = [&](std::initializer_list<int> nodes) {
        int first = *nodes.begin();
        for (int n : nodes) {
            if (n < 0 || n >= node_count())
                throw parse_error("element references unknown node index", 0);
            uf.unite(first, n);
        }
    };
    for (const auto& el : elements) {
        std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, mosfet_element>) {
                    join({e.d, e.g, e.s, e.b});
                    if (!models.count(e.model))
                        throw parse_error("undefined model '" + e.model +
                                              "' referenced by " + e.name, 0);
                } else if constexpr (std::is_same_v<T, resistor_element> ||
                                     std::is_same_v<T, capacitor_element>) {
                    join({e.a, e.b});
                } else {
                    join({e.p, e.n});
                }
            },
            el);
    }
    int ground = uf.find(0);
    for (int k = 1; k < node_count(); ++k)
        if (uf.find(k) != ground)
            throw parse_error("node '" + node_names[k] + "' has no path to ground", 0);
}

} // namespace ringspice
