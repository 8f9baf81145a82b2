#pragma once

#include <string>

#include "ringspice/circuit.hpp"
#include "ringspice/value.hpp"

namespace ringspice {

// Parse the SPICE-like netlist subset. First line is a title, '*' starts a
// comment line, '+' continues the previous line. Element cards: M R C V I.
// Directives: .model .tran .probe .ic .end. Case-insensitive. Anything
// outside the grammar is a parse_error with line (and column) info.
circuit parse_netlist(const std::string& text);

// Canonical netlist text: title, .model cards, elements in declaration order,
// .ic/.tran/.probe, .end. parse_netlist(serialize_netlist(c)) == c, and the
// text is a fixed point of serialize(parse(.)).
std::string serialize_netlist(const circuit& c);

} // namespace ringspice
