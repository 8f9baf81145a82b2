#pragma once

#include <stdexcept>
#include <string>

namespace ringspice {

// Syntax/semantic error in a netlist or card file, with 1-based position.
class parse_error : public std::runtime_error {
  public:
    parse_error(std::string msg, int line, int column = 0)
        : std::runtime_error("line " + std::to_string(line) +
                             (column > 0 ? ", col " + std::to_string(column) : "") +
                             ": " + msg),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

// Solver failure (non-convergence, non-finite state, step failure).
class simulation_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Waveform analysis failure (signal not oscillating, frequency mismatch, ...).
class analysis_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace ringspice
