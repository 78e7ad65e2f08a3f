#pragma once
#include <string>

#include "cvdv/ir.hpp"

namespace cvdv {

// Text form of circuits (file extension ".cvdvqasm").
//
//   statement := NAME [ "(" args ")" ] operands ";"
//              | "pauli" "(" arg ")" WORD [ "qm" "[" int "]" ] ";"
//   args      := arithmetic over numbers (optional trailing `i` for imaginary
//                literals), `pi`, `+ - * /`, unary minus, parentheses
//   operands  := comma-separated q[<int>] / qm[<int>]
//   WORD      := [IXYZ]+   (letter j acts on qubit j)
//   comments  := `//` to end of line
//
// Register sizes are inferred (max index + 1, and Pauli word lengths).
// emit() prints parameters with up to 17 significant digits so that
// parse(emit(c)) reproduces c exactly.

Circuit parse_qasm(const std::string& text);
std::string emit_qasm(const Circuit& c);

Circuit read_qasm_file(const std::string& path);
void write_qasm_file(const std::string& path, const Circuit& c);

inline constexpr const char* kQasmExtension = ".cvdvqasm";

}  // namespace cvdv
