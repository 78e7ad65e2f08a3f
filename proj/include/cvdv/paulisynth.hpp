#pragma once
#include <vector>

#include "cvdv/ir.hpp"

namespace cvdv {

// Gate synthesis for Pauli-string rotations through a bus qumode.
//
// The primitive is a conditional parity dressed into the basis of one Pauli
// letter; a ladder of those around a displacement turns the displacement's
// phase-space area into a Pauli-conditioned phase.

// CP on (qubit, mode) conjugated so the qubit condition reads in the given
// letter's eigenbasis ('Z': bare CP). Time-ordered gates.
std::vector<Gate> dressed_cp(char letter, int qubit, int mode);
// Inverse of dressed_cp (CP^dag = CP followed by R(-pi); the parity R is
// included here).
std::vector<Gate> dressed_cp_adj(char letter, int qubit, int mode);

// exp(P (alpha adag_m - alpha* a_m)) for the Pauli word P: CP ladder over the
// word's support, middle displacement D((-i)^n alpha), unwound ladder, and one
// merged parity rotation (n = weight of P).
std::vector<Gate> synth_multiqubit_cd(const std::string& word, cplx alpha, int mode);

// exp(-i theta P) via a displacement loop on the bus qumode `mode`: two
// multiqubit conditional displacements interleaved with plain displacements.
// The bus returns to its initial state exactly (the enclosed phase-space area
// is state-independent).
std::vector<Gate> synth_pauli_exponential(const std::string& word, double theta, int mode);

// Wrap a qubit-conditioned qumode operation (conditioned on sigma_z) so it is
// conditioned on sigma_nu instead: [C^dag, inner, C] with
// C sigma_z C^dag = sigma_nu; C is ry(pi/2) for 'X', rx(-pi/2) for 'Y'.
std::vector<Gate> synth_controlled_qumode_op(char axis, int qubit, std::vector<Gate> inner);

}  // namespace cvdv
