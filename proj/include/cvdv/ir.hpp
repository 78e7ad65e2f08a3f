#pragma once
#include <string>
#include <vector>

#include "cvdv/util.hpp"

namespace cvdv {

// Native gate set plus the deferred Pauli-rotation statement.
//
//   rx/ry/rz(t)  : single-qubit rotations exp(-i t/2 sigma)
//   R(t)         : phase-space rotation exp(-i t a^dag a)
//   D(a)         : displacement exp(a adag - a* a)
//   BS(t,p)      : beamsplitter exp(-i t/2 (e^{ip} adag b + e^{-ip} a bdag))
//   CR(t)        : conditional rotation exp(-i t/2 sigma_z adag a)
//   CP           : conditional parity, CR(pi)
//   CD(a)        : conditional displacement exp(sigma_z (a adag - a* a))
//   CBS(t,p)     : conditional beamsplitter
//   RB(t)        : qubit-conditioned displacement exp(-i sigma_x (t adag + t* a))
//   SWAPM        : qumode swap bundle (BS(pi,0) then R(-pi/2) on both modes)
//   PAULI        : deferred rotation. Without a qumode operand: exp(-i theta P).
//                  With one: exp(P (a adag_k - a* a_k)) (modulated form).
enum class GateKind { RX, RY, RZ, R, D, BS, CR, CP, CD, CBS, RB, SWAPM, PAULI };

struct Gate {
    GateKind kind{};
    std::vector<cplx> params;
    std::vector<int> qubits;
    std::vector<int> qumodes;
    std::string word;  // PAULI only
};

struct Circuit {
    int nq = 0;  // qubit register size
    int nm = 0;  // qumode register size
    std::vector<Gate> gates;

    void grow(const Gate& g);       // widen registers to cover g's operands
    void push(Gate g);              // grow + append
};

const char* kind_name(GateKind k);
GateKind name_kind(const std::string& name);  // throws parse_error on unknown

int n_params(GateKind k);   // expected parameter count (PAULI: 1)
int n_qubits(GateKind k);   // qubit operand count (PAULI: variable, returns -1)
int n_qumodes(GateKind k);  // qumode operand count (PAULI: 0 or 1, returns -1)

bool is_native(const Gate& g);          // anything but PAULI
int system_count(const Gate& g);        // operand count (qubits + qumodes)
int latency(const Gate& g);             // 1 for single-system ops, 20 otherwise

// Inverse of a single gate as a short gate sequence (time order).
std::vector<Gate> gate_adjoint(const Gate& g);
// Reverse a gate sequence and invert every gate.
std::vector<Gate> seq_adjoint(const std::vector<Gate>& seq);
// Same on a whole circuit.
Circuit circuit_adjoint(const Circuit& c);

// Convenience constructors.
Gate grx(double t, int q);
Gate gry(double t, int q);
Gate grz(double t, int q);
Gate gR(double t, int m);
Gate gD(cplx a, int m);
Gate gBS(double t, double p, int m1, int m2);
Gate gCR(double t, int q, int m);
Gate gCP(int q, int m);
Gate gCD(cplx a, int q, int m);
Gate gCBS(double t, double p, int q, int m1, int m2);
Gate gRB(cplx t, int q, int m);
Gate gSWAPM(int m1, int m2);
Gate gpauli(double theta, std::string word);
Gate gpauli_mod(cplx alpha, std::string word, int mode);

}  // namespace cvdv
