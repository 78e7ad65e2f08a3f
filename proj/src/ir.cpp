#include "cvdv/ir.hpp"

#include <algorithm>
#include <array>

#include "cvdv/expr.hpp"

namespace cvdv {

namespace {
struct KindInfo {
    GateKind kind;
    const char* name;
    int params, qubits, qumodes;
};
constexpr std::array<KindInfo, 13> kKinds{{
    {GateKind::RX, "rx", 1, 1, 0},
    {GateKind::RY, "ry", 1, 1, 0},
    {GateKind::RZ, "rz", 1, 1, 0},
    {GateKind::R, "R", 1, 0, 1},
    {GateKind::D, "D", 1, 0, 1},
    {GateKind::BS, "BS", 2, 0, 2},
    {GateKind::CR, "CR", 1, 1, 1},
    {GateKind::CP, "CP", 0, 1, 1},
    {GateKind::CD, "CD", 1, 1, 1},
    {GateKind::CBS, "CBS", 2, 1, 2},
    {GateKind::RB, "RB", 1, 1, 1},
    {GateKind::SWAPM, "SWAPM", 0, 0, 2},
    {GateKind::PAULI, "pauli", 1, -1, -1},
}};
const KindInfo& info(GateKind k) { return kKinds[(size_t)k]; }
}  // namespace

void Circuit::grow(const Gate& g) {
    for (int q : g.qubits) nq = std::max(nq, q + 1);
    for (int m : g.qumodes) nm = std::max(nm, m + 1);
    if (g.kind == GateKind::PAULI) nq = std::max(nq, (int)trim_word(g.word).size());
}

void Circuit::push(Gate g) {
    grow(g);
    gates.push_back(std::move(g));
}

const char* kind_name(GateKind k) { return info(k).name; }

GateKind name_kind(const std::string& name) {
    for (auto& ki : kKinds)
        if (name == ki.name) return ki.kind;
    throw parse_error("unknown gate '" + name + "'");
}

int n_params(GateKind k) { return info(k).params; }
int n_qubits(GateKind k) { return info(k).qubits; }
int n_qumodes(GateKind k) { return info(k).qumodes; }

bool is_native(const Gate& g) { return g.kind != GateKind::PAULI; }

int system_count(const Gate& g) { return (int)(g.qubits.size() + g.qumodes.size()); }

int latency(const Gate& g) { return system_count(g) <= 1 ? 1 : 20; }

std::vector<Gate> gate_adjoint(const Gate& g) {
    Gate h = g;
    switch (g.kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
        case GateKind::R:
        case GateKind::CR:
            h.params[0] = -g.params[0];
            return {h};
        case GateKind::D:
        case GateKind::CD:
        case GateKind::RB:
            h.params[0] = -g.params[0];
            return {h};
        case GateKind::BS:
        case GateKind::CBS:
            h.params[0] = -g.params[0];
            return {h};
        case GateKind::CP:
            // CP^dag = CP followed by R(-pi) (both qumode-diagonal, they commute)
            return {h, gR(-PI, g.qumodes[0])};
        case GateKind::SWAPM:
            return {h};  // self-inverse
        case GateKind::PAULI:
            h.params[0] = -g.params[0];
            return {h};
    }
    return {h};
}

std::vector<Gate> seq_adjoint(const std::vector<Gate>& seq) {
    std::vector<Gate> out;
    out.reserve(seq.size());
    for (auto it = seq.rbegin(); it != seq.rend(); ++it)
        for (auto& g : gate_adjoint(*it)) out.push_back(g);
    return out;
}

Circuit circuit_adjoint(const Circuit& c) {
    Circuit out;
    out.nq = c.nq;
    out.nm = c.nm;
    out.gates = seq_adjoint(c.gates);
    return out;
}

Gate grx(double t, int q) { return {GateKind::RX, {cplx(t, 0)}, {q}, {}, {}}; }
Gate gry(double t, int q) { return {GateKind::RY, {cplx(t, 0)}, {q}, {}, {}}; }
Gate grz(double t, int q) { return {GateKind::RZ, {cplx(t, 0)}, {q}, {}, {}}; }
Gate gR(double t, int m) { return {GateKind::R, {cplx(t, 0)}, {}, {m}, {}}; }
Gate gD(cplx a, int m) { return {GateKind::D, {a}, {}, {m}, {}}; }
Gate gBS(double t, double p, int m1, int m2) {
    return {GateKind::BS, {cplx(t, 0), cplx(p, 0)}, {}, {m1, m2}, {}};
}
Gate gCR(double t, int q, int m) { return {GateKind::CR, {cplx(t, 0)}, {q}, {m}, {}}; }
Gate gCP(int q, int m) { return {GateKind::CP, {}, {q}, {m}, {}}; }
Gate gCD(cplx a, int q, int m) { return {GateKind::CD, {a}, {q}, {m}, {}}; }
Gate gCBS(double t, double p, int q, int m1, int m2) {
    return {GateKind::CBS, {cplx(t, 0), cplx(p, 0)}, {q}, {m1, m2}, {}};
}
Gate gRB(cplx t, int q, int m) { return {GateKind::RB, {t}, {q}, {m}, {}}; }
Gate gSWAPM(int m1, int m2) { return {GateKind::SWAPM, {}, {}, {m1, m2}, {}}; }
Gate gpauli(double theta, std::string word) {
    return {GateKind::PAULI, {cplx(theta, 0)}, {}, {}, std::move(word)};
}
Gate gpauli_mod(cplx alpha, std::string word, int mode) {
    return {GateKind::PAULI, {alpha}, {}, {mode}, std::move(word)};
}

}  // namespace cvdv
