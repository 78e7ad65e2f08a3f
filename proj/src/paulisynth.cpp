#include "cvdv/paulisynth.hpp"

#include <cmath>
#include <stdexcept>

#include "cvdv/util.hpp"

namespace cvdv {

namespace {

// C with C sigma_z C^dag = sigma_nu; empty for 'Z'.
std::vector<Gate> axis_enter(char letter, int qubit) {
    switch (letter) {
        case 'Z': return {};
        case 'X': return {gry(-PI / 2, qubit)};
        case 'Y': return {grx(PI / 2, qubit)};
        default: throw std::invalid_argument("axis_enter: bad Pauli letter");
    }
}

std::vector<Gate> axis_leave(char letter, int qubit) {
    switch (letter) {
        case 'Z': return {};
        case 'X': return {gry(PI / 2, qubit)};
        case 'Y': return {grx(-PI / 2, qubit)};
        default: throw std::invalid_argument("axis_leave: bad Pauli letter");
    }
}

void append(std::vector<Gate>& out, std::vector<Gate> part) {
    for (auto& g : part) out.push_back(std::move(g));
}

}  // namespace

std::vector<Gate> dressed_cp(char letter, int qubit, int mode) {
    std::vector<Gate> out = axis_enter(letter, qubit);
    out.push_back(gCP(qubit, mode));
    append(out, axis_leave(letter, qubit));
    return out;
}

std::vector<Gate> dressed_cp_adj(char letter, int qubit, int mode) {
    std::vector<Gate> out = axis_enter(letter, qubit);
    out.push_back(gCP(qubit, mode));
    out.push_back(gR(-PI, mode));
    append(out, axis_leave(letter, qubit));
    return out;
}

std::vector<Gate> synth_multiqubit_cd(const std::string& word, cplx alpha, int mode) {
    std::vector<int> support;
    for (int i = 0; i < (int)word.size(); ++i)
        if (word[i] != 'I') support.push_back(i);
    const int n = (int)support.size();
    if (n == 0) return {gD(alpha, mode)};

    std::vector<Gate> out;
    for (int q : support) append(out, dressed_cp(word[q], q, mode));
    // (-i)^n rotates the displacement axis to undo the parity kicks of the
    // conditioning ladder.
    cplx mid = alpha;
    for (int i = 0; i < (n & 3); ++i) mid *= cplx(0, -1);
    out.push_back(gD(mid, mode));
    // Unwind: CP is its own inverse up to a parity rotation; the n parity
    // rotations commute with everything here and merge into one at the end.
    for (int i = n - 1; i >= 0; --i) {
        int q = support[i];
        append(out, dressed_cp(word[q], q, mode));
    }
    if (n & 1) out.push_back(gR(-PI, mode));
    return out;
}

std::vector<Gate> synth_pauli_exponential(const std::string& word, double theta, int mode) {
    if (theta == 0.0) return {};
    if (theta < 0) return seq_adjoint(synth_pauli_exponential(word, -theta, mode));
    const double alpha = std::sqrt(theta / 2.0);
    std::vector<Gate> out = synth_multiqubit_cd(word, alpha, mode);
    out.push_back(gD(cplx(0, -alpha), mode));
    append(out, synth_multiqubit_cd(word, -alpha, mode));
    out.push_back(gD(cplx(0, alpha), mode));
    return out;
}

std::vector<Gate> synth_controlled_qumode_op(char axis, int qubit, std::vector<Gate> inner) {
    std::vector<Gate> out = axis_enter(axis, qubit);
    append(out, std::move(inner));
    append(out, axis_leave(axis, qubit));
    return out;
}

}  // namespace cvdv
