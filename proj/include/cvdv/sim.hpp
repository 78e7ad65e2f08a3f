#pragma once
#include <Eigen/Dense>

#include "cvdv/expr.hpp"
#include "cvdv/ir.hpp"

namespace cvdv {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Register description for dense simulation. Basis index layout: qubits then
// qumodes; subsystem 0 is the most significant digit. Each qumode is truncated
// to Fock levels 0..cutoff-1.
struct SimSpace {
    int nq = 0;
    int nm = 0;
    int cutoff = 2;
    long dim() const {
        long d = 1L << nq;
        for (int i = 0; i < nm; ++i) d *= cutoff;
        return d;
    }
};

struct LadderMatrices {
    Mat a, ad, n;
};
LadderMatrices ladder_matrices(int cutoff);

// Dense matrix of an operator expression on (nq, nm) at `cutoff`.
Mat operator_matrix(const HSum& s, const SimSpace& sp);

// Local unitary of one gate on its own operands (operand-order subsystems,
// qubits first). Constructed exactly in the untruncated space, then clipped
// to `cutoff` — not exp(of a clipped generator). Results are cached.
Mat gate_local_unitary(const Gate& g, int cutoff);

// Apply a gate in place to a state vector / to every column of a matrix.
void apply_gate(Vec& state, const Gate& g, const SimSpace& sp);
void apply_gate(Mat& cols, const Gate& g, const SimSpace& sp);
void apply_circuit(Vec& state, const Circuit& c, const SimSpace& sp);

// Product of clipped gates at `sp.cutoff` (norm can leak through the cutoff
// boundary under composition).
Mat circuit_unitary(const Circuit& c, const SimSpace& sp);
// Evaluate the whole product at cutoff+pad, then clip once to cutoff. Use for
// identity verification.
Mat circuit_unitary_padded(const Circuit& c, const SimSpace& sp, int pad);

// Keep only basis states whose every qumode coordinate is < keep.
Mat project_modes(const Mat& u, const SimSpace& sp, int keep);
// Spectral norm of Pi (U - e^{i gamma} V) Pi with the trace-aligning phase
// gamma = arg tr((Pi U Pi)^dag Pi V Pi). Throws if keep >= cutoff.
double projected_distance(const Mat& u, const Mat& v, const SimSpace& sp, int keep);

double spectral_norm(const Mat& m);

// Matrix clip between cutoffs (same nq/nm; to.cutoff <= from.cutoff).
Mat clip_matrix(const Mat& u, const SimSpace& from, const SimSpace& to);

// Permutation unitary that relabels wires: qubit j's value moves to qubit
// qubit_dest[j], qumode j's value to qumode mode_dest[j] (both bijections).
Mat layout_permutation(const std::vector<int>& qubit_dest, const std::vector<int>& mode_dest,
                       const SimSpace& sp);

}  // namespace cvdv
