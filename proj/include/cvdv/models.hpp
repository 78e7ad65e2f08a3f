#pragma once
#include <map>
#include <string>
#include <vector>

#include "cvdv/expr.hpp"

namespace cvdv {

// A Hamiltonian instance: H = sum over groups (each group Hermitian), acting
// on nq qubits and nm qumodes (exclusive of any ancilla a decomposition may
// request on top).
struct Model {
    std::string name;
    int nq = 0, nm = 0;
    std::vector<HSum> groups;
};

struct ModelParams {
    // Named couplings; anything not set defaults to 1.0.
    std::map<std::string, double> c;
    double get(const std::string& key) const;
};

// Builders. `size` is the chain length (sites); couplings by name:
//   kerr             : omega, kappa             (1 qumode, 0 qubits)
//   z2higgs          : omega, chi, g, J         (L qumodes, L-1 link qubits)
//   bosehubbard      : J, U, mu                 (L qumodes, 0 qubits)
//   hubbardholstein  : J, U, omega, g           (2L qubits, L qumodes)
//   evc              : eps, omega, chi, g, gp   (N qubits, 2N qumodes)
//   heisenberg       : Jx, Jy, Jz, h            (N qubits, 0 qumodes)
Model build_model(const std::string& name, int size, const ModelParams& p = {});
std::vector<std::string> model_names();

// Jordan-Wigner image of the fermionic annihilator c_j over a linear qubit
// ordering: (prod_{k<j} Z_k) (X_j + i Y_j)/2.
HSum jw_annihilate(int j);

// Parse a plain-text Hamiltonian: one `coeff WORD` per line ('#'/'//'
// comments), terms with equal words merged; each surviving term is one group.
Model load_pauli_file(const std::string& path);

}  // namespace cvdv
