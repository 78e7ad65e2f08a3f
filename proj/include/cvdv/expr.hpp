#pragma once
#include <string>
#include <vector>

#include "cvdv/util.hpp"

namespace cvdv {

// ---------------------------------------------------------------------------
// Operator expressions over a hybrid qubit/qumode register.
//
// A HybridTerm is   coeff * (Pauli word on qubits) * (ladder-operator product
// on qumodes).  The Pauli word is dense: word[i] in {I,X,Y,Z} acts on qubit i
// (trailing identities may be omitted).  The ladder product is an ordered list
// of creation/annihilation factors; ops[0] is the leftmost operator factor.
// A sum of terms (HSum) represents a general operator.
// ---------------------------------------------------------------------------

struct LadderOp {
    int mode = 0;
    bool dag = false;  // true: a^dag, false: a
    bool operator==(const LadderOp&) const = default;
};

struct HybridTerm {
    cplx coeff{1.0, 0.0};
    std::string word;           // dense Pauli word, 'I' padded
    std::vector<LadderOp> ops;  // ordered ladder factors (left to right)
};

using HSum = std::vector<HybridTerm>;

// --- Pauli word algebra ---

// Single-letter product: returns product letter, adds the i-power to phase.
char pauli_mul_letter(char a, char b, int& ipow);

// Word product with phase i^ipow (words padded to common width).
std::pair<int, std::string> pauli_mul(const std::string& a, const std::string& b);

int pauli_weight(const std::string& word);          // number of non-I letters
std::vector<int> pauli_support(const std::string& word);
std::string trim_word(std::string word);            // drop trailing 'I's

// --- Term / sum algebra ---

HybridTerm mul(const HybridTerm& a, const HybridTerm& b);
HybridTerm adjoint_term(const HybridTerm& t);
HSum adjoint(const HSum& s);
HSum mul(const HSum& a, const HSum& b);
HSum add(const HSum& a, const HSum& b);
HSum scale(const HSum& a, cplx c);
HSum commutator(const HSum& a, const HSum& b);      // AB - BA, normal ordered
HSum anticommutator(const HSum& a, const HSum& b);  // AB + BA, normal ordered

// Rewrite every monomial with creation operators left of annihilation
// operators per mode (modes ascending), expanding [a, a^dag] = 1; combines
// like terms and drops coefficients below `eps`.
HSum normal_order(const HSum& s, double eps = 1e-14);

bool is_zero(const HSum& s, double eps = 1e-10);
bool is_hermitian(const HSum& s, double eps = 1e-10);
bool is_anti_hermitian(const HSum& s, double eps = 1e-10);

int max_qubit(const HSum& s);  // -1 if none
int max_mode(const HSum& s);   // -1 if none

// --- Debug notation ---
// One term:  `0.5 * ZII * ad(1) a(1)`; pure-boson terms omit the word, pure-
// Pauli terms omit the ladder factors, scalars are just the coefficient.
// Sums join terms with ` + `.  parse_expr(emit_expr(s)) reproduces s.
std::string emit_expr(const HSum& s);
HSum parse_expr(const std::string& text);

}  // namespace cvdv
