#include "cvdv/models.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cvdv {

double ModelParams::get(const std::string& key) const {
    auto it = c.find(key);
    return it == c.end() ? 1.0 : it->second;
}

std::vector<std::string> model_names() {
    return {"kerr", "z2higgs", "bosehubbard", "hubbardholstein", "evc", "heisenberg"};
}

namespace {

HybridTerm bterm(cplx c, std::vector<LadderOp> ops) { return {c, "", std::move(ops)}; }

HSum number_op(cplx c, int m) { return {bterm(c, {{m, true}, {m, false}})}; }

HSum quartic_op(cplx c, int m) {
    return {bterm(c, {{m, true}, {m, true}, {m, false}, {m, false}})};
}

// c (ad_i a_j + a_i ad_j)
HSum hop_op(cplx c, int i, int j) {
    return {bterm(c, {{i, true}, {j, false}}), bterm(c, {{i, false}, {j, true}})};
}

// c (ad_m + a_m)
HSum quad_op(cplx c, int m) { return {bterm(c, {{m, true}}), bterm(c, {{m, false}})}; }

HSum pword(cplx c, const std::string& w) { return {HybridTerm{c, w, {}}}; }

std::string letter_at(char l, int q, int nq) {
    std::string w(nq, 'I');
    w[q] = l;
    return w;
}

Model kerr_model(const ModelParams& p) {
    Model m{"kerr", 0, 1, {}};
    // interaction listed first: the tuned step interleaving expects it there
    m.groups.push_back(quartic_op(p.get("kappa") / 2, 0));
    m.groups.push_back(number_op(p.get("omega"), 0));
    return m;
}

Model z2higgs_model(int L, const ModelParams& p) {
    if (L < 2) throw std::invalid_argument("z2higgs needs at least 2 sites");
    Model m{"z2higgs", L - 1, L, {}};
    const double om = p.get("omega"), chi = p.get("chi"), g = p.get("g"), J = p.get("J");
    for (int j = 0; j < L; ++j) {
        m.groups.push_back(number_op(om, j));
        m.groups.push_back(quartic_op(chi / 2, j));
    }
    for (int l = 0; l + 1 < L; ++l) {
        m.groups.push_back(pword(-g, letter_at('X', l, L - 1)));
        m.groups.push_back(mul(pword(1.0, letter_at('X', l, L - 1)), hop_op(J, l, l + 1)));
    }
    return m;
}

Model bosehubbard_model(int L, const ModelParams& p) {
    if (L < 2) throw std::invalid_argument("bosehubbard needs at least 2 sites");
    Model m{"bosehubbard", 0, L, {}};
    const double J = p.get("J"), U = p.get("U"), mu = p.get("mu");
    for (int j = 0; j < L; ++j) {
        m.groups.push_back(quartic_op(U / 2, j));
        m.groups.push_back(number_op(-mu, j));
    }
    for (int j = 0; j + 1 < L; ++j) m.groups.push_back(hop_op(-J, j, j + 1));
    return m;
}

Model hubbardholstein_model(int L, const ModelParams& p) {
    if (L < 2) throw std::invalid_argument("hubbardholstein needs at least 2 sites");
    // spin-up fermions on qubits 0..L-1, spin-down on L..2L-1, one mode/site
    Model m{"hubbardholstein", 2 * L, L, {}};
    const double J = p.get("J"), U = p.get("U"), om = p.get("omega"), g = p.get("g");
    const int nq = 2 * L;
    auto pad = [&](HSum s) {
        for (auto& t : s) t.word.resize(nq, 'I');
        return s;
    };
    for (int spin = 0; spin < 2; ++spin)
        for (int j = 0; j + 1 < L; ++j) {
            int a = spin * L + j, b = a + 1;
            HSum hop = add(mul(adjoint(jw_annihilate(a)), jw_annihilate(b)),
                           mul(adjoint(jw_annihilate(b)), jw_annihilate(a)));
            m.groups.push_back(pad(normal_order(scale(hop, -J))));
        }
    for (int j = 0; j < L; ++j) {
        // U n_up n_dn, the scalar part dropped
        HSum rep = add(pword(-U / 4, letter_at('Z', j, nq)),
                       add(pword(-U / 4, letter_at('Z', L + j, nq)),
                           mul(pword(U / 4, letter_at('Z', j, nq)),
                               pword(1.0, letter_at('Z', L + j, nq)))));
        m.groups.push_back(normal_order(rep));
        m.groups.push_back(number_op(om, j));
        // g (n_up + n_dn)(ad + a): displacement and two conditioned displacements
        HSum dens = add(pword(1.0, std::string(nq, 'I')),
                        add(pword(-0.5, letter_at('Z', j, nq)),
                            pword(-0.5, letter_at('Z', L + j, nq))));
        m.groups.push_back(normal_order(mul(scale(dens, g), quad_op(1.0, j))));
    }
    return m;
}

Model evc_model(int N, const ModelParams& p) {
    if (N < 2) throw std::invalid_argument("evc needs at least 2 sites");
    // one qubit per site; modes 2g (tuning) and 2g+1 (coupling) per site
    Model m{"evc", N, 2 * N, {}};
    const double eps = p.get("eps"), om = p.get("omega"), chi = p.get("chi");
    const double g = p.get("g"), gp = p.get("gp");
    for (int s = 0; s < N; ++s) {
        m.groups.push_back(pword(eps, letter_at('Z', s, N)));
        m.groups.push_back(number_op(om, 2 * s));
        m.groups.push_back(number_op(om, 2 * s + 1));
        m.groups.push_back(mul(pword(chi, letter_at('Z', s, N)), number_op(1.0, 2 * s)));
    }
    for (int s = 0; s + 1 < N; ++s) {
        HSum flip = add(mul(pword(1.0, letter_at('X', s, N)), pword(1.0, letter_at('X', s + 1, N))),
                        mul(pword(1.0, letter_at('Y', s, N)), pword(1.0, letter_at('Y', s + 1, N))));
        m.groups.push_back(scale(flip, g / 2));
        // hopping modulated by the left site's coupling mode
        m.groups.push_back(normal_order(mul(scale(flip, gp / 2), quad_op(1.0, 2 * s + 1))));
    }
    return m;
}

Model heisenberg_model(int N, const ModelParams& p) {
    if (N < 2) throw std::invalid_argument("heisenberg needs at least 2 sites");
    Model m{"heisenberg", N, 0, {}};
    const double jx = p.get("Jx"), jy = p.get("Jy"), jz = p.get("Jz"), h = p.get("h");
    for (int s = 0; s + 1 < N; ++s) {
        for (auto& [l, c] : {std::pair<char, double>{'X', jx}, {'Y', jy}, {'Z', jz}}) {
            HSum b = mul(pword(1.0, letter_at(l, s, N)), pword(1.0, letter_at(l, s + 1, N)));
            m.groups.push_back(scale(b, -c / 2));
        }
    }
    for (int s = 0; s < N; ++s) m.groups.push_back(pword(-h / 2, letter_at('Z', s, N)));
    return m;
}

}  // namespace

HSum jw_annihilate(int j) {
    std::string zs(j, 'Z');
    HSum x = pword(0.5, zs + "X"), y = pword(cplx(0, 0.5), zs + "Y");
    return add(x, y);
}

Model build_model(const std::string& name, int size, const ModelParams& p) {
    if (name == "kerr") return kerr_model(p);
    if (name == "z2higgs") return z2higgs_model(size, p);
    if (name == "bosehubbard") return bosehubbard_model(size, p);
    if (name == "hubbardholstein") return hubbardholstein_model(size, p);
    if (name == "evc") return evc_model(size, p);
    if (name == "heisenberg") return heisenberg_model(size, p);
    throw std::invalid_argument("unknown model: " + name);
}

Model load_pauli_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::map<std::string, cplx> terms;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto slash = line.find("//");
        if (slash != std::string::npos) line.erase(slash);
        std::istringstream ss(line);
        double coeff;
        std::string word;
        if (!(ss >> coeff)) {
            std::istringstream rest(line);
            std::string tok;
            if (!(rest >> tok)) continue;  // blank or comment-only line
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'coefficient WORD', got '" + tok + "'");
        }
        if (!(ss >> word))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing Pauli word");
        for (char ch : word)
            if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z')
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": bad Pauli letter '" + std::string(1, ch) + "'");
        terms[trim_word(word)] += coeff;
    }
    Model m{"pauli-file", 0, 0, {}};
    for (auto& [w, c] : terms) {
        if (w.empty()) continue;  // identity term: a global energy offset
        if (std::abs(c) < 1e-15) continue;
        m.groups.push_back(pword(c, w));
        m.nq = std::max(m.nq, (int)w.size());
    }
    return m;
}

}  // namespace cvdv
