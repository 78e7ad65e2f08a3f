#include "cvdv/expr.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace cvdv {

char pauli_mul_letter(char a, char b, int& ipow) {
    if (a == 'I') return b;
    if (b == 'I') return a;
    if (a == b) return 'I';
    // XY = iZ, YZ = iX, ZX = iY; reversed order picks up i^3.
    static const std::string cyc = "XYZ";
    int ia = (int)cyc.find(a), ib = (int)cyc.find(b);
    if ((ia + 1) % 3 == ib) {
        ipow = (ipow + 1) % 4;
        return cyc[(ia + 2) % 3];
    }
    ipow = (ipow + 3) % 4;
    return cyc[(ib + 2) % 3];
}

std::pair<int, std::string> pauli_mul(const std::string& a, const std::string& b) {
    size_t n = std::max(a.size(), b.size());
    std::string out(n, 'I');
    int ipow = 0;
    for (size_t i = 0; i < n; ++i) {
        char ca = i < a.size() ? a[i] : 'I';
        char cb = i < b.size() ? b[i] : 'I';
        out[i] = pauli_mul_letter(ca, cb, ipow);
    }
    return {ipow, out};
}

int pauli_weight(const std::string& word) {
    return (int)std::count_if(word.begin(), word.end(), [](char c) { return c != 'I'; });
}

std::vector<int> pauli_support(const std::string& word) {
    std::vector<int> out;
    for (size_t i = 0; i < word.size(); ++i)
        if (word[i] != 'I') out.push_back((int)i);
    return out;
}

std::string trim_word(std::string word) {
    while (!word.empty() && word.back() == 'I') word.pop_back();
    return word;
}

static cplx ipow_val(int p) {
    static const cplx tab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return tab[((p % 4) + 4) % 4];
}

HybridTerm mul(const HybridTerm& a, const HybridTerm& b) {
    auto [ip, w] = pauli_mul(a.word, b.word);
    HybridTerm out;
    out.coeff = a.coeff * b.coeff * ipow_val(ip);
    out.word = std::move(w);
    out.ops = a.ops;
    out.ops.insert(out.ops.end(), b.ops.begin(), b.ops.end());
    return out;
}

HybridTerm adjoint_term(const HybridTerm& t) {
    HybridTerm out;
    out.coeff = std::conj(t.coeff);
    out.word = t.word;  // Pauli words are Hermitian
    out.ops.assign(t.ops.rbegin(), t.ops.rend());
    for (auto& o : out.ops) o.dag = !o.dag;
    return out;
}

HSum adjoint(const HSum& s) {
    HSum out;
    out.reserve(s.size());
    for (auto& t : s) out.push_back(adjoint_term(t));
    return out;
}

HSum mul(const HSum& a, const HSum& b) {
    HSum out;
    out.reserve(a.size() * b.size());
    for (auto& x : a)
        for (auto& y : b) out.push_back(mul(x, y));
    return out;
}

HSum add(const HSum& a, const HSum& b) {
    HSum out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

HSum scale(const HSum& a, cplx c) {
    HSum out = a;
    for (auto& t : out) t.coeff *= c;
    return out;
}

HSum commutator(const HSum& a, const HSum& b) {
    return normal_order(add(mul(a, b), scale(mul(b, a), {-1, 0})));
}

HSum anticommutator(const HSum& a, const HSum& b) {
    return normal_order(add(mul(a, b), mul(b, a)));
}

// Normal order the ladder factors of one term, expanding a a^dag = a^dag a + 1.
// Produces terms whose ops are sorted by mode ascending, daggers first.
static void normal_order_term(HybridTerm t, HSum& out) {
    // Find the first adjacent out-of-order pair.
    for (size_t i = 0; i + 1 < t.ops.size(); ++i) {
        const LadderOp &x = t.ops[i], &y = t.ops[i + 1];
        bool swap_modes = x.mode > y.mode;  // different modes commute freely
        bool swap_dag = x.mode == y.mode && !x.dag && y.dag;
        if (swap_modes) {
            std::swap(t.ops[i], t.ops[i + 1]);
            normal_order_term(std::move(t), out);
            return;
        }
        if (swap_dag) {
            HybridTerm dropped = t;  // a a^dag -> 1
            dropped.ops.erase(dropped.ops.begin() + i, dropped.ops.begin() + i + 2);
            std::swap(t.ops[i], t.ops[i + 1]);  // -> a^dag a
            normal_order_term(std::move(t), out);
            normal_order_term(std::move(dropped), out);
            return;
        }
    }
    out.push_back(std::move(t));
}

HSum normal_order(const HSum& s, double eps) {
    HSum flat;
    for (auto& t : s) normal_order_term(t, flat);
    // Combine like terms.
    std::map<std::string, HybridTerm> acc;
    for (auto& t : flat) {
        std::ostringstream key;
        key << trim_word(t.word) << '|';
        for (auto& o : t.ops) key << (o.dag ? 'd' : 'a') << o.mode << ',';
        auto it = acc.find(key.str());
        if (it == acc.end()) {
            HybridTerm c = t;
            c.word = trim_word(c.word);
            acc.emplace(key.str(), std::move(c));
        } else {
            it->second.coeff += t.coeff;
        }
    }
    HSum out;
    for (auto& [k, t] : acc)
        if (std::abs(t.coeff) > eps) out.push_back(std::move(t));
    return out;
}

bool is_zero(const HSum& s, double eps) {
    for (auto& t : normal_order(s, 0.0))
        if (std::abs(t.coeff) > eps) return false;
    return true;
}

bool is_hermitian(const HSum& s, double eps) {
    return is_zero(add(s, scale(adjoint(s), {-1, 0})), eps);
}

bool is_anti_hermitian(const HSum& s, double eps) {
    return is_zero(add(s, adjoint(s)), eps);
}

int max_qubit(const HSum& s) {
    int m = -1;
    for (auto& t : s) {
        std::string w = trim_word(t.word);
        m = std::max(m, (int)w.size() - 1);
    }
    return m;
}

int max_mode(const HSum& s) {
    int m = -1;
    for (auto& t : s)
        for (auto& o : t.ops) m = std::max(m, o.mode);
    return m;
}

// --- Debug notation ---

static std::string emit_term(const HybridTerm& t) {
    std::ostringstream os;
    if (t.coeff.imag() == 0.0)
        os << fmt_double(t.coeff.real());
    else
        os << '(' << fmt_cplx(t.coeff) << ')';
    std::string w = trim_word(t.word);
    if (!w.empty()) os << " * " << w;
    for (size_t i = 0; i < t.ops.size(); ++i) {
        os << (i == 0 ? " * " : " ");
        os << (t.ops[i].dag ? "ad(" : "a(") << t.ops[i].mode << ')';
    }
    return os.str();
}

std::string emit_expr(const HSum& s) {
    if (s.empty()) return "(0)";
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += " + ";
        out += emit_term(s[i]);
    }
    return out;
}

namespace {

struct ExprLexer {
    std::string text;
    size_t pos = 0;
    void skip() {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos < text.size() ? text[pos] : '\0';
    }
};

// number with optional imaginary suffix: 0.5, -2e-3, 1.5i
cplx parse_number(ExprLexer& lx) {
    lx.skip();
    size_t start = lx.pos;
    if (lx.pos < lx.text.size() && (lx.text[lx.pos] == '+' || lx.text[lx.pos] == '-')) ++lx.pos;
    while (lx.pos < lx.text.size()) {
        char c = lx.text[lx.pos];
        if (std::isdigit((unsigned char)c) || c == '.') {
            ++lx.pos;
        } else if ((c == 'e' || c == 'E') && lx.pos + 1 < lx.text.size() &&
                   (std::isdigit((unsigned char)lx.text[lx.pos + 1]) || lx.text[lx.pos + 1] == '+' ||
                    lx.text[lx.pos + 1] == '-')) {
            lx.pos += 2;
        } else {
            break;
        }
    }
    if (lx.pos == start) throw parse_error("expected number at '" + lx.text.substr(lx.pos, 8) + "'");
    double v = std::stod(lx.text.substr(start, lx.pos - start));
    if (lx.pos < lx.text.size() && lx.text[lx.pos] == 'i') {
        ++lx.pos;
        return {0.0, v};
    }
    return {v, 0.0};
}

cplx parse_coeff(ExprLexer& lx) {
    if (lx.eat('(')) {
        cplx v = parse_number(lx);
        // optional second component: re+imi / re-imi
        lx.skip();
        if (lx.peek() == '+' || lx.peek() == '-') {
            cplx w = parse_number(lx);
            v += w;
        }
        if (!lx.eat(')')) throw parse_error("expected ')'");
        return v;
    }
    return parse_number(lx);
}

LadderOp parse_ladder_factor(ExprLexer& lx) {
    lx.skip();
    bool dag = lx.text.compare(lx.pos, 3, "ad(") == 0;
    bool ann = lx.text.compare(lx.pos, 2, "a(") == 0;
    if (!dag && !ann) throw parse_error("expected a( or ad(");
    lx.pos += dag ? 3 : 2;
    cplx m = parse_number(lx);
    if (!lx.eat(')')) throw parse_error("expected ')' after mode index");
    return {(int)m.real(), dag};
}

HybridTerm parse_term(ExprLexer& lx) {
    HybridTerm t;
    t.coeff = parse_coeff(lx);
    while (lx.eat('*')) {
        lx.skip();
        char c = lx.peek();
        if (c == 'a') {
            // ladder segment: space-separated factors until '+' or end
            t.ops.push_back(parse_ladder_factor(lx));
            while (lx.peek() == 'a') t.ops.push_back(parse_ladder_factor(lx));
        } else if (c == 'I' || c == 'X' || c == 'Y' || c == 'Z') {
            std::string w;
            while (lx.pos < lx.text.size() && std::string("IXYZ").find(lx.text[lx.pos]) != std::string::npos)
                w += lx.text[lx.pos++];
            t.word = w;
        } else {
            throw parse_error(std::string("unexpected factor start '") + c + "'");
        }
    }
    return t;
}

}  // namespace

HSum parse_expr(const std::string& text) {
    ExprLexer lx{text};
    HSum out;
    out.push_back(parse_term(lx));
    while (lx.eat('+')) out.push_back(parse_term(lx));
    lx.skip();
    if (lx.pos != lx.text.size()) throw parse_error("trailing input: '" + lx.text.substr(lx.pos) + "'");
    return out;
}

}  // namespace cvdv
