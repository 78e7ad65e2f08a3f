#include "cvdv/qasm.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace cvdv {

namespace {

struct Lexer {
    const std::string& text;
    size_t pos = 0;

    void skip() {
        while (pos < text.size()) {
            if (std::isspace((unsigned char)text[pos])) {
                ++pos;
            } else if (text.compare(pos, 2, "//") == 0) {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }
    bool done() {
        skip();
        return pos >= text.size();
    }
    char peek() {
        skip();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool eat(char c) {
        skip();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& msg) {
        int line = 1;
        for (size_t i = 0; i < pos && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw parse_error("line " + std::to_string(line) + ": " + msg);
    }
    std::string ident() {
        skip();
        size_t start = pos;
        while (pos < text.size() && (std::isalnum((unsigned char)text[pos]) || text[pos] == '_')) ++pos;
        if (pos == start) fail("expected identifier");
        return text.substr(start, pos - start);
    }
    int integer() {
        skip();
        size_t start = pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
        if (pos == start) fail("expected integer");
        return std::stoi(text.substr(start, pos - start));
    }
};

// --- parameter expressions ---

cplx parse_expr_sum(Lexer& lx);

cplx parse_primary(Lexer& lx) {
    lx.skip();
    if (lx.eat('(')) {
        cplx v = parse_expr_sum(lx);
        lx.expect(')');
        return v;
    }
    if (lx.eat('-')) return -parse_primary(lx);
    char c = lx.peek();
    if (std::isalpha((unsigned char)c)) {
        std::string id = lx.ident();
        if (id == "pi") return {PI, 0};
        if (id == "i") return {0, 1};
        lx.fail("unknown constant '" + id + "'");
    }
    // number with optional imaginary suffix
    size_t start = lx.pos;
    while (lx.pos < lx.text.size()) {
        char ch = lx.text[lx.pos];
        if (std::isdigit((unsigned char)ch) || ch == '.') {
            ++lx.pos;
        } else if ((ch == 'e' || ch == 'E') && lx.pos + 1 < lx.text.size() &&
                   (std::isdigit((unsigned char)lx.text[lx.pos + 1]) ||
                    lx.text[lx.pos + 1] == '+' || lx.text[lx.pos + 1] == '-')) {
            lx.pos += 2;
        } else {
            break;
        }
    }
    if (lx.pos == start) lx.fail("expected number");
    double v = std::stod(lx.text.substr(start, lx.pos - start));
    if (lx.pos < lx.text.size() && lx.text[lx.pos] == 'i') {
        ++lx.pos;
        return {0, v};
    }
    return {v, 0};
}

cplx parse_product(Lexer& lx) {
    cplx v = parse_primary(lx);
    for (;;) {
        if (lx.eat('*')) {
            v *= parse_primary(lx);
        } else if (lx.eat('/')) {
            v /= parse_primary(lx);
        } else {
            return v;
        }
    }
}

cplx parse_expr_sum(Lexer& lx) {
    cplx v = parse_product(lx);
    for (;;) {
        lx.skip();
        char c = lx.peek();
        if (c == '+') {
            lx.eat('+');
            v += parse_product(lx);
        } else if (c == '-') {
            lx.eat('-');
            v -= parse_product(lx);
        } else {
            return v;
        }
    }
}

bool is_word_char(char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; }

}  // namespace

Circuit parse_qasm(const std::string& text) {
    Lexer lx{text};
    Circuit circ;
    while (!lx.done()) {
        std::string name = lx.ident();
        Gate g;
        g.kind = name_kind(name);
        // parameters
        if (lx.peek() == '(') {
            lx.eat('(');
            if (lx.peek() != ')') {
                g.params.push_back(parse_expr_sum(lx));
                while (lx.eat(',')) g.params.push_back(parse_expr_sum(lx));
            }
            lx.expect(')');
        }
        int want = n_params(g.kind);
        if ((int)g.params.size() != want)
            lx.fail(name + " expects " + std::to_string(want) + " parameter(s), got " +
                    std::to_string(g.params.size()));
        // operands
        if (g.kind == GateKind::PAULI) {
            lx.skip();
            std::string w;
            while (lx.pos < lx.text.size() && is_word_char(lx.text[lx.pos])) w += lx.text[lx.pos++];
            if (w.empty()) lx.fail("pauli statement needs a Pauli word");
            g.word = w;
            if (lx.peek() == 'q') {
                std::string r = lx.ident();
                if (r != "qm") lx.fail("pauli statement operand must be qm[...]");
                lx.expect('[');
                g.qumodes.push_back(lx.integer());
                lx.expect(']');
            }
        } else {
            bool first = true;
            while (lx.peek() != ';') {
                if (!first) lx.expect(',');
                first = false;
                std::string r = lx.ident();
                lx.expect('[');
                int idx = lx.integer();
                lx.expect(']');
                if (r == "q")
                    g.qubits.push_back(idx);
                else if (r == "qm")
                    g.qumodes.push_back(idx);
                else
                    lx.fail("unknown register '" + r + "'");
            }
            if ((int)g.qubits.size() != n_qubits(g.kind) ||
                (int)g.qumodes.size() != n_qumodes(g.kind))
                lx.fail(name + " has wrong operand count");
        }
        lx.expect(';');
        circ.push(std::move(g));
    }
    return circ;
}

std::string emit_qasm(const Circuit& c) {
    std::ostringstream os;
    for (const auto& g : c.gates) {
        os << kind_name(g.kind);
        if (!g.params.empty()) {
            os << '(';
            for (size_t i = 0; i < g.params.size(); ++i) {
                if (i) os << ',';
                os << fmt_cplx(g.params[i]);
            }
            os << ')';
        }
        if (g.kind == GateKind::PAULI) {
            os << ' ' << g.word;
            if (!g.qumodes.empty()) os << " qm[" << g.qumodes[0] << ']';
        } else {
            bool first = true;
            for (int q : g.qubits) {
                os << (first ? " " : ", ") << "q[" << q << ']';
                first = false;
            }
            for (int m : g.qumodes) {
                os << (first ? " " : ", ") << "qm[" << m << ']';
                first = false;
            }
        }
        os << ";\n";
    }
    return os.str();
}

Circuit read_qasm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_qasm(ss.str());
}

void write_qasm_file(const std::string& path, const Circuit& c) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write '" + path + "'");
    out << emit_qasm(c);
}

}  // namespace cvdv
