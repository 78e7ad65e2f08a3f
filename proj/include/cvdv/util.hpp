#pragma once
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cvdv {

using cplx = std::complex<double>;
inline constexpr double PI = 3.14159265358979323846;

// Shortest exact decimal form of a double (round-trips bit-exactly).
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Prefer a shorter representation when it round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char s[64];
        std::snprintf(s, sizeof s, "%.*g", prec, v);
        if (std::stod(s) == v) return s;
    }
    return buf;
}

// Complex number in DSL argument syntax: "re", "imi", or "re+imi" / "re-imi".
inline std::string fmt_cplx(cplx v) {
    if (v.imag() == 0.0) return fmt_double(v.real());
    std::string im = fmt_double(std::abs(v.imag())) + "i";
    if (v.real() == 0.0) return (v.imag() < 0 ? "-" : "") + im;
    return fmt_double(v.real()) + (v.imag() < 0 ? "-" : "+") + im;
}

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace cvdv
