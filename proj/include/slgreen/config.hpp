#ifndef SLGREEN_CONFIG_HPP
#define SLGREEN_CONFIG_HPP

#include <complex>
#include <string>

#include "slgreen/hilbert.hpp"
#include "slgreen/problem.hpp"

namespace slgreen {

// Problem files are sectioned key-value text: '#' comments, sections
// [interval] (a, c, b), [potential] (left, right: space-separated ascending
// polynomial coefficients), [boundary.left] (alpha10, alpha11),
// [boundary.right] (alpha20, alpha21, alpha20p, alpha21p), [transmission]
// (row1, row2: four reals each), and an optional top-level
// mode = full | spectrum_only. Decimal literals only.
Problem parse_config(const std::string& text);

// Canonical document for the problem; parse_config(print_config(p))
// reproduces p bit-exactly.
std::string print_config(const Problem& p);

// Right-hand-side files: sections [f.left], [f.right] each with a 'coeffs'
// key, plus an optional top-level 'f1' (real or complex '<re>+<im>i').
struct RhsSpec {
    Polynomial left{std::vector<double>{0.0}};
    Polynomial right{std::vector<double>{0.0}};
    std::complex<double> f1{0.0, 0.0};
};

RhsSpec parse_rhs(const std::string& text);

// Doubles print with 17 significant digits so CSV round-trips losslessly.
std::string fmt_double(double v);
std::string fmt_complex(const std::complex<double>& z);  // <re>+<im>i, no spaces

std::complex<double> parse_complex(const std::string& token);  // accepts plain reals

} // namespace slgreen

#endif
