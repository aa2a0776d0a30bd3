#ifndef SLGREEN_PROBLEM_HPP
#define SLGREEN_PROBLEM_HPP

#include <array>
#include <functional>
#include <vector>

#include "slgreen/errors.hpp"

namespace slgreen {

enum class Side { left, right };

// [a, c) u (c, b] with one interior coupling point c.
struct Interval {
    double a = 0.0;
    double c = 0.0;
    double b = 0.0;
};

// Piecewise-polynomial potential, one polynomial per side, coefficients in
// ascending degree. A caller-supplied evaluator may override a side; file
// input always produces polynomials.
struct Potential {
    std::vector<double> left_coeffs{0.0};
    std::vector<double> right_coeffs{0.0};
    std::function<double(double)> left_custom;   // optional
    std::function<double(double)> right_custom;  // optional
};

// tau1(y) = alpha10*y(a) + alpha11*y'(a)
struct BoundaryLeft {
    double alpha10 = 1.0;
    double alpha11 = 0.0;
};

// tau2(y) = alpha20*y(b) - alpha21*y'(b) + lambda*(alpha20p*y(b) - alpha21p*y'(b))
struct BoundaryRight {
    double alpha20 = 1.0;
    double alpha21 = 0.0;
    double alpha20p = 0.0;
    double alpha21p = 0.0;

    double delta0() const { return alpha21 * alpha20p - alpha20 * alpha21p; }
};

// Coupling conditions at c as a 2x4 coefficient matrix acting on
// (y(c-), y'(c-), y(c+), y'(c+)). Column order: value-, deriv-, value+, deriv+.
struct Transmission {
    std::array<double, 4> row1{1.0, 0.0, -1.0, 0.0};
    std::array<double, 4> row2{0.0, 1.0, 0.0, -1.0};
};

// 2x2 minors d_kj of the coupling matrix (columns k and j, 1-based).
// They satisfy the Pluecker relation d12*d34 - d13*d24 + d14*d23 = 0.
struct Minors {
    double d12 = 0.0, d13 = 0.0, d14 = 0.0;
    double d23 = 0.0, d24 = 0.0, d34 = 0.0;
};

enum class ValidateMode { full, spectrum_only };

struct Problem {
    Interval interval;
    Potential potential;
    BoundaryLeft left;
    BoundaryRight right;
    Transmission transmission;

    Minors minors;  // derived at validation, single source of truth downstream
    ValidateMode mode = ValidateMode::full;
    bool delta0_zero_warning = false;
    bool validated = false;

    double delta0() const { return right.delta0(); }
};

Minors compute_minors(const Transmission& t);

// Checks geometry, the boundary rows, the coupling minor positivity
// (d12 > 0 and d34 > 0) and, in full mode, delta0 > 0. spectrum_only mode
// tolerates delta0 = 0 and flags the result instead; the Hilbert-space
// operations then refuse to run on it.
Problem validate_problem(Problem p, ValidateMode mode = ValidateMode::full);

// Horner evaluation of q on one side; the custom evaluator wins if set.
double eval_potential(const Problem& p, Side side, double x);

// Value and first derivative of an ascending-coefficient polynomial.
void poly_eval(const std::vector<double>& coeffs, double x, double& value, double& deriv);

} // namespace slgreen

#endif
