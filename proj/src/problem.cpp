#include "slgreen/problem.hpp"

#include <cmath>
#include <string>

namespace slgreen {

const char* to_string(errc code) {
    switch (code) {
        case errc::bad_geometry: return "bad_geometry";
        case errc::nonpositive_coupling_minor: return "nonpositive_coupling_minor";
        case errc::zero_boundary_row: return "zero_boundary_row";
        case errc::nonpositive_delta0: return "nonpositive_delta0";
        case errc::out_of_side: return "out_of_side";
        case errc::step_underflow: return "step_underflow";
        case errc::non_finite: return "non_finite";
        case errc::max_steps_exceeded: return "max_steps_exceeded";
        case errc::out_of_span: return "out_of_span";
        case errc::quadrature_failure: return "quadrature_failure";
        case errc::bad_range: return "bad_range";
        case errc::not_a_bracket: return "not_a_bracket";
        case errc::no_convergence: return "no_convergence";
        case errc::not_an_eigenvalue: return "not_an_eigenvalue";
        case errc::at_eigenvalue: return "at_eigenvalue";
        case errc::at_interior_point: return "at_interior_point";
        case errc::delta0_zero: return "delta0_zero";
        case errc::not_in_domain: return "not_in_domain";
        case errc::degenerate_constraints: return "degenerate_constraints";
        case errc::syntax_error: return "syntax_error";
        case errc::missing_key: return "missing_key";
        case errc::invalid_argument: return "invalid_argument";
    }
    return "unknown";
}

Minors compute_minors(const Transmission& t) {
    auto det = [&](int k, int j) {
        return t.row1[static_cast<size_t>(k)] * t.row2[static_cast<size_t>(j)] -
               t.row1[static_cast<size_t>(j)] * t.row2[static_cast<size_t>(k)];
    };
    Minors m;
    m.d12 = det(0, 1);
    m.d13 = det(0, 2);
    m.d14 = det(0, 3);
    m.d23 = det(1, 2);
    m.d24 = det(1, 3);
    m.d34 = det(2, 3);
    return m;
}

Problem validate_problem(Problem p, ValidateMode mode) {
    const auto& iv = p.interval;
    require(std::isfinite(iv.a) && std::isfinite(iv.c) && std::isfinite(iv.b),
            errc::bad_geometry, "interval endpoints must be finite");
    require(iv.a < iv.c && iv.c < iv.b, errc::bad_geometry,
            "need a < c < b, got a=" + std::to_string(iv.a) + " c=" + std::to_string(iv.c) +
                " b=" + std::to_string(iv.b));

    require(!p.potential.left_coeffs.empty() && !p.potential.right_coeffs.empty(),
            errc::invalid_argument, "potential coefficient lists must be nonempty");

    require(p.left.alpha10 != 0.0 || p.left.alpha11 != 0.0, errc::zero_boundary_row,
            "(alpha10, alpha11) = (0, 0)");

    p.minors = compute_minors(p.transmission);
    require(p.minors.d12 > 0.0 && p.minors.d34 > 0.0, errc::nonpositive_coupling_minor,
            "require d12 > 0 and d34 > 0, got d12=" + std::to_string(p.minors.d12) +
                " d34=" + std::to_string(p.minors.d34));

    const double d0 = p.delta0();
    p.mode = mode;
    p.delta0_zero_warning = false;
    if (mode == ValidateMode::full) {
        require(d0 > 0.0, errc::nonpositive_delta0,
                "delta0 = " + std::to_string(d0) + " but full mode requires delta0 > 0");
    } else {
        require(d0 >= 0.0, errc::nonpositive_delta0,
                "delta0 = " + std::to_string(d0) + " < 0 is inadmissible in any mode");
        if (d0 == 0.0) p.delta0_zero_warning = true;
    }
    p.validated = true;
    return p;
}

void poly_eval(const std::vector<double>& coeffs, double x, double& value, double& deriv) {
    // Horner for the value and the derivative in one sweep.
    double v = 0.0, d = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) {
        d = d * x + v;
        v = v * x + coeffs[i];
    }
    value = v;
    deriv = d;
}

double eval_potential(const Problem& p, Side side, double x) {
    const auto& iv = p.interval;
    if (side == Side::left) {
        require(x >= iv.a && x <= iv.c, errc::out_of_side,
                "x=" + std::to_string(x) + " outside [a, c]");
        if (p.potential.left_custom) return p.potential.left_custom(x);
        double v, d;
        poly_eval(p.potential.left_coeffs, x, v, d);
        return v;
    }
    require(x >= iv.c && x <= iv.b, errc::out_of_side, "x=" + std::to_string(x) + " outside [c, b]");
    if (p.potential.right_custom) return p.potential.right_custom(x);
    double v, d;
    poly_eval(p.potential.right_coeffs, x, v, d);
    return v;
}

} // namespace slgreen
