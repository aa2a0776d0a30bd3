#ifndef SLGREEN_SHOOTING_HPP
#define SLGREEN_SHOOTING_HPP

#include <utility>

#include "slgreen/ivp.hpp"

namespace slgreen {

// ---------------------------------------------------------------------------
// boundary functionals

template <Scalar S>
S tau1(const Problem& p, const State<S>& at_a) {
    return p.left.alpha10 * at_a.y + p.left.alpha11 * at_a.dy;
}

// T_b(f) = alpha20 f(b) - alpha21 f'(b), the lambda-free part of tau2.
template <Scalar S>
S t_b(const Problem& p, const State<S>& at_b) {
    return p.right.alpha20 * at_b.y - p.right.alpha21 * at_b.dy;
}

// T'_b(f) = alpha20p f(b) - alpha21p f'(b), the lambda coefficient of tau2.
template <Scalar S>
S t_b_prime(const Problem& p, const State<S>& at_b) {
    return p.right.alpha20p * at_b.y - p.right.alpha21p * at_b.dy;
}

template <Scalar S>
S tau2(const Problem& p, S lambda, const State<S>& at_b) {
    return t_b(p, at_b) + lambda * t_b_prime(p, at_b);
}

template <Scalar S>
S tau3(const Problem& p, const State<S>& at_cminus, const State<S>& at_cplus) {
    const auto& r = p.transmission.row1;
    return r[0] * at_cminus.y + r[1] * at_cminus.dy + r[2] * at_cplus.y + r[3] * at_cplus.dy;
}

template <Scalar S>
S tau4(const Problem& p, const State<S>& at_cminus, const State<S>& at_cplus) {
    const auto& r = p.transmission.row2;
    return r[0] * at_cminus.y + r[1] * at_cminus.dy + r[2] * at_cplus.y + r[3] * at_cplus.dy;
}

// ---------------------------------------------------------------------------
// transmission maps
//
// The jump at c is the 2x2 linear system tau3 = tau4 = 0 solved by Cramer's
// rule for the unknown side. In terms of the coupling minors:
//
//   forward  (y-, y-') -> (y+, y+'):  y+  = -(d14 y- + d24 y-') / d34
//                                     y+' =  (d13 y- + d23 y-') / d34
//   backward (y+, y+') -> (y-, y-'):  y-  =  (d23 y+ + d24 y+') / d12
//                                     y-' = -(d13 y+ + d14 y+') / d12
//
// The backward map is the exact inverse of the forward one; the determinant
// of the forward map is d12/d34 by the Pluecker relation, which is where the
// side-Wronskian identity d12 w- = d34 w+ comes from.

template <Scalar S>
State<S> transmission_forward(const Problem& p, const State<S>& left) {
    const Minors& m = p.minors;
    return {-(m.d14 * left.y + m.d24 * left.dy) / m.d34,
            (m.d13 * left.y + m.d23 * left.dy) / m.d34};
}

template <Scalar S>
State<S> transmission_backward(const Problem& p, const State<S>& right) {
    const Minors& m = p.minors;
    return {(m.d23 * right.y + m.d24 * right.dy) / m.d12,
            -(m.d13 * right.y + m.d14 * right.dy) / m.d12};
}

// ---------------------------------------------------------------------------
// basis solutions

// phi solves the equation with phi(a) = alpha11, phi'(a) = -alpha10 (so
// tau1(phi) = 0), is integrated to c, jumps by the forward map and continues
// to b. tau3(phi) = tau4(phi) = 0 hold by construction.
template <Scalar S>
std::pair<Branch<S>, Branch<S>> build_phi(const Problem& p, S lambda, const Tolerances& tol = {}) {
    State<S> at_a{S(p.left.alpha11), S(-p.left.alpha10)};
    Branch<S> left = integrate_ivp(p, Side::left, lambda, p.interval.a, at_a, p.interval.c, tol);
    State<S> at_cplus = transmission_forward(p, left.end_state());
    Branch<S> right =
        integrate_ivp(p, Side::right, lambda, p.interval.c, at_cplus, p.interval.b, tol);
    return {std::move(left), std::move(right)};
}

// psi solves the terminal-value problem psi(b) = alpha21 + lambda*alpha21p,
// psi'(b) = alpha20 + lambda*alpha20p (so tau2(psi) = 0), runs leftward to c,
// jumps by the backward map and continues to a.
template <Scalar S>
std::pair<Branch<S>, Branch<S>> build_psi(const Problem& p, S lambda, const Tolerances& tol = {}) {
    State<S> at_b{S(p.right.alpha21) + lambda * p.right.alpha21p,
                  S(p.right.alpha20) + lambda * p.right.alpha20p};
    Branch<S> right = integrate_ivp(p, Side::right, lambda, p.interval.b, at_b, p.interval.c, tol);
    State<S> at_cminus = transmission_backward(p, right.end_state());
    Branch<S> left =
        integrate_ivp(p, Side::left, lambda, p.interval.c, at_cminus, p.interval.a, tol);
    return {std::move(left), std::move(right)};
}

// W[f, g](x) = f g' - f' g; constant in x on each side for two solutions.
template <Scalar S>
S wronskian_at(const Branch<S>& f, const Branch<S>& g, double x) {
    const State<S> sf = f.eval(x);
    const State<S> sg = g.eval(x);
    return sf.y * sg.dy - sf.dy * sg.y;
}

// Spread of W over n equispaced samples of [lo, hi], relative to the
// cancellation-free magnitude |f g'| + |f' g| of the products forming it.
// Near a zero of W the spread against max|W| is unbounded for any finite
// precision, so constancy is measured against what was actually summed.
template <Scalar S>
double wronskian_constancy_defect(const Branch<S>& f, const Branch<S>& g, double lo, double hi,
                                  int n = 20) {
    double scale = 1e-300;
    std::vector<S> values;
    values.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        const State<S> sf = f.eval(x);
        const State<S> sg = g.eval(x);
        values.push_back(sf.y * sg.dy - sf.dy * sg.y);
        scale = std::max(scale, abs_of(sf.y) * abs_of(sg.dy) + abs_of(sf.dy) * abs_of(sg.y));
    }
    double spread = 0.0;
    for (const S& w : values) spread = std::max(spread, abs_of(S(w - values.front())));
    return spread / scale;
}

// The basis pair at a fixed lambda together with the side Wronskians
// w- = W[phi-, psi-], w+ = W[phi+, psi+] and the characteristic function
//
//   omega(lambda) := d34 * w+(lambda)  ( = d12 * w-(lambda) ),
//
// whose zeros are exactly the eigenvalues. consistency_defect measures how
// well the two expressions agree relative to omega_scale, a cancellation-free
// magnitude estimate used for all |omega| thresholds.
template <Scalar S>
struct BasisAtLambda {
    S lambda{};
    Branch<S> phi_left, phi_right, psi_left, psi_right;
    S w_minus{}, w_plus{};
    S omega{};
    double consistency_defect = 0.0;
    double omega_scale = 1.0;
};

template <Scalar S>
BasisAtLambda<S> char_fn(const Problem& p, S lambda, const Tolerances& tol = {}) {
    require(p.validated, errc::invalid_argument, "char_fn needs a validated problem");
    BasisAtLambda<S> basis;
    basis.lambda = lambda;
    auto [pl, pr] = build_phi(p, lambda, tol);
    auto [ql, qr] = build_psi(p, lambda, tol);
    basis.phi_left = std::move(pl);
    basis.phi_right = std::move(pr);
    basis.psi_left = std::move(ql);
    basis.psi_right = std::move(qr);

    // Wronskians at the side midpoints (constancy makes the spot immaterial,
    // midpoints stay clear of endpoint interpolation).
    const double m_left = 0.5 * (p.interval.a + p.interval.c);
    const double m_right = 0.5 * (p.interval.c + p.interval.b);
    basis.w_minus = wronskian_at(basis.phi_left, basis.psi_left, m_left);
    basis.w_plus = wronskian_at(basis.phi_right, basis.psi_right, m_right);

    const S left_pairing = p.minors.d12 * basis.w_minus;
    const S right_pairing = p.minors.d34 * basis.w_plus;
    basis.omega = right_pairing;

    auto magnitude = [](const State<S>& f, const State<S>& g) {
        return abs_of(f.y) * abs_of(g.dy) + abs_of(f.dy) * abs_of(g.y);
    };
    const double scale_left =
        p.minors.d12 * magnitude(basis.phi_left.eval(m_left), basis.psi_left.eval(m_left));
    const double scale_right =
        p.minors.d34 * magnitude(basis.phi_right.eval(m_right), basis.psi_right.eval(m_right));
    basis.omega_scale = std::max({scale_left, scale_right, 1e-300});

    basis.consistency_defect =
        abs_of(S(right_pairing - left_pairing)) /
        std::max({abs_of(right_pairing), abs_of(left_pairing), basis.omega_scale});
    return basis;
}

// Real characteristic value only; the workhorse of the eigenvalue scan.
inline double omega_value(const Problem& p, double lambda, const Tolerances& tol = {}) {
    return char_fn<double>(p, lambda, tol).omega;
}

} // namespace slgreen

#endif
