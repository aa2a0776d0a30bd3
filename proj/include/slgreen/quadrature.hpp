#ifndef SLGREEN_QUADRATURE_HPP
#define SLGREEN_QUADRATURE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "slgreen/errors.hpp"
#include "slgreen/scalar.hpp"

namespace slgreen {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule, exact for polynomial degree <= 2n-1.
// Nodes are computed once by Newton iteration on P_n and cached.
const GaussRule& gauss_legendre(int n);

template <typename F>
auto integrate_gl(F&& f, double lo, double hi, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    using R = decltype(f(mid));
    R sum{};
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return R(half * sum);
}

namespace detail {

template <typename F, typename R>
void integrate_adaptive_rec(F& f, double lo, double hi, double abs_tol, int depth, R& total) {
    const R coarse = integrate_gl(f, lo, hi, 10);
    const R fine = integrate_gl(f, lo, hi, 20);
    const double err = abs_of(R(fine - coarse));
    if (err <= abs_tol || hi - lo <= 1e-14 * (1.0 + std::fabs(lo) + std::fabs(hi))) {
        total += fine;
        return;
    }
    if (depth >= 48)
        fail(errc::quadrature_failure, "adaptive quadrature did not converge on [" +
                                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
    const double mid = 0.5 * (lo + hi);
    integrate_adaptive_rec(f, lo, mid, 0.5 * abs_tol, depth + 1, total);
    integrate_adaptive_rec(f, mid, hi, 0.5 * abs_tol, depth + 1, total);
}

} // namespace detail

// Globally adaptive quadrature with a Gauss 10/20 error estimate; abs_tol is
// an absolute error budget for the whole interval.
template <typename F>
auto integrate_adaptive(F&& f, double lo, double hi, double abs_tol) {
    using R = decltype(f(lo));
    R total{};
    if (lo == hi) return total;
    require(lo < hi, errc::invalid_argument, "integrate_adaptive needs lo <= hi");
    detail::integrate_adaptive_rec(f, lo, hi, abs_tol, 0, total);
    return total;
}

} // namespace slgreen

#endif
