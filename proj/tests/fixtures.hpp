#ifndef SLGREEN_TESTS_FIXTURES_HPP
#define SLGREEN_TESTS_FIXTURES_HPP

#include <random>

#include "slgreen/hilbert.hpp"
#include "slgreen/problem.hpp"

namespace fixtures {

// P0: [0,1) u (1,2], q = 0, Dirichlet at 0, tau2(y) = y(2) + lambda y'(2),
// identity coupling at 1. All weights equal 1.
inline slgreen::Problem make_p0() {
    slgreen::Problem p;
    p.interval = {0.0, 1.0, 2.0};
    p.potential.left_coeffs = {0.0};
    p.potential.right_coeffs = {0.0};
    p.left = {1.0, 0.0};
    p.right = {1.0, 0.0, 0.0, -1.0};
    p.transmission.row1 = {1.0, 0.0, -1.0, 0.0};
    p.transmission.row2 = {0.0, 1.0, 0.0, -1.0};
    return slgreen::validate_problem(p);
}

// P1: as P0 but y(c+) = 2 y(c-), y'(c+) = y'(c-) / 2.
inline slgreen::Problem make_p1() {
    slgreen::Problem p = make_p0();
    p.transmission.row1 = {2.0, 0.0, -1.0, 0.0};
    p.transmission.row2 = {0.0, 1.0, 0.0, -2.0};
    return slgreen::validate_problem(p);
}

// A wider single-piece-friendly fixture whose left side is [0, 2]: room for
// closed-form integrator checks on [0, pi/2] and [0, 2].
inline slgreen::Problem make_wide() {
    slgreen::Problem p = make_p0();
    p.interval = {0.0, 2.0, 3.0};
    return slgreen::validate_problem(p);
}

inline double uniform(std::mt19937& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng()) / 4294967296.0);
}

inline slgreen::Problem random_admissible_problem(std::mt19937& rng, bool zero_potential = false) {
    slgreen::Problem p;
    p.interval.a = uniform(rng, -2.0, -0.5);
    p.interval.c = uniform(rng, -0.3, 0.5);
    p.interval.b = uniform(rng, 1.0, 2.2);

    if (zero_potential) {
        p.potential.left_coeffs = {0.0};
        p.potential.right_coeffs = {0.0};
    } else {
        p.potential.left_coeffs = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0),
                                   uniform(rng, -0.5, 0.5)};
        p.potential.right_coeffs = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0),
                                    uniform(rng, -0.5, 0.5)};
    }

    do {
        p.left.alpha10 = uniform(rng, -2.0, 2.0);
        p.left.alpha11 = uniform(rng, -2.0, 2.0);
    } while (std::max(std::fabs(p.left.alpha10), std::fabs(p.left.alpha11)) < 0.3);

    for (;;) {
        p.right.alpha20 = uniform(rng, -2.0, 2.0);
        p.right.alpha21 = uniform(rng, -2.0, 2.0);
        p.right.alpha20p = uniform(rng, -2.0, 2.0);
        p.right.alpha21p = uniform(rng, -2.0, 2.0);
        double d0 = p.right.delta0();
        if (std::fabs(d0) < 0.15) continue;
        if (d0 < 0.0) {
            p.right.alpha20p = -p.right.alpha20p;
            p.right.alpha21p = -p.right.alpha21p;
        }
        break;
    }

    for (;;) {
        for (auto& v : p.transmission.row1) v = uniform(rng, -2.0, 2.0);
        for (auto& v : p.transmission.row2) v = uniform(rng, -2.0, 2.0);
        const slgreen::Minors m = slgreen::compute_minors(p.transmission);
        if (m.d12 > 0.25 && m.d34 > 0.25) break;
        if (m.d12 < -0.25 && m.d34 < -0.25) {
            for (auto& v : p.transmission.row2) v = -v;
            break;
        }
    }
    return slgreen::validate_problem(p);
}

inline slgreen::Polynomial random_polynomial(std::mt19937& rng, int degree) {
    std::vector<double> c(static_cast<size_t>(degree) + 1);
    for (auto& v : c) v = uniform(rng, -1.0, 1.0);
    return slgreen::Polynomial(c);
}

inline slgreen::DomainElement random_domain_element(const slgreen::Problem& p, std::mt19937& rng,
                                                    int degree = 5) {
    return slgreen::make_domain_element(p, random_polynomial(rng, degree),
                                        random_polynomial(rng, degree));
}

} // namespace fixtures

#endif
