#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "slgreen/hilbert.hpp"

using namespace slgreen;
using Cplx = std::complex<double>;

namespace {

H1Element<Cplx> lambda_minus_a(const Problem& p, const DomainElement& f, Cplx lambda) {
    const PolyElement af = apply_A(p, f);
    H1Element<Cplx> out;
    out.left = [fl = f.left, al = af.left, lambda](double x) {
        const State<double> v = fl.eval(x);
        const State<double> w = al.eval(x);
        return State<Cplx>{lambda * v.y - w.y, lambda * v.dy - w.dy};
    };
    out.right = [fr = f.right, ar = af.right, lambda](double x) {
        const State<double> v = fr.eval(x);
        const State<double> w = ar.eval(x);
        return State<Cplx>{lambda * v.y - w.y, lambda * v.dy - w.dy};
    };
    out.f1 = lambda * f.f1 - af.f1;
    return out;
}

template <Scalar S>
H1Element<S> difference(const H1Element<S>& a, const H1Element<S>& b) {
    H1Element<S> out;
    out.left = [la = a.left, lb = b.left](double x) {
        const State<S> u = la(x), v = lb(x);
        return State<S>{u.y - v.y, u.dy - v.dy};
    };
    out.right = [ra = a.right, rb = b.right](double x) {
        const State<S> u = ra(x), v = rb(x);
        return State<S>{u.y - v.y, u.dy - v.dy};
    };
    out.f1 = a.f1 - b.f1;
    return out;
}

} // namespace

TEST_CASE("Green's function point values and guards") {
    const Problem p0 = fixtures::make_p0();
    const auto basis = char_fn<double>(p0, 0.0);

    SUBCASE("closed-form spot value") {
        CHECK(green_eval(p0, basis, 1.5, 0.5) == doctest::Approx(-0.125).epsilon(1e-9));
    }
    SUBCASE("symmetric in its arguments") {
        CHECK(green_eval(p0, basis, 0.5, 1.5) == green_eval(p0, basis, 1.5, 0.5));
    }
    SUBCASE("pole at an eigenvalue") {
        const double lambda1 = oracle::p0_positive_roots(1).front();
        const auto singular = char_fn<double>(p0, lambda1);
        try {
            (void)green_eval(p0, singular, 1.5, 0.5);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == errc::at_eigenvalue);
        }
    }
    SUBCASE("undefined on the interface lines") {
        try {
            (void)green_eval(p0, basis, 1.0, 0.5);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == errc::at_interior_point);
        }
    }
}

TEST_CASE("Green symmetry over random pairs") {
    std::mt19937 rng(17);
    const Problem problems[] = {fixtures::make_p0(), fixtures::make_p1()};
    for (const Problem& p : problems) {
        const auto basis = char_fn<double>(p, 0.31);
        double worst = 0.0;
        for (int k = 0; k < 250; ++k) {
            double x = fixtures::uniform(rng, p.interval.a, p.interval.b);
            double y = fixtures::uniform(rng, p.interval.a, p.interval.b);
            if (std::fabs(x - p.interval.c) < 1e-6) x += 1e-4;
            if (std::fabs(y - p.interval.c) < 1e-6) y -= 1e-4;
            const double g1 = green_eval(p, basis, x, y);
            const double g2 = green_eval(p, basis, y, x);
            worst = std::max(worst, std::fabs(g1 - g2) / std::max(std::fabs(g1), 1e-300));
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("nonhomogeneous solve") {
    const Problem p0 = fixtures::make_p0();
    const auto basis = char_fn<double>(p0, 0.0);

    SUBCASE("zero right-hand side gives the zero element") {
        const SideFn<double> zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
        const H1Element<double> y = solve_nonhomogeneous(p0, basis, zero);
        for (double x : {0.0, 0.4, 0.999, 1.001, 1.7, 2.0}) {
            const State<double> s = x <= 1.0 ? y.left(std::min(x, 1.0)) : y.right(x);
            CHECK(s.y == 0.0);
            CHECK(s.dy == 0.0);
        }
        CHECK(y.f1 == 0.0);
    }
    SUBCASE("f = 1 at lambda = 0 reproduces x^2/2 - x") {
        const SideFn<double> one{[](double) { return 1.0; }, [](double) { return 1.0; }};
        const H1Element<double> y = solve_nonhomogeneous(p0, basis, one);
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double x = 2.0 * i / 100.0;
            const double expect = 0.5 * x * x - x;
            const State<double> s = x <= 1.0 ? y.left(std::min(x, 1.0)) : y.right(x);
            worst = std::max(worst, std::fabs(s.y - expect));
        }
        CHECK(worst <= 1e-8);
        CHECK(y.left(1.0).y == doctest::Approx(-0.5).epsilon(1e-9));
    }
    SUBCASE("kernel quadrature with the d12/d34 weights reproduces the solve") {
        std::mt19937 rng(31);
        const Problem problems[] = {fixtures::make_p0(), fixtures::make_p1(),
                                    fixtures::random_admissible_problem(rng)};
        for (const Problem& p : problems) {
            const auto b = char_fn<double>(p, 0.27);
            auto f = [](double t) { return 1.0 + 0.3 * t; };
            const H1Element<double> y = solve_nonhomogeneous(p, b, SideFn<double>{f, f});
            for (double frac : {0.23, 0.61, 0.86}) {
                const double x = p.interval.a + (p.interval.b - p.interval.a) * frac;
                const double direct =
                    (x <= p.interval.c ? y.left(std::min(x, p.interval.c)) : y.right(x)).y;
                auto kern = [&](double t) { return green_eval(p, b, x, t) * f(t); };
                const double via_kernel =
                    p.minors.d12 * integrate_adaptive(kern, p.interval.a, p.interval.c, 1e-11) +
                    p.minors.d34 * integrate_adaptive(kern, p.interval.c, p.interval.b, 1e-11);
                CHECK(std::fabs(direct - via_kernel) <= 1e-8 * std::max(1.0, std::fabs(direct)));
            }
        }
    }
}

TEST_CASE("resolvent on the boundary datum") {
    const Problem p0 = fixtures::make_p0();
    const auto basis = char_fn<double>(p0, 0.0);

    SUBCASE("F = (0, 1) at lambda = 0 gives x/2") {
        H1Element<double> rhs = zero_element<double>();
        rhs.f1 = 1.0;
        const H1Element<double> y = resolvent_apply(p0, basis, rhs);
        for (double x : {0.25, 0.75, 1.25, 2.0}) {
            const State<double> s = x <= 1.0 ? y.left(x) : y.right(x);
            CHECK(s.y == doctest::Approx(0.5 * x).epsilon(1e-9));
            CHECK(s.dy == doctest::Approx(0.5).epsilon(1e-9));
        }
        CHECK(y.f1 == doctest::Approx(0.5).epsilon(1e-9));
        // tau2(Y) = T_b(Y) + lambda T'_b(Y) must equal +f1
        const State<double> at_b = y.right(2.0);
        CHECK(tau2(p0, 0.0, at_b) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("zero datum maps to zero") {
        const H1Element<double> y = resolvent_apply(p0, basis, zero_element<double>());
        CHECK(y.left(0.5).y == 0.0);
        CHECK(y.right(1.5).y == 0.0);
        CHECK(y.f1 == 0.0);
    }
    SUBCASE("norm bound at lambda = i") {
        const auto basis_i = char_fn<Cplx>(p0, Cplx(0.0, 1.0));
        H1Element<Cplx> rhs = to_h1_complex(PolyElement{Polynomial({1.0}), Polynomial({1.0}), 0.0});
        const H1Element<Cplx> y = resolvent_apply(p0, basis_i, rhs);
        const double norm_y = h1_norm(p0, y);
        const double norm_f = h1_norm(p0, rhs);
        CHECK(norm_y <= norm_f * (1.0 + 1e-6));
    }
}

TEST_CASE("resolvent identity on domain elements") {
    const Problem p0 = fixtures::make_p0();
    std::mt19937 rng(8);
    const Cplx shifts[] = {Cplx(0.0, 1.0), Cplx(1.0, 1.0), Cplx(2.0, -0.5)};
    for (int k = 0; k < 4; ++k) {
        const DomainElement f = fixtures::random_domain_element(p0, rng);
        for (const Cplx lambda : shifts) {
            const auto basis = char_fn<Cplx>(p0, lambda);
            const H1Element<Cplx> rhs = lambda_minus_a(p0, f, lambda);
            const H1Element<Cplx> y = resolvent_apply(p0, basis, rhs);
            const double defect = h1_norm(p0, difference(y, to_h1_complex(f)));
            CHECK(defect <= 1e-6);
        }
    }
}

TEST_CASE("residual report") {
    const Problem p0 = fixtures::make_p0();
    const auto basis = char_fn<double>(p0, 0.0);

    SUBCASE("the exact boundary-datum solution is clean") {
        H1Element<double> rhs = zero_element<double>();
        rhs.f1 = 1.0;
        const H1Element<double> y = resolvent_apply(p0, basis, rhs);
        const ResidualReport r = residual_report(p0, 0.0, y, rhs);
        CHECK(r.ode_residual <= 1e-6);
        CHECK(r.tau1_res <= 1e-6);
        CHECK(r.tau3_res <= 1e-6);
        CHECK(r.tau4_res <= 1e-6);
        CHECK(r.tau2_defect <= 1e-6);
        CHECK(r.second_defect <= 1e-6);
    }
    SUBCASE("a quadratic perturbation shows up as an ODE residual of 0.2") {
        H1Element<double> rhs = zero_element<double>();
        rhs.f1 = 1.0;
        H1Element<double> y;
        y.left = [](double x) { return State<double>{0.5 * x + 0.1 * x * x, 0.5 + 0.2 * x}; };
        y.right = y.left;
        y.f1 = 0.5;
        const ResidualReport r = residual_report(p0, 0.0, y, rhs);
        CHECK(r.ode_residual == doctest::Approx(0.2).epsilon(0.02));
    }
    SUBCASE("the zero solution of the zero problem reports zeros") {
        const H1Element<double> zero = zero_element<double>();
        const ResidualReport r = residual_report(p0, 0.0, zero, zero);
        CHECK(r.ode_residual == 0.0);
        CHECK(r.tau1_res == 0.0);
        CHECK(r.tau2_defect == 0.0);
        CHECK(r.second_defect == 0.0);
    }
}

TEST_CASE("Green's vector reproduces the resolvent through the inner product") {
    const Problem problems[] = {fixtures::make_p0(), fixtures::make_p1()};
    for (const Problem& p : problems) {
        const auto basis = char_fn<double>(p, 0.41);
        const PolyElement f{Polynomial({0.3, -0.2, 0.5}), Polynomial({-0.1, 0.4}), 0.7};
        const H1Element<double> rhs = to_h1(f);
        const H1Element<double> y = resolvent_apply(p, basis, rhs);
        for (double frac : {0.2, 0.7}) {
            const double x = p.interval.a + (p.interval.b - p.interval.a) * frac;
            const GreenVector<double> g = green_vector(p, basis, x);
            auto left = [&](double t) { return g.kernel(t) * f.left.eval(t).y; };
            auto right = [&](double t) { return g.kernel(t) * f.right.eval(t).y; };
            const double paired =
                p.minors.d12 * integrate_adaptive(left, p.interval.a, p.interval.c, 1e-11) +
                p.minors.d34 * integrate_adaptive(right, p.interval.c, p.interval.b, 1e-11) +
                (p.minors.d34 / p.delta0()) * g.boundary * f.f1;
            const double direct =
                (x <= p.interval.c ? y.left(std::min(x, p.interval.c)) : y.right(x)).y;
            CHECK(std::fabs(paired - direct) <= 1e-8 * std::max(1.0, std::fabs(direct)));
        }
    }
}
