#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "slgreen/hilbert.hpp"
#include "slgreen/spectrum.hpp"

using namespace slgreen;

TEST_CASE("bracket scan on P0") {
    const Problem p0 = fixtures::make_p0();

    SUBCASE("positive range brackets exactly the oracle roots") {
        const ScanResult scan = scan_brackets(p0, 0.0, 10.0);
        const std::vector<double> roots = oracle::roots_q0(p0, 1e-6, 10.0);
        REQUIRE(scan.brackets.size() == roots.size());
        for (size_t i = 0; i < roots.size(); ++i) {
            CHECK(scan.brackets[i].lo <= roots[i]);
            CHECK(roots[i] <= scan.brackets[i].hi);
        }
        CHECK(scan.suspicious.empty());
    }
    SUBCASE("the negative axis carries one eigenvalue") {
        // the closed form tanh(2 mu) = mu^3 has a root near mu = 0.987, so a
        // sign change must appear in [-5, -0.01]
        const double neg = oracle::p0_negative_root();
        const ScanResult scan = scan_brackets(p0, -5.0, -0.01);
        REQUIRE(scan.brackets.size() == 1);
        CHECK(scan.brackets[0].lo <= neg);
        CHECK(neg <= scan.brackets[0].hi);
        const double refined = refine_eigenvalue(p0, scan.brackets[0]);
        CHECK(std::fabs(refined - neg) <= 1e-8 * std::max(1.0, std::fabs(neg)));
    }
    SUBCASE("degenerate range is rejected") {
        CHECK_THROWS_AS((void)scan_brackets(p0, 3.0, 3.0), Error);
        CHECK_THROWS_AS((void)scan_brackets(p0, 5.0, 2.0), Error);
    }
}

TEST_CASE("bracket refinement") {
    const Problem p0 = fixtures::make_p0();
    const double lambda1 = oracle::p0_positive_roots(1).front();

    SUBCASE("converges to the oracle root") {
        const ScanResult scan = scan_brackets(p0, 0.5, 3.0);
        REQUIRE(scan.brackets.size() == 1);
        const double refined = refine_eigenvalue(p0, scan.brackets[0]);
        CHECK(std::fabs(refined - lambda1) <= 1e-8 * std::max(1.0, lambda1));
    }
    SUBCASE("rejects a bracket without a sign change") {
        try {
            (void)refine_eigenvalue(p0, Bracket{2.0, 3.0, 1.0, 2.0});
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == errc::not_a_bracket);
        }
    }
    SUBCASE("an exact zero at the edge is returned as-is") {
        CHECK(refine_eigenvalue(p0, Bracket{2.0, 3.0, 0.0, 2.0}) == 2.0);
        CHECK(refine_eigenvalue(p0, Bracket{2.0, 3.0, -1.0, 0.0}) == 3.0);
    }
}

TEST_CASE("eigenvalue lists against the closed-form oracles") {
    const Problem p0 = fixtures::make_p0();
    const Problem p1 = fixtures::make_p1();

    SUBCASE("P0 in [0, 30]") {
        const std::vector<double> got = eigenvalues_in(p0, 0.0, 30.0);
        const std::vector<double> expect = oracle::roots_q0(p0, 1e-9, 30.0);
        REQUIRE(got.size() == expect.size());
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(std::fabs(got[i] - expect[i]) <= 1e-8 * std::max(1.0, std::fabs(expect[i])));
    }
    SUBCASE("P1 in [0, 30] matches the hand-derived coupling closed form") {
        const std::vector<double> got = eigenvalues_in(p1, 0.0, 30.0);
        std::vector<double> expect;
        for (double r : oracle::p1_positive_roots(8))
            if (r <= 30.0) expect.push_back(r);
        REQUIRE(got.size() == expect.size());
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(std::fabs(got[i] - expect[i]) <= 1e-8 * std::max(1.0, std::fabs(expect[i])));
    }
    SUBCASE("a gap between eigenvalues is empty") {
        const auto roots = oracle::p0_positive_roots(2);
        const double lo = roots[0] + 0.25 * (roots[1] - roots[0]);
        const double hi = roots[0] + 0.75 * (roots[1] - roots[0]);
        CHECK(eigenvalues_in(p0, lo, hi).empty());
    }
}

TEST_CASE("oracle agreement over randomized zero-potential problems") {
    std::mt19937 rng(2024);
    int problems_done = 0;
    while (problems_done < 20) {
        const Problem p = fixtures::random_admissible_problem(rng, /*zero_potential=*/true);
        const std::vector<double> expect = oracle::roots_q0(p, 1e-9, 100.0);
        const std::vector<double> got = eigenvalues_in(p, 1e-9, 100.0);
        REQUIRE(got.size() == expect.size());
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(std::fabs(got[i] - expect[i]) <= 1e-8 * std::max(1.0, std::fabs(expect[i])));
        ++problems_done;
    }
}

TEST_CASE("eigenfunctions") {
    const Problem p0 = fixtures::make_p0();
    const double lambda1 = oracle::p0_positive_roots(1).front();

    SUBCASE("first eigenfunction of P0 is a positive multiple of sin(s x)") {
        const Eigenpair pair = eigenfunction(p0, lambda1);
        const double s = std::sqrt(lambda1);
        CHECK(std::fabs(pair.u_left.eval(0.0).y) < 1e-10);
        // fix the multiple at one point, then compare across the interval
        const double k = pair.u_left.eval(0.5).y / std::sin(s * 0.5);
        CHECK(k > 0.0);
        for (double x : {0.2, 0.8, 1.3, 1.9})
            CHECK((x < 1.0 ? pair.u_left : pair.u_right).eval(x).y ==
                  doctest::Approx(k * std::sin(s * x)).epsilon(1e-8));
    }
    SUBCASE("H1 normalization") {
        const Eigenpair pair = eigenfunction(p0, lambda1);
        CHECK(std::fabs(orthogonality_defect(p0, pair, pair) - 1.0) <= 1e-10);
    }
    SUBCASE("a regular point is rejected") {
        try {
            (void)eigenfunction(p0, 1.0);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == errc::not_an_eigenvalue);
        }
    }
}

TEST_CASE("interlacing of the P0 roots in the s variable") {
    const std::vector<double> roots = oracle::p0_positive_roots(10);
    for (size_t i = 0; i + 1 < roots.size(); ++i) {
        const double ds = std::sqrt(roots[i + 1]) - std::sqrt(roots[i]);
        CHECK(ds > std::numbers::pi / 4.0);
        CHECK(ds < std::numbers::pi);
    }
}

TEST_CASE("no nonreal zeros inside the spectral rectangle") {
    const Problem p0 = fixtures::make_p0();
    const Problem p1 = fixtures::make_p1();
    CHECK(winding_number(p0, 0.0, 50.0, 0.1, 5.0) == 0);
    CHECK(winding_number(p1, 0.0, 50.0, 0.1, 5.0) == 0);
}

TEST_CASE("row scaling leaves the spectrum untouched") {
    const Problem base = fixtures::make_p1();
    Problem scaled = base;
    for (auto& v : scaled.transmission.row1) v *= 3.0;
    for (auto& v : scaled.transmission.row2) v *= 0.5;
    const Problem q = validate_problem(scaled);

    const std::vector<double> e1 = eigenvalues_in(base, 0.0, 30.0);
    const std::vector<double> e2 = eigenvalues_in(q, 0.0, 30.0);
    REQUIRE(e1.size() == e2.size());
    for (size_t i = 0; i < e1.size(); ++i) CHECK(std::fabs(e1[i] - e2[i]) <= 1e-9);
}

TEST_CASE("golden-section dip refinement finds interior minima") {
    const Problem p0 = fixtures::make_p0();
    const double lambda1 = oracle::p0_positive_roots(1).front();
    const OmegaSample m = minimize_abs_omega(p0, lambda1 - 0.4, lambda1 + 0.5);
    CHECK(std::fabs(m.lambda - lambda1) <= 1e-6);
}
