#include "slgreen/check.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "slgreen/config.hpp"
#include "slgreen/hilbert.hpp"

namespace slgreen {

namespace {

double uniform(std::mt19937& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng()) / 4294967296.0);
}

struct Reporter {
    std::ostream& out;
    int failures = 0;

    void line(const std::string& name, double value, double bound) {
        const bool ok = value <= bound;
        if (!ok) ++failures;
        out << (ok ? "ok   " : "FAIL ") << name << ": " << fmt_double(value)
            << (ok ? " <= " : " > ") << fmt_double(bound) << "\n";
    }

    void note(const std::string& text) { out << "note " << text << "\n"; }
};

double tau_scale(const State<double>& s) {
    return std::max({std::fabs(s.y), std::fabs(s.dy), 1.0});
}

// a real lambda that is comfortably far from any zero of omega
double pick_regular_lambda(const Problem& p, const Tolerances& tol, double lo, double hi) {
    double best_lambda = lo;
    double best_ratio = -1.0;
    for (int i = 0; i < 17; ++i) {
        const double lambda = lo + (hi - lo) * (i + 0.37) / 17.0;
        const auto basis = char_fn<double>(p, lambda, tol);
        const double ratio = std::fabs(basis.omega) / basis.omega_scale;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best_lambda = lambda;
        }
    }
    return best_lambda;
}

} // namespace

int run_check(const Problem& p, const CheckOptions& opts, std::ostream& out) {
    Reporter rep{out};
    std::mt19937 rng(opts.seed);
    const double a = p.interval.a, c = p.interval.c, b = p.interval.b;

    // tau residuals of phi and psi, Wronskian constancy and the jump identity
    // over a sweep of lambda values
    {
        double worst_tau = 0.0, worst_spread = 0.0, worst_jump = 0.0;
        for (int i = 0; i < 12; ++i) {
            const double lambda =
                opts.lambda_min + (opts.lambda_max - opts.lambda_min) * (i + 0.31) / 12.0;
            const auto basis = char_fn<double>(p, lambda, opts.tol);

            const State<double> phi_a = basis.phi_left.eval(a);
            const State<double> phi_cm = basis.phi_left.eval(c);
            const State<double> phi_cp = basis.phi_right.eval(c);
            const State<double> psi_b = basis.psi_right.eval(b);
            const State<double> psi_cm = basis.psi_left.eval(c);
            const State<double> psi_cp = basis.psi_right.eval(c);
            worst_tau = std::max(worst_tau,
                                 std::fabs(tau1(p, phi_a)) / tau_scale(phi_a));
            worst_tau = std::max(worst_tau, std::fabs(tau3(p, phi_cm, phi_cp)) /
                                                std::max(tau_scale(phi_cm), tau_scale(phi_cp)));
            worst_tau = std::max(worst_tau, std::fabs(tau4(p, phi_cm, phi_cp)) /
                                                std::max(tau_scale(phi_cm), tau_scale(phi_cp)));
            worst_tau = std::max(worst_tau,
                                 std::fabs(tau2(p, lambda, psi_b)) / tau_scale(psi_b));
            worst_tau = std::max(worst_tau, std::fabs(tau3(p, psi_cm, psi_cp)) /
                                                std::max(tau_scale(psi_cm), tau_scale(psi_cp)));
            worst_tau = std::max(worst_tau, std::fabs(tau4(p, psi_cm, psi_cp)) /
                                                std::max(tau_scale(psi_cm), tau_scale(psi_cp)));

            worst_spread = std::max(
                {worst_spread, wronskian_constancy_defect(basis.phi_left, basis.psi_left, a, c),
                 wronskian_constancy_defect(basis.phi_right, basis.psi_right, c, b)});
            worst_jump = std::max(worst_jump, basis.consistency_defect);
        }
        rep.line("transmission tau residuals (relative)", worst_tau, 1e-9);
        rep.line("wronskian constancy spread", worst_spread, 1e-8);
        rep.line("jump identity d12 w- = d34 w+ (relative)", worst_jump, 1e-8);
    }

    // Green's function symmetry at a regular lambda
    {
        const double lambda = pick_regular_lambda(p, opts.tol, opts.lambda_min, opts.lambda_max);
        const auto basis = char_fn<double>(p, lambda, opts.tol);
        double worst = 0.0;
        for (int k = 0; k < 500; ++k) {
            double x = uniform(rng, a, b);
            double y = uniform(rng, a, b);
            if (std::fabs(x - c) < 1e-6 * (b - a)) x = c + 2e-6 * (b - a);
            if (std::fabs(y - c) < 1e-6 * (b - a)) y = c - 2e-6 * (b - a);
            const double g1 = green_eval(p, basis, x, y);
            const double g2 = green_eval(p, basis, y, x);
            worst = std::max(worst, std::fabs(g1 - g2) / std::max(std::fabs(g1), 1e-300));
        }
        rep.line("green symmetry (relative, 500 pairs)", worst, 1e-10);
    }

    if (p.delta0() <= 0.0) {
        rep.note("delta0 = 0: resolvent, symmetry and orthogonality checks skipped");
        return rep.failures;
    }

    // resolvent residuals for random polynomial right-hand sides
    {
        double worst_ode = 0.0, worst_tau = 0.0;
        for (int k = 0; k < 5; ++k) {
            std::vector<double> cl(3), cr(3);
            for (auto& v : cl) v = uniform(rng, -1.0, 1.0);
            for (auto& v : cr) v = uniform(rng, -1.0, 1.0);
            PolyElement f{Polynomial(cl), Polynomial(cr), uniform(rng, -1.0, 1.0)};
            const double lambda =
                pick_regular_lambda(p, opts.tol, opts.lambda_min + k, opts.lambda_max - k);
            const auto basis = char_fn<double>(p, lambda, opts.tol);
            const H1Element<double> rhs = to_h1(f);
            const H1Element<double> y = resolvent_apply(p, basis, rhs);
            const ResidualReport r = residual_report(p, lambda, y, rhs);
            worst_ode = std::max(worst_ode, r.ode_residual / r.ode_scale);
            worst_tau = std::max({worst_tau, r.tau1_res / r.tau_scale, r.tau3_res / r.tau_scale,
                                  r.tau4_res / r.tau_scale, r.tau2_defect / r.tau_scale,
                                  r.second_defect / r.tau_scale});
        }
        rep.line("resolvent ODE residual (relative)", worst_ode, 1e-6);
        rep.line("resolvent tau residuals (relative)", worst_tau, 1e-8);
    }

    // symmetry of A on random domain elements
    {
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            std::vector<double> cl(5), cr(5);
            for (auto& v : cl) v = uniform(rng, -1.0, 1.0);
            for (auto& v : cr) v = uniform(rng, -1.0, 1.0);
            std::vector<double> dl(5), dr(5);
            for (auto& v : dl) v = uniform(rng, -1.0, 1.0);
            for (auto& v : dr) v = uniform(rng, -1.0, 1.0);
            const DomainElement f = make_domain_element(p, Polynomial(cl), Polynomial(cr));
            const DomainElement g = make_domain_element(p, Polynomial(dl), Polynomial(dr));
            const PolyElement af = apply_A(p, f);
            const PolyElement ag = apply_A(p, g);
            const double scale = h1_norm(p, af) * h1_norm(p, g) + h1_norm(p, f) * h1_norm(p, ag);
            worst = std::max(worst, symmetry_defect(p, f, g) / std::max(scale, 1e-300));
        }
        rep.line("operator symmetry defect (relative)", worst, 1e-10);
    }

    // orthogonality of the first eigenpairs
    {
        const std::vector<double> eigs =
            eigenvalues_in(p, opts.lambda_min, opts.lambda_max, opts.tol, opts.tol_lambda);
        if (eigs.size() < 2) {
            rep.note("fewer than two eigenvalues in range; orthogonality check skipped");
        } else {
            const size_t count = std::min<size_t>(eigs.size(), 5);
            std::vector<Eigenpair> pairs;
            for (size_t i = 0; i < count; ++i)
                pairs.push_back(eigenfunction(p, eigs[i], opts.tol));
            double worst = 0.0;
            for (size_t i = 0; i < count; ++i)
                for (size_t j = i + 1; j < count; ++j)
                    worst = std::max(worst, orthogonality_defect(p, pairs[i], pairs[j]));
            rep.line("eigenfunction orthogonality defect", worst, 1e-8);
            double worst_norm = 0.0;
            for (const auto& pr : pairs)
                worst_norm = std::max(worst_norm,
                                      std::fabs(orthogonality_defect(p, pr, pr) - 1.0));
            rep.line("eigenfunction normalization |<u,u>-1|", worst_norm, 1e-10);
        }
    }

    return rep.failures;
}

} // namespace slgreen
