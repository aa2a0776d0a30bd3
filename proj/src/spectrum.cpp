#include "slgreen/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <exception>
#include <numbers>

namespace slgreen {

namespace {

double s_of_lambda(double lambda) {
    return lambda >= 0.0 ? std::sqrt(lambda) : -std::sqrt(-lambda);
}

double lambda_of_s(double s) { return s >= 0.0 ? s * s : -(s * s); }

OmegaSample sample_omega(const Problem& p, double lambda, const Tolerances& tol) {
    const BasisAtLambda<double> basis = char_fn<double>(p, lambda, tol);
    return {lambda, basis.omega, basis.omega_scale};
}

} // namespace

std::vector<OmegaSample> omega_on_grid(const Problem& p, std::span<const double> lambdas,
                                       const Tolerances& tol, Exec exec) {
    std::vector<OmegaSample> out(lambdas.size());
    if (exec == Exec::parallel) {
        std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < static_cast<long>(lambdas.size()); ++i) {
            try {
                out[static_cast<size_t>(i)] = sample_omega(p, lambdas[static_cast<size_t>(i)], tol);
            } catch (...) {
#pragma omp critical(slgreen_omega_grid_error)
                if (!first_error) first_error = std::current_exception();
            }
        }
        if (first_error) std::rethrow_exception(first_error);
    } else {
        for (size_t i = 0; i < lambdas.size(); ++i) out[i] = sample_omega(p, lambdas[i], tol);
    }
    return out;
}

ScanResult scan_brackets(const Problem& p, double lmin, double lmax, const Tolerances& tol,
                         Exec exec) {
    require(lmin < lmax, errc::bad_range,
            "need lmin < lmax, got [" + std::to_string(lmin) + ", " + std::to_string(lmax) + "]");
    require(p.validated, errc::invalid_argument, "scan_brackets needs a validated problem");

    const double width = p.interval.b - p.interval.a;
    const double s_lo = s_of_lambda(lmin);
    const double s_hi = s_of_lambda(lmax);
    const double target_step = std::numbers::pi / (4.0 * width);
    const long n = std::max<long>(1, static_cast<long>(std::ceil((s_hi - s_lo) / target_step)));
    const double step = (s_hi - s_lo) / static_cast<double>(n);

    std::vector<double> lambdas(static_cast<size_t>(n) + 1);
    for (long i = 0; i <= n; ++i)
        lambdas[static_cast<size_t>(i)] = lambda_of_s(s_lo + step * static_cast<double>(i));
    lambdas.front() = lmin;
    lambdas.back() = lmax;

    std::vector<OmegaSample> w = omega_on_grid(p, lambdas, tol, exec);

    // exact zeros on the grid would break the sign test; nudge them off
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i].omega == 0.0) {
            const double bump = 1e-12 * std::max(1.0, std::fabs(w[i].lambda));
            const double moved = i + 1 < w.size() ? w[i].lambda + bump : w[i].lambda - bump;
            w[i] = sample_omega(p, moved, tol);
        }
    }

    ScanResult result;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i].omega * w[i + 1].omega < 0.0)
            result.brackets.push_back({w[i].lambda, w[i + 1].lambda, w[i].omega, w[i + 1].omega});
    }

    // A dip of |omega| between samples of equal sign can hide a pair of close
    // zeros (the two subinterval lengths beat against each other). Subscan
    // every interior local minimum of |omega| that is not next to a sign
    // change; dips that still show no sign change but fall under the 1e-6
    // threshold are candidate non-simple zeros, refined and reported.
    for (size_t i = 1; i + 1 < w.size(); ++i) {
        const bool near_change = w[i - 1].omega * w[i].omega < 0.0 ||
                                 w[i].omega * w[i + 1].omega < 0.0;
        if (near_change) continue;
        const bool local_min = std::fabs(w[i].omega) <= std::fabs(w[i - 1].omega) &&
                               std::fabs(w[i].omega) <= std::fabs(w[i + 1].omega);
        if (!local_min) continue;

        const int probes = 24;
        std::vector<double> sub(probes);
        for (int k = 0; k < probes; ++k)
            sub[static_cast<size_t>(k)] =
                w[i - 1].lambda +
                (w[i + 1].lambda - w[i - 1].lambda) * (k + 1) / (probes + 1.0);
        const std::vector<OmegaSample> fine = omega_on_grid(p, sub, tol, exec);

        std::vector<OmegaSample> window;
        window.push_back(w[i - 1]);
        for (const auto& s : fine) window.push_back(s);
        window.push_back(w[i + 1]);
        bool found = false;
        for (size_t k = 0; k + 1 < window.size(); ++k) {
            if (window[k].omega * window[k + 1].omega < 0.0) {
                result.brackets.push_back({window[k].lambda, window[k + 1].lambda,
                                           window[k].omega, window[k + 1].omega});
                found = true;
            }
        }
        if (!found && std::fabs(w[i].omega) < 1e-6 * w[i].scale) {
            const OmegaSample refined =
                minimize_abs_omega(p, w[i - 1].lambda, w[i + 1].lambda, tol);
            result.suspicious.push_back(refined.lambda);
        }
    }
    std::sort(result.brackets.begin(), result.brackets.end(),
              [](const Bracket& a, const Bracket& b) { return a.lo < b.lo; });
    return result;
}

OmegaSample minimize_abs_omega(const Problem& p, double lo, double hi, const Tolerances& tol,
                               int iterations) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    OmegaSample f1 = sample_omega(p, x1, tol);
    OmegaSample f2 = sample_omega(p, x2, tol);
    for (int it = 0; it < iterations && b - a > 1e-14 * std::max(1.0, std::fabs(a)); ++it) {
        if (std::fabs(f1.omega) < std::fabs(f2.omega)) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = sample_omega(p, x1, tol);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = sample_omega(p, x2, tol);
        }
    }
    return std::fabs(f1.omega) < std::fabs(f2.omega) ? f1 : f2;
}

double refine_eigenvalue(const Problem& p, const Bracket& br, double tol_lambda,
                         const Tolerances& tol) {
    require(br.lo < br.hi, errc::not_a_bracket, "bracket needs lo < hi");
    if (br.w_lo == 0.0) return br.lo;
    if (br.w_hi == 0.0) return br.hi;
    require(br.w_lo * br.w_hi < 0.0, errc::not_a_bracket,
            "omega does not change sign over the bracket");

    // Brent: inverse-quadratic / secant steps guarded by bisection, the
    // bracket [a, b] always retains the sign change.
    double a = br.lo, b = br.hi;
    double fa = br.w_lo, fb = br.w_hi;
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 0.5 * tol_lambda * std::max(1.0, std::fabs(b)) +
                            2.0 * 2.220446049250313e-16 * std::fabs(b);
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double pq_p, pq_q;
            const double s = fb / fa;
            if (a == c) {
                pq_p = 2.0 * xm * s;
                pq_q = 1.0 - s;
            } else {
                const double q = fa / fc;
                const double r = fb / fc;
                pq_p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                pq_q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (pq_p > 0.0) pq_q = -pq_q;
            pq_p = std::fabs(pq_p);
            const double min1 = 3.0 * xm * pq_q - std::fabs(tol1 * pq_q);
            const double min2 = std::fabs(e * pq_q);
            if (2.0 * pq_p < std::min(min1, min2)) {
                e = d;
                d = pq_p / pq_q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = omega_value(p, b, tol);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
    }
    fail(errc::no_convergence, "eigenvalue refinement did not converge");
}

std::vector<double> eigenvalues_in(const Problem& p, double lmin, double lmax,
                                   const Tolerances& tol, double tol_lambda, Exec exec) {
    const ScanResult scan = scan_brackets(p, lmin, lmax, tol, exec);
    std::vector<double> roots(scan.brackets.size());
    if (exec == Exec::parallel) {
        std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < static_cast<long>(scan.brackets.size()); ++i) {
            try {
                roots[static_cast<size_t>(i)] =
                    refine_eigenvalue(p, scan.brackets[static_cast<size_t>(i)], tol_lambda, tol);
            } catch (...) {
#pragma omp critical(slgreen_refine_error)
                if (!first_error) first_error = std::current_exception();
            }
        }
        if (first_error) std::rethrow_exception(first_error);
    } else {
        for (size_t i = 0; i < scan.brackets.size(); ++i)
            roots[i] = refine_eigenvalue(p, scan.brackets[i], tol_lambda, tol);
    }
    for (double cand : scan.suspicious) {
        const OmegaSample s = sample_omega(p, cand, tol);
        if (std::fabs(s.omega) < 1e-9 * s.scale) roots.push_back(cand);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots) {
        if (!out.empty() && r - out.back() <= 10.0 * tol_lambda * std::max(1.0, std::fabs(r)))
            continue;
        if (r < lmin || r > lmax) continue;
        out.push_back(r);
    }
    return out;
}

Eigenpair eigenfunction(const Problem& p, double lambda_n, const Tolerances& tol) {
    require(p.delta0() > 0.0, errc::delta0_zero,
            "eigenfunction normalization needs delta0 > 0 (full-mode problem)");
    BasisAtLambda<double> basis = char_fn<double>(p, lambda_n, tol);
    require(std::fabs(basis.omega) <= 1e-6 * basis.omega_scale, errc::not_an_eigenvalue,
            "omega(lambda) = " + std::to_string(basis.omega) + " is not negligible against scale " +
                std::to_string(basis.omega_scale));

    // H1 norm of (phi, T'_b(phi)) with the d12 / d34 / d34/delta0 weights
    auto self = [&](const Branch<double>& br) {
        auto f = [&](double t) { return br.eval(t).y; };
        return integral_against(br, f, br.span_lo(), br.span_hi(), 1e-12);
    };
    const double boundary = t_b_prime(p, basis.phi_right.eval(p.interval.b));
    const double norm_sq = p.minors.d12 * self(basis.phi_left) +
                           p.minors.d34 * self(basis.phi_right) +
                           (p.minors.d34 / p.delta0()) * boundary * boundary;
    require(norm_sq > 0.0 && std::isfinite(norm_sq), errc::not_an_eigenvalue,
            "eigenfunction has no positive norm");
    double scale = 1.0 / std::sqrt(norm_sq);

    // sign convention: first value of magnitude > 1e-6 scanning from a is > 0
    const int n_scan = 2048;
    for (int i = 0; i <= n_scan; ++i) {
        const double x = p.interval.a + (p.interval.b - p.interval.a) * i / n_scan;
        const double v = (x <= p.interval.c ? basis.phi_left.eval(std::min(x, p.interval.c))
                                            : basis.phi_right.eval(x))
                             .y *
                         scale;
        if (std::fabs(v) > 1e-6) {
            if (v < 0.0) scale = -scale;
            break;
        }
    }

    auto scale_branch = [&](Branch<double> br) {
        for (auto& st : br.steps) {
            st.s0.y *= scale;
            st.s0.dy *= scale;
            st.s1.y *= scale;
            st.s1.dy *= scale;
            for (auto& qrow : st.q)
                for (auto& qv : qrow) qv *= scale;
        }
        return br;
    };

    Eigenpair pair;
    pair.lambda = lambda_n;
    pair.omega_residual = std::fabs(basis.omega);
    pair.u_left = scale_branch(basis.phi_left);
    pair.u_right = scale_branch(basis.phi_right);
    pair.tprime_b = boundary * scale;
    auto left = std::make_shared<Branch<double>>(pair.u_left);
    auto right = std::make_shared<Branch<double>>(pair.u_right);
    pair.eigenfunction.left = [left](double x) { return left->eval(x); };
    pair.eigenfunction.right = [right](double x) { return right->eval(x); };
    pair.eigenfunction.f1 = pair.tprime_b;
    return pair;
}

namespace {

using Cplx = std::complex<double>;

Cplx omega_complex(const Problem& p, Cplx lambda, const Tolerances& tol) {
    return char_fn<Cplx>(p, lambda, tol).omega;
}

// accumulated argument change along the segment, subdividing until each
// piece turns by less than pi/2
double arg_sweep(const Problem& p, Cplx za, Cplx wa, Cplx zb, Cplx wb, const Tolerances& tol,
                 int depth) {
    const double turn = std::arg(wb / wa);
    if (std::fabs(turn) < 1.2 && depth > 0) return turn;
    require(depth < 28, errc::no_convergence,
            "argument sweep did not settle; omega may vanish on the contour");
    const Cplx zm = 0.5 * (za + zb);
    const Cplx wm = omega_complex(p, zm, tol);
    require(std::abs(wm) > 0.0, errc::no_convergence, "omega vanishes on the contour");
    return arg_sweep(p, za, wa, zm, wm, tol, depth + 1) +
           arg_sweep(p, zm, wm, zb, wb, tol, depth + 1);
}

} // namespace

int winding_number(const Problem& p, double re_lo, double re_hi, double im_lo, double im_hi,
                   const Tolerances& tol) {
    require(re_lo < re_hi && im_lo < im_hi, errc::bad_range, "degenerate winding rectangle");
    const std::array<Cplx, 4> corners = {Cplx{re_lo, im_lo}, Cplx{re_hi, im_lo},
                                         Cplx{re_hi, im_hi}, Cplx{re_lo, im_hi}};
    std::array<Cplx, 4> values;
    for (size_t i = 0; i < 4; ++i) values[i] = omega_complex(p, corners[i], tol);

    double total = 0.0;
    for (size_t i = 0; i < 4; ++i) {
        const Cplx za = corners[i], zb = corners[(i + 1) % 4];
        const Cplx wa = values[i], wb = values[(i + 1) % 4];
        // seed each edge with a handful of panels so oscillation cannot alias
        const int panels = 24;
        Cplx z_prev = za, w_prev = wa;
        for (int k = 1; k <= panels; ++k) {
            const Cplx z = k == panels ? zb : za + (zb - za) * (static_cast<double>(k) / panels);
            const Cplx w = k == panels ? wb : omega_complex(p, z, tol);
            total += arg_sweep(p, z_prev, w_prev, z, w, tol, 0);
            z_prev = z;
            w_prev = w;
        }
    }
    return static_cast<int>(std::llround(total / (2.0 * std::numbers::pi)));
}

} // namespace slgreen
