#ifndef SLGREEN_SPECTRUM_HPP
#define SLGREEN_SPECTRUM_HPP

#include <span>
#include <vector>

#include "slgreen/greens.hpp"

namespace slgreen {

enum class Exec { serial, parallel };

// A sign-change interval of the characteristic function in lambda.
struct Bracket {
    double lo = 0.0, hi = 0.0;
    double w_lo = 0.0, w_hi = 0.0;
};

struct OmegaSample {
    double lambda = 0.0;
    double omega = 0.0;
    double scale = 1.0;
};

struct ScanResult {
    std::vector<Bracket> brackets;
    // refined local minima of |omega| that dip below 1e-6 * scale without a
    // sign change: candidates for non-simple zeros, reported not decided
    std::vector<double> suspicious;
};

// Evaluates omega on a set of lambda values. The parallel path distributes
// grid points over OpenMP threads; per-point work is identical to the serial
// path, so the two agree bitwise.
std::vector<OmegaSample> omega_on_grid(const Problem& p, std::span<const double> lambdas,
                                       const Tolerances& tol = {}, Exec exec = Exec::parallel);

// Scans [lmin, lmax] on a grid uniform in s = sign(lambda) sqrt|lambda| with
// step pi / (4 (b - a)): four samples per asymptotic oscillation quasi-period
// bracket every simple zero.
ScanResult scan_brackets(const Problem& p, double lmin, double lmax, const Tolerances& tol = {},
                         Exec exec = Exec::parallel);

// Bracket-retaining bisection/secant (Brent) refinement of one sign change.
// Exit when the bracket width drops below tol_lambda * max(1, |lambda|).
double refine_eigenvalue(const Problem& p, const Bracket& br, double tol_lambda = 1e-10,
                         const Tolerances& tol = {});

// Sorted, deduplicated eigenvalues in [lmin, lmax]: refined sign changes plus
// refined suspicious points whose |omega| falls below 1e-9 * scale.
std::vector<double> eigenvalues_in(const Problem& p, double lmin, double lmax,
                                   const Tolerances& tol = {}, double tol_lambda = 1e-10,
                                   Exec exec = Exec::parallel);

// Eigenvalue with its H1-normalized eigenfunction. Sign convention: the first
// eigenfunction value of magnitude > 1e-6, scanning from a, is positive.
struct Eigenpair {
    int index = 0;
    double lambda = 0.0;
    double omega_residual = 0.0;
    H1Element<double> eigenfunction;
    Branch<double> u_left, u_right;  // normalized branches backing the element
    double tprime_b = 0.0;           // second component, equals eigenfunction.f1
};

Eigenpair eigenfunction(const Problem& p, double lambda_n, const Tolerances& tol = {});

// Winding number of omega around the rectangle [re_lo, re_hi] x [im_lo, im_hi]
// walked counterclockwise; counts zeros inside (argument principle).
int winding_number(const Problem& p, double re_lo, double re_hi, double im_lo, double im_hi,
                   const Tolerances& tol = {});

// Golden-section minimizer of |omega| on [lo, hi]; exposed for the suspicious
// point machinery and its tests.
OmegaSample minimize_abs_omega(const Problem& p, double lo, double hi, const Tolerances& tol = {},
                               int iterations = 60);

} // namespace slgreen

#endif
