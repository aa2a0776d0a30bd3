#ifndef SLGREEN_CHECK_HPP
#define SLGREEN_CHECK_HPP

#include <ostream>

#include "slgreen/problem.hpp"
#include "slgreen/ivp.hpp"

namespace slgreen {

struct CheckOptions {
    double lambda_min = -10.0;
    double lambda_max = 60.0;
    Tolerances tol;
    double tol_lambda = 1e-10;
    unsigned seed = 20240811;
};

// Runs the numerical invariant suite on one problem and prints one line per
// check. Returns the number of failed checks (0 = all good). Checks needing
// the weighted space are skipped with a note when delta0 = 0.
int run_check(const Problem& p, const CheckOptions& opts, std::ostream& out);

} // namespace slgreen

#endif
