// Times the characteristic-function grid scan: OpenMP kernel vs the serial
// reference. Both paths do identical per-point work, so the max deviation
// printed at the end must be exactly zero.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "slgreen/config.hpp"
#include "slgreen/spectrum.hpp"

using namespace slgreen;

namespace {

Problem make_p0() {
    Problem p;
    p.interval = {0.0, 1.0, 2.0};
    p.potential.left_coeffs = {0.0};
    p.potential.right_coeffs = {0.0};
    p.left = {1.0, 0.0};
    p.right = {1.0, 0.0, 0.0, -1.0};
    p.transmission.row1 = {1.0, 0.0, -1.0, 0.0};
    p.transmission.row2 = {0.0, 1.0, 0.0, -1.0};
    return validate_problem(p);
}

double run_ms(const Problem& p, const std::vector<double>& lambdas, Exec exec,
              std::vector<OmegaSample>& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = omega_on_grid(p, lambdas, {}, exec);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 400;
    const Problem p = make_p0();
    std::vector<double> lambdas(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double s = 14.0 * i / (n - 1);
        lambdas[static_cast<size_t>(i)] = s * s;  // up to lambda = 196
    }

    std::vector<OmegaSample> serial, parallel;
    // one warm-up pass, then a timed pass each
    (void)omega_on_grid(p, std::vector<double>(lambdas.begin(), lambdas.begin() + 8), {},
                        Exec::serial);
    const double t_serial = run_ms(p, lambdas, Exec::serial, serial);
    const double t_parallel = run_ms(p, lambdas, Exec::parallel, parallel);

    double max_diff = 0.0;
    for (size_t i = 0; i < serial.size(); ++i)
        max_diff = std::max(max_diff, std::fabs(serial[i].omega - parallel[i].omega));

    std::printf("grid points        %d\n", n);
    std::printf("serial reference   %.1f ms\n", t_serial);
    std::printf("openmp kernel      %.1f ms\n", t_parallel);
    std::printf("speedup            %.2fx\n", t_serial / t_parallel);
    std::printf("max |difference|   %s\n", fmt_double(max_diff).c_str());
    return max_diff == 0.0 ? 0 : 1;
}
