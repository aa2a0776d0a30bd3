#include "oracle.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace oracle {

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi, int steps = 100) {
    double flo = f(lo);
    for (int i = 0; i < steps; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi,
                               double step) {
    std::vector<double> roots;
    double x0 = lo, f0 = f(x0);
    while (x0 < hi) {
        const double x1 = std::min(x0 + step, hi);
        const double f1 = f(x1);
        if (f0 == 0.0)
            roots.push_back(x0);
        else if (f0 * f1 < 0.0)
            roots.push_back(bisect(f, x0, x1));
        x0 = x1;
        f0 = f1;
        if (x1 >= hi) break;
    }
    return roots;
}

bool is_zero_poly(const std::vector<double>& coeffs) {
    for (double c : coeffs)
        if (c != 0.0) return false;
    return true;
}

} // namespace

Vec2 propagate_q0(double lambda, double t, const Vec2& v) {
    // y'' = -lambda y: cosine-like and sine-like fundamental pair
    double c, s;  // C(t), S(t) with C' = -lambda S, S' = C
    if (lambda > 0.0) {
        const double r = std::sqrt(lambda);
        c = std::cos(r * t);
        s = std::sin(r * t) / r;
    } else if (lambda < 0.0) {
        const double r = std::sqrt(-lambda);
        c = std::cosh(r * t);
        s = std::sinh(r * t) / r;
    } else {
        c = 1.0;
        s = t;
    }
    return {c * v.y + s * v.dy, -lambda * s * v.y + c * v.dy};
}

double char_q0(const slgreen::Problem& p, double lambda) {
    if (!is_zero_poly(p.potential.left_coeffs) || !is_zero_poly(p.potential.right_coeffs))
        throw std::logic_error("char_q0 oracle needs q == 0");

    Vec2 v{p.left.alpha11, -p.left.alpha10};
    v = propagate_q0(lambda, p.interval.c - p.interval.a, v);

    // jump: solve tau3 = tau4 = 0 for the plus side by 2x2 elimination with
    // partial pivoting (deliberately not the library's minor formulas)
    const auto& r1 = p.transmission.row1;
    const auto& r2 = p.transmission.row2;
    double m[2][3] = {{r1[2], r1[3], -(r1[0] * v.y + r1[1] * v.dy)},
                      {r2[2], r2[3], -(r2[0] * v.y + r2[1] * v.dy)}};
    if (std::fabs(m[1][0]) > std::fabs(m[0][0])) std::swap(m[0], m[1]);
    const double k = m[1][0] / m[0][0];
    for (int j = 0; j < 3; ++j) m[1][j] -= k * m[0][j];
    const double dy_plus = m[1][2] / m[1][1];
    const double y_plus = (m[0][2] - m[0][1] * dy_plus) / m[0][0];

    Vec2 w{y_plus, dy_plus};
    w = propagate_q0(lambda, p.interval.b - p.interval.c, w);
    const double tb = p.right.alpha20 * w.y - p.right.alpha21 * w.dy;
    const double tbp = p.right.alpha20p * w.y - p.right.alpha21p * w.dy;
    return tb + lambda * tbp;
}

std::vector<double> roots_q0(const slgreen::Problem& p, double lmin, double lmax) {
    auto s_of = [](double lambda) {
        return lambda >= 0.0 ? std::sqrt(lambda) : -std::sqrt(-lambda);
    };
    auto in_lambda = [&](double s) { return s >= 0.0 ? s * s : -(s * s); };
    auto f = [&](double s) { return char_q0(p, in_lambda(s)); };
    const double step = std::numbers::pi / (16.0 * (p.interval.b - p.interval.a));
    std::vector<double> roots;
    for (double s : scan_roots(f, s_of(lmin), s_of(lmax), step)) roots.push_back(in_lambda(s));
    return roots;
}

std::vector<double> p0_positive_roots(int count) {
    auto f = [](double s) { return std::sin(2.0 * s) + s * s * s * std::cos(2.0 * s); };
    std::vector<double> out;
    double lo = 0.05;
    while (static_cast<int>(out.size()) < count) {
        const double hi = lo + 40.0;
        for (double s : scan_roots(f, lo, hi, 0.01)) {
            out.push_back(s * s);
            if (static_cast<int>(out.size()) == count) break;
        }
        lo = hi;
    }
    return out;
}

double p0_negative_root() {
    auto f = [](double mu) { return std::tanh(2.0 * mu) - mu * mu * mu; };
    const double mu = bisect(f, 0.5, 1.5);
    return -mu * mu;
}

std::vector<double> p1_positive_roots(int count) {
    auto f = [](double s) {
        return 5.0 * std::sin(2.0 * s) - s * s * s * (3.0 - 5.0 * std::cos(2.0 * s));
    };
    std::vector<double> out;
    double lo = 0.05;
    while (static_cast<int>(out.size()) < count) {
        const double hi = lo + 40.0;
        for (double s : scan_roots(f, lo, hi, 0.01)) {
            out.push_back(s * s);
            if (static_cast<int>(out.size()) == count) break;
        }
        lo = hi;
    }
    return out;
}

double p1_negative_root() {
    auto f = [](double mu) {
        return 5.0 * std::sinh(2.0 * mu) - mu * mu * mu * (5.0 * std::cosh(2.0 * mu) - 3.0);
    };
    const double mu = bisect(f, 0.5, 2.0);
    return -mu * mu;
}

} // namespace oracle
