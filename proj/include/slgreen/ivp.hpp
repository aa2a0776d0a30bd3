#ifndef SLGREEN_IVP_HPP
#define SLGREEN_IVP_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "slgreen/problem.hpp"
#include "slgreen/quadrature.hpp"
#include "slgreen/scalar.hpp"

namespace slgreen {

struct Tolerances {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_steps = 100000;
};

template <Scalar S>
struct State {
    S y{};
    S dy{};
};

// One accepted step with the quartic interpolant of the 5(4) pair:
//   u(theta) = y0 + h*theta*(q0 + theta*(q1 + theta*(q2 + theta*q3)))
// per component, theta in [0, 1]. The derivative channel is interpolated the
// same way, so eval() returns (y, y') directly.
template <Scalar S>
struct BranchStep {
    double x0 = 0.0, x1 = 0.0;
    State<S> s0, s1;
    std::array<std::array<S, 2>, 4> q{};  // q[j][component]
};

// Dense (everywhere-evaluable) solution of -y'' + q y = lambda y on one side,
// in either direction. Immutable once built.
template <Scalar S>
struct Branch {
    Side side = Side::left;
    S lambda{};
    double x_start = 0.0, x_end = 0.0;
    std::vector<BranchStep<S>> steps;

    double span_lo() const { return std::min(x_start, x_end); }
    double span_hi() const { return std::max(x_start, x_end); }

    State<S> start_state() const { return steps.front().s0; }
    State<S> end_state() const { return steps.back().s1; }

    State<S> eval(double x) const;
};

namespace rk {

// Dormand-Prince 5(4) tableau with the order-4 continuous extension.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr std::array<double, 7> err_w = {-71.0 / 57600, 0.0,           71.0 / 16695,
                                                -71.0 / 1920,  17253.0 / 339200, -22.0 / 525,
                                                1.0 / 40};
inline constexpr std::array<std::array<double, 4>, 7> interp = {{
    {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0,
     -12715105075.0 / 11282082432.0},
    {0.0, 0.0, 0.0, 0.0},
    {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0,
     87487479700.0 / 32700410799.0},
    {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0,
     -10690763975.0 / 1880347072.0},
    {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0,
     701980252875.0 / 199316789632.0},
    {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0},
    {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0},
}};

} // namespace rk

template <Scalar S>
State<S> Branch<S>::eval(double x) const {
    const double slack = 64.0 * 1e-16 * (1.0 + span_hi() - span_lo());
    require(x >= span_lo() - slack && x <= span_hi() + slack, errc::out_of_span,
            "x=" + std::to_string(x) + " outside branch span [" + std::to_string(span_lo()) +
                ", " + std::to_string(span_hi()) + "]");
    x = std::clamp(x, span_lo(), span_hi());
    const bool forward = x_end >= x_start;
    // binary search for the step whose [x0, x1] contains x
    size_t lo = 0, hi = steps.size() - 1;
    while (lo < hi) {
        const size_t mid = (lo + hi) / 2;
        const double edge = steps[mid].x1;
        if (forward ? (x <= edge) : (x >= edge))
            hi = mid;
        else
            lo = mid + 1;
    }
    const BranchStep<S>& st = steps[lo];
    const double h = st.x1 - st.x0;
    const double theta = (x - st.x0) / h;
    State<S> out;
    for (int comp = 0; comp < 2; ++comp) {
        const S q0 = st.q[0][static_cast<size_t>(comp)];
        const S q1 = st.q[1][static_cast<size_t>(comp)];
        const S q2 = st.q[2][static_cast<size_t>(comp)];
        const S q3 = st.q[3][static_cast<size_t>(comp)];
        const S base = comp == 0 ? st.s0.y : st.s0.dy;
        const S v = base + h * theta * (q0 + theta * (q1 + theta * (q2 + theta * q3)));
        (comp == 0 ? out.y : out.dy) = v;
    }
    return out;
}

namespace detail {

// RHS of the first-order system (y, y')' = (y', (q - lambda) y). Stage
// abscissae can land an ulp outside the closed side, so clamp before the
// potential lookup.
template <Scalar S>
struct OdeRhs {
    const Problem* p;
    Side side;
    S lambda;
    double lo, hi;

    State<S> operator()(double x, const State<S>& s) const {
        x = std::clamp(x, lo, hi);
        return {s.dy, (eval_potential(*p, side, x) - lambda) * s.y};
    }
};

template <Scalar S>
inline double err_norm(const State<S>& e, const State<S>& y0, const State<S>& y1,
                       const Tolerances& tol) {
    const double sc_y = tol.abs_tol + tol.rel_tol * std::max(abs_of(y0.y), abs_of(y1.y));
    const double sc_d = tol.abs_tol + tol.rel_tol * std::max(abs_of(y0.dy), abs_of(y1.dy));
    const double ry = abs_of(e.y) / sc_y;
    const double rd = abs_of(e.dy) / sc_d;
    return std::sqrt(0.5 * (ry * ry + rd * rd));
}

template <Scalar S>
inline double state_norm_scaled(const State<S>& v, const State<S>& ref, const Tolerances& tol) {
    const double sc_y = tol.abs_tol + tol.rel_tol * abs_of(ref.y);
    const double sc_d = tol.abs_tol + tol.rel_tol * abs_of(ref.dy);
    const double ry = abs_of(v.y) / sc_y;
    const double rd = abs_of(v.dy) / sc_d;
    return std::sqrt(0.5 * (ry * ry + rd * rd));
}

} // namespace detail

// Integrates the IVP from x0 to x1 (backward if x1 < x0) with local error
// control and stores the dense interpolant of every accepted step.
template <Scalar S>
Branch<S> integrate_ivp(const Problem& p, Side side, S lambda, double x0, State<S> y0, double x1,
                        const Tolerances& tol = {}) {
    require(p.validated, errc::invalid_argument, "integrate_ivp needs a validated problem");
    require(x0 != x1, errc::invalid_argument, "integrate_ivp needs x0 != x1");
    require(tol.abs_tol > 0 && tol.rel_tol > 0 && tol.max_steps > 0, errc::invalid_argument,
            "tolerances must be positive");
    const double side_lo = side == Side::left ? p.interval.a : p.interval.c;
    const double side_hi = side == Side::left ? p.interval.c : p.interval.b;
    const double pad = 1e-12 * (side_hi - side_lo);
    require(x0 >= side_lo - pad && x0 <= side_hi + pad && x1 >= side_lo - pad && x1 <= side_hi + pad,
            errc::invalid_argument, "integration endpoints outside the closed side");
    require(finite(y0.y) && finite(y0.dy), errc::invalid_argument, "initial state not finite");

    detail::OdeRhs<S> rhs{&p, side, lambda, side_lo, side_hi};
    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = std::fabs(x1 - x0);

    Branch<S> br;
    br.side = side;
    br.lambda = lambda;
    br.x_start = x0;
    br.x_end = x1;

    // initial step size from the local derivative scale
    State<S> f0 = rhs(x0, y0);
    double h;
    {
        const double d0 = detail::state_norm_scaled(y0, y0, tol);
        const double d1 = detail::state_norm_scaled(f0, y0, tol);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, span);
        State<S> y_probe{y0.y + dir * h0 * f0.y, y0.dy + dir * h0 * f0.dy};
        State<S> f_probe = rhs(x0 + dir * h0, y_probe);
        const double d2 =
            detail::state_norm_scaled(State<S>{f_probe.y - f0.y, f_probe.dy - f0.dy}, y0, tol) / h0;
        double h1 = (std::max(d1, d2) <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                : std::pow(0.01 / std::max(d1, d2), 0.2);
        h = std::min({100.0 * h0, h1, span});
    }
    h *= dir;

    double x = x0;
    State<S> y = y0;
    int n_attempts = 0;
    bool rejected = false;

    while (dir * (x1 - x) > 0.0) {
        if (++n_attempts > tol.max_steps)
            fail(errc::max_steps_exceeded, "more than " + std::to_string(tol.max_steps) +
                                               " step attempts on side");
        const double h_min = 16.0 * 2.220446049250313e-16 * std::max(std::fabs(x), 1.0);
        if (std::fabs(h) < h_min)
            fail(errc::step_underflow, "step size " + std::to_string(h) + " below " +
                                           std::to_string(h_min) + " at x=" + std::to_string(x));
        bool last = false;
        if (dir * (x + h - x1) >= 0.0) {
            h = x1 - x;
            last = true;
        }

        using namespace rk;
        std::array<State<S>, 7> k;
        k[0] = f0;
        auto stage = [&](double c, std::initializer_list<std::pair<double, int>> terms) {
            State<S> acc{};
            for (auto [w, idx] : terms) {
                acc.y += w * k[static_cast<size_t>(idx)].y;
                acc.dy += w * k[static_cast<size_t>(idx)].dy;
            }
            State<S> arg{y.y + h * acc.y, y.dy + h * acc.dy};
            return rhs(x + c * h, arg);
        };
        k[1] = stage(c2, {{a21, 0}});
        k[2] = stage(c3, {{a31, 0}, {a32, 1}});
        k[3] = stage(c4, {{a41, 0}, {a42, 1}, {a43, 2}});
        k[4] = stage(c5, {{a51, 0}, {a52, 1}, {a53, 2}, {a54, 3}});
        k[5] = stage(1.0, {{a61, 0}, {a62, 1}, {a63, 2}, {a64, 3}, {a65, 4}});
        State<S> y1s{y.y + h * (b1 * k[0].y + b3 * k[2].y + b4 * k[3].y + b5 * k[4].y + b6 * k[5].y),
                     y.dy + h * (b1 * k[0].dy + b3 * k[2].dy + b4 * k[3].dy + b5 * k[4].dy +
                                 b6 * k[5].dy)};
        k[6] = rhs(x + h, y1s);

        State<S> err{};
        for (size_t i = 0; i < 7; ++i) {
            err.y += err_w[i] * k[i].y;
            err.dy += err_w[i] * k[i].dy;
        }
        err.y *= h;
        err.dy *= h;

        if (!finite(y1s.y) || !finite(y1s.dy) || !finite(err.y) || !finite(err.dy))
            fail(errc::non_finite, "state overflow at x=" + std::to_string(x) +
                                       " (lambda too extreme for this span?)");

        const double en = detail::err_norm(err, y, y1s, tol);
        if (en <= 1.0) {
            BranchStep<S> st;
            st.x0 = x;
            st.x1 = x + h;
            st.s0 = y;
            st.s1 = y1s;
            for (size_t j = 0; j < 4; ++j)
                for (size_t comp = 0; comp < 2; ++comp) {
                    S acc{};
                    for (size_t i = 0; i < 7; ++i)
                        acc += interp[i][j] * (comp == 0 ? k[i].y : k[i].dy);
                    st.q[j][comp] = acc;
                }
            br.steps.push_back(st);
            x = st.x1;
            y = y1s;
            f0 = k[6];  // first-same-as-last
            double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
            fac = std::min(rejected ? 1.0 : 10.0, std::max(0.2, fac));
            if (!last) h *= fac;
            rejected = false;
        } else {
            const double fac = std::max(0.2, 0.9 * std::pow(en, -0.2));
            h *= fac;
            rejected = true;
        }
    }
    br.x_end = x1;
    return br;
}

// ---------------------------------------------------------------------------
// quadrature against the dense output

namespace detail {

// Integral of branch_value * f over one clipped step, with its own error
// control; integrands are smooth inside a step.
template <Scalar S, typename F>
auto step_integral(const Branch<S>& br, F& f, double lo, double hi, double abs_tol) {
    auto g = [&](double t) { return br.eval(t).y * f(t); };
    return integrate_adaptive(g, lo, hi, abs_tol);
}

} // namespace detail

// integral_lo^hi branch_value(t) * f(t) dt, absolute error <= tol*(1+|result|).
template <Scalar S, typename F>
auto integral_against(const Branch<S>& br, F&& f, double lo, double hi, double tol = 1e-10) {
    using R = decltype(br.eval(lo).y * f(lo));
    const double slack = 1e-10 * (1.0 + br.span_hi() - br.span_lo());
    require(lo <= hi, errc::invalid_argument, "integral_against needs lo <= hi");
    require(lo >= br.span_lo() - slack && hi <= br.span_hi() + slack, errc::out_of_span,
            "integration range outside branch span");
    lo = std::clamp(lo, br.span_lo(), br.span_hi());
    hi = std::clamp(hi, br.span_lo(), br.span_hi());
    if (lo == hi) return R{};

    // rough pass for the error budget, then per-step adaptive refinement
    R rough{};
    for (const auto& st : br.steps) {
        const double s_lo = std::max(lo, std::min(st.x0, st.x1));
        const double s_hi = std::min(hi, std::max(st.x0, st.x1));
        if (s_lo >= s_hi) continue;
        auto g = [&](double t) { return br.eval(t).y * f(t); };
        rough += integrate_gl(g, s_lo, s_hi, 12);
    }
    const double budget = tol * (1.0 + abs_of(rough));
    const double total_len = hi - lo;
    R out{};
    for (const auto& st : br.steps) {
        const double s_lo = std::max(lo, std::min(st.x0, st.x1));
        const double s_hi = std::min(hi, std::max(st.x0, st.x1));
        if (s_lo >= s_hi) continue;
        out += detail::step_integral(br, f, s_lo, s_hi,
                                     budget * std::max(1e-3, (s_hi - s_lo) / total_len));
    }
    return out;
}

// Prefix integrals of branch_value * weight from the branch start, oriented
// with the integration direction: value(x) = integral_{x_start}^{x}.
template <Scalar S>
class CumulativeIntegral {
public:
    using R = S;

    template <typename F>
    CumulativeIntegral(const Branch<S>& br, F&& weight) : br_(&br) {
        weight_ = std::forward<F>(weight);
        prefix_.reserve(br.steps.size() + 1);
        prefix_.push_back(R{});
        R acc{};
        for (const auto& st : br.steps) {
            const double lo = std::min(st.x0, st.x1);
            const double hi = std::max(st.x0, st.x1);
            auto g = [&](double t) { return br_->eval(t).y * weight_(t); };
            const R rough = integrate_gl(g, lo, hi, 12);
            const double tol = 1e-12 * (1.0 + std::max(abs_of(rough), abs_of(acc)));
            R piece = integrate_adaptive(g, lo, hi, tol);
            if (st.x1 < st.x0) piece = -piece;
            acc += piece;
            prefix_.push_back(acc);
        }
    }

    R total() const { return prefix_.back(); }

    R eval(double x) const {
        const double slack = 64.0 * 1e-16 * (1.0 + br_->span_hi() - br_->span_lo());
        require(x >= br_->span_lo() - slack && x <= br_->span_hi() + slack, errc::out_of_span,
                "cumulative integral evaluated outside branch span");
        x = std::clamp(x, br_->span_lo(), br_->span_hi());
        const bool forward = br_->x_end >= br_->x_start;
        size_t lo = 0, hi = br_->steps.size() - 1;
        while (lo < hi) {
            const size_t mid = (lo + hi) / 2;
            const double edge = br_->steps[mid].x1;
            if (forward ? (x <= edge) : (x >= edge))
                hi = mid;
            else
                lo = mid + 1;
        }
        const auto& st = br_->steps[lo];
        const double p_lo = std::min(st.x0, x);
        const double p_hi = std::max(st.x0, x);
        R piece{};
        if (p_lo != p_hi) {
            auto g = [&](double t) { return br_->eval(t).y * weight_(t); };
            const R rough = integrate_gl(g, p_lo, p_hi, 12);
            const double tol =
                1e-12 * (1.0 + std::max(abs_of(rough), abs_of(prefix_.back())));
            piece = integrate_adaptive(g, p_lo, p_hi, tol);
        }
        if (x < st.x0) piece = -piece;
        return prefix_[lo] + piece;
    }

private:
    const Branch<S>* br_;
    std::function<S(double)> weight_;
    std::vector<R> prefix_;
};

} // namespace slgreen

#endif
