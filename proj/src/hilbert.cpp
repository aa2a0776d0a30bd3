#include "slgreen/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace slgreen {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    require(!coeffs_.empty(), errc::invalid_argument, "polynomial needs at least one coefficient");
    for (double c : coeffs_)
        require(std::isfinite(c), errc::invalid_argument, "polynomial coefficient not finite");
}

State<double> Polynomial::eval(double x) const {
    State<double> s;
    poly_eval(coeffs_, x, s.y, s.dy);
    return s;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() == 1) return Polynomial({0.0});
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::scaled(double k) const {
    std::vector<double> c = coeffs_;
    for (double& v : c) v *= k;
    return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return a + b.scaled(-1.0);
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (size_t i = 0; i < a.coeffs_.size(); ++i)
        for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
}

double poly_integral(const Polynomial& q, double lo, double hi) {
    const int nodes = (q.degree() + 1) / 2 + 3;
    auto f = [&](double x) { return q.eval(x).y; };
    return integrate_gl(f, lo, hi, nodes);
}

H1Element<double> to_h1(const PolyElement& e) {
    return {[q = e.left](double x) { return q.eval(x); },
            [q = e.right](double x) { return q.eval(x); }, e.f1};
}

H1Element<std::complex<double>> to_h1_complex(const PolyElement& e) {
    using C = std::complex<double>;
    auto lift = [](const Polynomial& q) {
        return [q](double x) {
            const State<double> s = q.eval(x);
            return State<C>{C(s.y), C(s.dy)};
        };
    };
    return {lift(e.left), lift(e.right), C(e.f1)};
}

namespace {

double side_product_integral(const Polynomial& f, const Polynomial& g, double lo, double hi) {
    const int deg = f.degree() + g.degree();
    const int nodes = std::max(2, (deg + 1) / 2 + 2);
    auto fn = [&](double x) { return f.eval(x).y * g.eval(x).y; };
    return integrate_gl(fn, lo, hi, nodes);
}

} // namespace

double inner_product(const Problem& p, const PolyElement& f, const PolyElement& g) {
    require(p.delta0() > 0.0, errc::delta0_zero, "inner product needs delta0 > 0");
    return p.minors.d12 * side_product_integral(f.left, g.left, p.interval.a, p.interval.c) +
           p.minors.d34 * side_product_integral(f.right, g.right, p.interval.c, p.interval.b) +
           (p.minors.d34 / p.delta0()) * f.f1 * g.f1;
}

double h1_norm(const Problem& p, const PolyElement& f) {
    return std::sqrt(std::max(0.0, inner_product(p, f, f)));
}

double domain_defect(const Problem& p, const PolyElement& f) {
    const State<double> at_a = f.left.eval(p.interval.a);
    const State<double> at_cm = f.left.eval(p.interval.c);
    const State<double> at_cp = f.right.eval(p.interval.c);
    const State<double> at_b = f.right.eval(p.interval.b);
    const double scale = std::max({1.0, std::fabs(at_a.y), std::fabs(at_a.dy), std::fabs(at_cm.y),
                                   std::fabs(at_cm.dy), std::fabs(at_cp.y), std::fabs(at_cp.dy),
                                   std::fabs(at_b.y), std::fabs(at_b.dy)});
    const double second = std::fabs(f.f1 - t_b_prime(p, at_b));
    return std::max({std::fabs(tau1(p, at_a)), std::fabs(tau3(p, at_cm, at_cp)),
                     std::fabs(tau4(p, at_cm, at_cp)), second}) /
           scale;
}

PolyElement apply_A(const Problem& p, const DomainElement& f) {
    require(!p.potential.left_custom && !p.potential.right_custom, errc::invalid_argument,
            "apply_A needs the piecewise-polynomial potential");
    require(domain_defect(p, f) <= 1e-8, errc::not_in_domain,
            "element violates the domain constraints");
    const Polynomial q_left{p.potential.left_coeffs};
    const Polynomial q_right{p.potential.right_coeffs};
    PolyElement out;
    out.left = q_left * f.left - f.left.derivative().derivative();
    out.right = q_right * f.right - f.right.derivative().derivative();
    out.f1 = -t_b(p, f.right.eval(p.interval.b));
    return out;
}

double symmetry_defect(const Problem& p, const DomainElement& f, const DomainElement& g) {
    const PolyElement af = apply_A(p, f);
    const PolyElement ag = apply_A(p, g);
    return std::fabs(inner_product(p, af, g) - inner_product(p, f, ag));
}

double orthogonality_defect(const Problem& p, const Eigenpair& u, const Eigenpair& v) {
    auto cross = [&](const Branch<double>& a, const Branch<double>& b) {
        auto f = [&](double t) { return b.eval(t).y; };
        return integral_against(a, f, a.span_lo(), a.span_hi(), 1e-12);
    };
    return std::fabs(p.minors.d12 * cross(u.u_left, v.u_left) +
                     p.minors.d34 * cross(u.u_right, v.u_right) +
                     (p.minors.d34 / p.delta0()) * u.tprime_b * v.tprime_b);
}

DomainElement make_domain_element(const Problem& p, const Polynomial& raw_left,
                                  const Polynomial& raw_right) {
    const size_t n_left = raw_left.coeffs().size();
    const size_t n_right = raw_right.coeffs().size();
    const size_t n = n_left + n_right;
    require(n >= 4, errc::degenerate_constraints,
            "need at least 4 combined coefficients to satisfy three constraints");

    // constraint rows over the stacked coefficient vector (left then right)
    auto value_row = [](size_t count, double x, double w_val, double w_der) {
        std::vector<double> row(count, 0.0);
        double pw = 1.0;   // x^k
        double pwd = 0.0;  // k x^(k-1)
        for (size_t k = 0; k < count; ++k) {
            row[k] = w_val * pw + w_der * pwd;
            pwd = pw * static_cast<double>(k + 1);
            pw *= x;
        }
        return row;
    };

    std::vector<std::vector<double>> rows;
    {
        std::vector<double> r1(n, 0.0);
        const auto lhs = value_row(n_left, p.interval.a, p.left.alpha10, p.left.alpha11);
        std::copy(lhs.begin(), lhs.end(), r1.begin());
        rows.push_back(std::move(r1));
    }
    for (int which = 0; which < 2; ++which) {
        const auto& t = which == 0 ? p.transmission.row1 : p.transmission.row2;
        std::vector<double> r(n, 0.0);
        const auto lhs = value_row(n_left, p.interval.c, t[0], t[1]);
        const auto rhs = value_row(n_right, p.interval.c, t[2], t[3]);
        std::copy(lhs.begin(), lhs.end(), r.begin());
        std::copy(rhs.begin(), rhs.end(), r.begin() + static_cast<long>(n_left));
        rows.push_back(std::move(r));
    }

    // normalize rows; drop numerically zero rows (a zero homogeneous
    // constraint is always satisfied)
    std::vector<std::vector<double>> c_rows;
    for (auto& r : rows) {
        double norm = 0.0;
        for (double v : r) norm += v * v;
        norm = std::sqrt(norm);
        if (norm < 1e-14) continue;
        for (double& v : r) v /= norm;
        c_rows.push_back(std::move(r));
    }

    std::vector<double> theta;
    theta.reserve(n);
    theta.insert(theta.end(), raw_left.coeffs().begin(), raw_left.coeffs().end());
    theta.insert(theta.end(), raw_right.coeffs().begin(), raw_right.coeffs().end());

    // theta <- theta - C^T (C C^T)^{-1} C theta, applied twice to refine
    const size_t m = c_rows.size();
    for (int pass = 0; pass < 2 && m > 0; ++pass) {
        std::vector<double> resid(m, 0.0);
        for (size_t i = 0; i < m; ++i)
            for (size_t k = 0; k < n; ++k) resid[i] += c_rows[i][k] * theta[k];

        // gram = C C^T, solve gram * mu = resid by gaussian elimination
        std::vector<std::vector<double>> gram(m, std::vector<double>(m + 1, 0.0));
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < m; ++j)
                for (size_t k = 0; k < n; ++k) gram[i][j] += c_rows[i][k] * c_rows[j][k];
            gram[i][m] = resid[i];
        }
        for (size_t col = 0; col < m; ++col) {
            size_t piv = col;
            for (size_t r = col + 1; r < m; ++r)
                if (std::fabs(gram[r][col]) > std::fabs(gram[piv][col])) piv = r;
            require(std::fabs(gram[piv][col]) > 1e-10, errc::degenerate_constraints,
                    "constraint system is rank-deficient");
            std::swap(gram[piv], gram[col]);
            for (size_t r = 0; r < m; ++r) {
                if (r == col) continue;
                const double k = gram[r][col] / gram[col][col];
                for (size_t cc = col; cc <= m; ++cc) gram[r][cc] -= k * gram[col][cc];
            }
        }
        for (size_t i = 0; i < m; ++i) {
            const double mu = gram[i][m] / gram[i][i];
            for (size_t k = 0; k < n; ++k) theta[k] -= mu * c_rows[i][k];
        }
    }

    double theta_scale = 1.0;
    for (double v : theta) theta_scale = std::max(theta_scale, std::fabs(v));
    for (size_t i = 0; i < m; ++i) {
        double r = 0.0;
        for (size_t k = 0; k < n; ++k) r += c_rows[i][k] * theta[k];
        require(std::fabs(r) <= 1e-12 * theta_scale, errc::degenerate_constraints,
                "projection failed to satisfy the constraints exactly");
    }

    DomainElement out;
    out.left = Polynomial(std::vector<double>(theta.begin(), theta.begin() + static_cast<long>(n_left)));
    out.right = Polynomial(std::vector<double>(theta.begin() + static_cast<long>(n_left), theta.end()));
    out.f1 = t_b_prime(p, out.right.eval(p.interval.b));
    return out;
}

} // namespace slgreen
