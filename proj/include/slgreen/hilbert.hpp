#ifndef SLGREEN_HILBERT_HPP
#define SLGREEN_HILBERT_HPP

#include <utility>
#include <vector>

#include "slgreen/greens.hpp"
#include "slgreen/spectrum.hpp"

namespace slgreen {

// Real polynomial in ascending coefficients. Small and value-typed; all the
// operator-domain test vectors are built from these so that the functionals
// and inner products below are exact up to rounding.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    State<double> eval(double x) const;
    Polynomial derivative() const;
    Polynomial scaled(double k) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

private:
    std::vector<double> coeffs_;
};

// Exact integral over [lo, hi] by Gauss-Legendre sized to the degree.
double poly_integral(const Polynomial& q, double lo, double hi);

// Element of the product space with polynomial pieces; the form taken by
// operator-domain vectors and by A applied to them.
struct PolyElement {
    Polynomial left, right;
    double f1 = 0.0;
};

// A PolyElement whose pieces satisfy tau1 = tau3 = tau4 = 0 to rounding and
// whose f1 equals T'_b of the right piece; produced by make_domain_element
// and re-verified by apply_A.
using DomainElement = PolyElement;

H1Element<double> to_h1(const PolyElement& e);
H1Element<std::complex<double>> to_h1_complex(const PolyElement& e);

// ---------------------------------------------------------------------------
// weighted inner product
//
//   <F, G>_1 = d12 int_a^c f conj(g) + d34 int_c^b f conj(g)
//              + (d34 / delta0) f1 conj(g1)

// Exact for polynomial elements (Gauss rule sized to the product degree).
double inner_product(const Problem& p, const PolyElement& f, const PolyElement& g);
double h1_norm(const Problem& p, const PolyElement& f);

// Adaptive quadrature at abs_tol for general elements (branch-backed
// eigenfunctions, resolvent outputs).
template <Scalar S>
S inner_product(const Problem& p, const H1Element<S>& f, const H1Element<S>& g,
                double abs_tol = 1e-10) {
    require(p.delta0() > 0.0, errc::delta0_zero, "inner product needs delta0 > 0");
    auto left = [&](double x) { return f.left(x).y * conj_of(g.left(x).y); };
    auto right = [&](double x) { return f.right(x).y * conj_of(g.right(x).y); };
    const S int_left = integrate_adaptive(left, p.interval.a, p.interval.c, abs_tol);
    const S int_right = integrate_adaptive(right, p.interval.c, p.interval.b, abs_tol);
    return p.minors.d12 * int_left + p.minors.d34 * int_right +
           (p.minors.d34 / p.delta0()) * f.f1 * conj_of(g.f1);
}

template <Scalar S>
double h1_norm(const Problem& p, const H1Element<S>& f, double abs_tol = 1e-10) {
    return std::sqrt(std::max(0.0, real_of(inner_product(p, f, f, abs_tol))));
}

// ---------------------------------------------------------------------------
// the operator

// Largest tau residual of the element relative to its state magnitudes; used
// by the domain-membership gate.
double domain_defect(const Problem& p, const PolyElement& f);

// A(f, T'_b f) = (-f'' + q f, -T_b f). Requires polynomial potential and a
// domain element (tau1 = tau3 = tau4 = 0, f1 = T'_b f); rejects others.
PolyElement apply_A(const Problem& p, const DomainElement& f);

// |<AF, G>_1 - <F, AG>_1| with exact polynomial quadrature.
double symmetry_defect(const Problem& p, const DomainElement& f, const DomainElement& g);

// |d12 int u v (left) + d34 int u v (right) + (d34/delta0) T'_b(u) T'_b(v)|
// for two eigenpairs of the same problem.
double orthogonality_defect(const Problem& p, const Eigenpair& u, const Eigenpair& v);

// Least-squares correction of the stacked coefficients onto the affine set
// tau1 = tau3 = tau4 = 0, then f1 := T'_b of the result. Needs at least four
// combined coefficients and a full-rank constraint system.
DomainElement make_domain_element(const Problem& p, const Polynomial& raw_left,
                                  const Polynomial& raw_right);

} // namespace slgreen

#endif
