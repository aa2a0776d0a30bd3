#ifndef SLGREEN_SCALAR_HPP
#define SLGREEN_SCALAR_HPP

#include <cmath>
#include <complex>
#include <type_traits>

namespace slgreen {

// The spectral parameter is real or complex; everything lambda-dependent is
// generic in the scalar type so real problems run in pure real arithmetic.
template <typename S>
inline constexpr bool is_complex_v = false;
template <typename T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

template <typename S>
concept Scalar = std::is_same_v<S, double> || std::is_same_v<S, std::complex<double>>;

inline double abs_of(double x) { return std::fabs(x); }
inline double abs_of(const std::complex<double>& z) { return std::abs(z); }

inline double real_of(double x) { return x; }
inline double real_of(const std::complex<double>& z) { return z.real(); }

inline double imag_of(double) { return 0.0; }
inline double imag_of(const std::complex<double>& z) { return z.imag(); }

inline double conj_of(double x) { return x; }
inline std::complex<double> conj_of(const std::complex<double>& z) { return std::conj(z); }

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const std::complex<double>& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

} // namespace slgreen

#endif
