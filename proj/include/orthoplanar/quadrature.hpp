#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace orthoplanar {

/// Adaptive Gauss-Kronrod (61 point) on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13);

/// Integral over the open interval (a, b) after the substitution
/// w = m + h sin(theta), so integrable endpoint singularities of square-root
/// type are smoothed and the endpoints themselves are never evaluated.
double integrate_open(const std::function<double(double)>& f, double a, double b,
                      double rel_tol = 1e-13);

/// Real and imaginary parts of the open-interval integral of f(w) e^{i k w}.
std::complex<double> integrate_fourier(const std::function<double(double)>& f, double k,
                                       double a, double b, double rel_tol = 1e-13);

}  // namespace orthoplanar
