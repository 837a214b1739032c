#include "orthoplanar/quadrature.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace orthoplanar {
namespace {

constexpr unsigned kMaxDepth = 30;

// Keeps theta strictly inside (-pi/2, pi/2) once mapped back to w.
double clamp_inside(double w, double a, double b) {
    return std::clamp(w, std::nextafter(a, b), std::nextafter(b, a));
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, kMaxDepth,
                                                                          rel_tol, &error);
}

double integrate_open(const std::function<double(double)>& f, double a, double b,
                      double rel_tol) {
    if (!(b > a)) return 0.0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto g = [&](double theta) {
        const double w = clamp_inside(mid + half * std::sin(theta), a, b);
        return f(w) * half * std::cos(theta);
    };
    return integrate(g, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi, rel_tol);
}

std::complex<double> integrate_fourier(const std::function<double(double)>& f, double k,
                                       double a, double b, double rel_tol) {
    const double re = integrate_open([&](double w) { return f(w) * std::cos(k * w); }, a, b,
                                     rel_tol);
    const double im = integrate_open([&](double w) { return f(w) * std::sin(k * w); }, a, b,
                                     rel_tol);
    return {re, im};
}

}  // namespace orthoplanar
