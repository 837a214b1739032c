#include "orthoplanar/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "orthoplanar/errors.hpp"

namespace orthoplanar {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_nonnegative(double x, const char* name) {
    if (!(x >= 0.0)) {
        std::ostringstream msg;
        msg << name << ": argument must be >= 0, got " << x;
        throw DomainError(msg.str());
    }
}

// sum_k (x^2/4)^k / (k! (k + order)!), order in {0, 1}. All terms are
// positive, so the partial sums carry no cancellation.
double power_series(double x, int order) {
    const double h = 0.25 * x * x;
    double term = 1.0;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= h / (static_cast<double>(k) * static_cast<double>(k + order));
        sum += term;
        if (term <= kEps * 0.25 * sum) break;
    }
    return sum;
}

// I_order(x) ~ e^x / sqrt(2 pi x) * sum_k a_k, with
// a_k = a_{k-1} * (-(4 order^2 - (2k-1)^2)) / (8 k x).
double asymptotic(double x, int order, const char* name) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (odd * odd - mu) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) <= kEps * 0.25 * std::abs(sum)) break;
    }
    const double scale = std::exp(x - 0.5 * std::log(2.0 * std::numbers::pi * x));
    const double value = scale * sum;
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << name << "(" << x << ") overflows double precision";
        throw OverflowError(msg.str());
    }
    return value;
}

}  // namespace

double bessel_i0(double x) {
    require_nonnegative(x, "bessel_i0");
    if (x <= kBesselSeriesLimit) return power_series(x, 0);
    return asymptotic(x, 0, "bessel_i0");
}

double bessel_i1(double x) {
    require_nonnegative(x, "bessel_i1");
    if (x <= kBesselSeriesLimit) return 0.5 * x * power_series(x, 1);
    return asymptotic(x, 1, "bessel_i1");
}

double bessel_i1_over_x(double x) {
    require_nonnegative(x, "bessel_i1_over_x");
    if (x <= kBesselSeriesLimit) return 0.5 * power_series(x, 1);
    return asymptotic(x, 1, "bessel_i1_over_x") / x;
}

double i0_dt_kernel(double K, double c, double t, double w) {
    require_nonnegative(K, "i0_dt_kernel");
    const double ct = c * t;
    if (!(std::abs(w) < ct)) {
        std::ostringstream msg;
        msg << "i0_dt_kernel: need |w| < c t, got w=" << w << ", c t=" << ct;
        throw DomainError(msg.str());
    }
    if (K == 0.0) return 0.0;
    const double z = std::sqrt((ct - w) * (ct + w));
    return K * K * c * ct * bessel_i1_over_x(K * z);
}

}  // namespace orthoplanar
