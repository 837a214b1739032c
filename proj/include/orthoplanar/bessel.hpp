#pragma once

namespace orthoplanar {

/// Modified Bessel function of the first kind, order 0, for x >= 0.
/// Power series below kBesselSeriesLimit, Hankel asymptotic expansion above.
/// Throws DomainError for x < 0 and OverflowError once I0(x) exceeds double.
double bessel_i0(double x);

/// Modified Bessel function of the first kind, order 1, for x >= 0.
double bessel_i1(double x);

/// I1(x) / x, continuous at 0 where it equals 1/2.
double bessel_i1_over_x(double x);

/// Crossover between the series and the asymptotic expansion.
inline constexpr double kBesselSeriesLimit = 25.0;

/// d/dt I0(K * sqrt(c^2 t^2 - w^2)) = K^2 c^2 t * I1(K z) / (K z),
/// z = sqrt(c^2 t^2 - w^2). Requires |w| < c t and K >= 0.
double i0_dt_kernel(double K, double c, double t, double w);

}  // namespace orthoplanar
