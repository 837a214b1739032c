#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/rational.hpp>

#include "oracles.hpp"
#include "orthoplanar/analytic.hpp"
#include "orthoplanar/mc.hpp"
#include "orthoplanar/quadrature.hpp"

using namespace orthoplanar;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool within(const McEstimate& est, double expected, double k = 4.0) {
    return std::abs(est.mean - expected) <= k * est.std_error;
}

ModelParams mp(double lambda, double c, double p, double q) {
    return validate_params(lambda, c, p, q);
}

const std::vector<double> kValues{0.5, 1.0, 2.0};

}  // namespace

TEST_CASE("boundary probability special cases") {
    for (double lambda : kValues) {
        for (double c : kValues) {
            for (double t : kValues) {
                const double lt = lambda * t;
                CHECK(rel(prob_boundary(mp(lambda, c, 0.5, 0.5), t),
                          2.0 * std::exp(-lt / 2.0) - std::exp(-lt)) < 1e-12);
                for (double p : {0.1, 0.25, 1.0 / 3.0, 0.45}) {
                    CHECK(rel(prob_boundary(mp(lambda, c, p, p), t),
                              2.0 * std::exp(-lt * (1.0 - p)) - std::exp(-lt)) < 1e-12);
                }
                for (double p : {0.0, 0.2, 0.5, 0.9}) {
                    CHECK(rel(prob_diagonals(mp(lambda, c, p, 1.0 - p), t), std::exp(-lt)) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("boundary probability against the two-exponential form") {
    for (auto [p, q] : std::vector<std::pair<double, double>>{
             {0.3, 0.4}, {0.1, 0.6}, {0.5, 0.2}, {0.05, 0.05}, {0.7, 0.3}}) {
        for (double lambda : {0.5, 1.0, 3.0}) {
            for (double t : {0.1, 1.0, 4.0}) {
                CHECK(rel(prob_boundary(mp(lambda, 1.0, p, q), t),
                          oracle::prob_boundary_direct(lambda, p, q, t)) < 1e-13);
            }
        }
    }
    CHECK(prob_boundary(mp(1.0, 1.0, 0.3, 0.4), 0.0) == 1.0);
    // pq = 0: analytic limit e^{-lt}(1 + lt(p + q))
    CHECK(rel(prob_boundary(mp(1.5, 1.0, 0.0, 0.4), 2.0), std::exp(-3.0) * (1.0 + 3.0 * 0.4)) <
          1e-14);
    CHECK_THROWS_AS(prob_boundary(mp(1.0, 1.0, 0.3, 0.3), -1.0), DomainError);
}

TEST_CASE("side interior mass") {
    for (auto [p, q] : std::vector<std::pair<double, double>>{{0.3, 0.4}, {0.5, 0.5}, {0.0, 0.2}}) {
        const auto params = mp(1.2, 0.7, p, q);
        CHECK(prob_side_interior(params, 0.0) == 0.0);
        for (double t : {0.01, 0.5, 3.0}) {
            CHECK(rel(4.0 * prob_side_interior(params, t) + std::exp(-1.2 * t),
                      prob_boundary(params, t)) < 1e-13);
        }
    }
}

TEST_CASE("side density") {
    const auto params = mp(1.0, 1.0, 0.3, 0.4);
    const double t = 1.0;
    CHECK_THROWS_AS(side_density(params, t, 1.0), DomainError);
    CHECK_THROWS_AS(side_density(params, t, -1.2), DomainError);
    for (double eta : {0.0, 0.3, 0.7, 0.999}) {
        CHECK(side_density(params, t, eta) == side_density(params, t, -eta));
        CHECK(side_density(params, t, eta) > 0.0);
    }
    const double integral =
        integrate_open([&](double e) { return side_density(params, t, e); }, -1.0, 1.0);
    CHECK(rel(integral, prob_side_interior(params, t)) < 1e-8);

    const auto edge = mp(2.0, 1.5, 0.0, 0.4);
    const double edge_mass =
        integrate_open([&](double e) { return side_density(edge, 1.0, e); }, -1.5, 1.5);
    CHECK(rel(edge_mass, prob_side_interior(edge, 1.0)) < 1e-8);
}

TEST_CASE("side characteristic function") {
    const auto params = mp(1.0, 1.0, 0.3, 0.4);
    const double t = 1.0;
    const double vertex = std::exp(-t) / 4.0;
    CHECK(rel(side_charfn(params, t, 0.0).real(), prob_side_interior(params, t) + 2.0 * vertex) <
          1e-14);
    for (double alpha : {0.5, 1.0, 2.0}) {
        const Complex numeric =
            integrate_fourier([&](double e) { return side_density(params, t, e); }, alpha, -1.0,
                              1.0) +
            2.0 * vertex * std::cos(alpha);
        CHECK(std::abs(numeric - side_charfn(params, t, alpha)) < 1e-6);
        CHECK(side_charfn(params, t, alpha).imag() == 0.0);
    }
    // Branch point alpha c = lambda sqrt(pq).
    const double branch = std::sqrt(0.12);
    const double at = side_charfn(params, t, branch).real();
    CHECK(std::abs(at - side_charfn(params, t, branch + 1e-9).real()) < 1e-8);
    CHECK(std::abs(at - side_charfn(params, t, branch - 1e-9).real()) < 1e-8);
}

TEST_CASE("side probability and characteristic function against Monte Carlo") {
    const auto params = mp(1.0, 1.0, 0.3, 0.4);
    const double t = 1.0;
    const std::size_t n = 1000000;
    const auto side0 = estimate_event(params, t, n, 41, [](const SimOutcome& o) {
        return o.region.kind == RegionKind::SideInterior && o.region.index == 0;
    });
    CHECK(within(side0, prob_side_interior(params, t)));

    // Side joining (ct, 0) and (0, ct), vertices included; eta = x - y.
    const double alpha = 1.3;
    const auto [re, im] = empirical_charfn(params, t, n, 42, [alpha](const SimOutcome& o) {
        const bool vertex = o.region.kind == RegionKind::Vertex && o.region.index <= 1;
        const bool side = o.region.kind == RegionKind::SideInterior && o.region.index == 0;
        return PhaseSample{alpha * (o.final.x - o.final.y), vertex || side};
    });
    const Complex closed = side_charfn(params, t, alpha);
    CHECK(within(re, closed.real()));
    CHECK(within(im, closed.imag()));
}

TEST_CASE("diagonal laws") {
    const auto params = mp(1.0, 1.0, 0.2, 0.3);
    const double t = 1.0;
    CHECK(prob_diagonals(params, 0.0) == 1.0);
    CHECK(rel(prob_diag_interior(params, t), (std::exp(-0.5) - std::exp(-1.0)) / 2.0) < 1e-14);
    CHECK_THROWS_AS(diag_density(mp(1.0, 1.0, 0.6, 0.4), t, 0.0), UnsupportedRegime);
    CHECK_THROWS_AS(diag_density(params, t, 1.0), DomainError);
    for (double x : {0.0, 0.4, 0.95}) {
        CHECK(diag_density(params, t, x) == diag_density(params, t, -x));
    }
    const double integral =
        integrate_open([&](double x) { return diag_density(params, t, x); }, -1.0, 1.0);
    CHECK(rel(integral, (std::exp(-0.5) - std::exp(-1.0)) / 2.0) < 1e-8);

    const double atoms = std::exp(-t) / 2.0;
    CHECK(rel(diag_charfn(params, t, 0.0).real(), atoms + prob_diag_interior(params, t)) < 1e-14);
    CHECK(rel(diag_charfn(params, t, 0.0).real(), prob_diagonals(params, t) / 2.0) < 1e-14);
    for (double alpha : {0.5, 1.0, 2.0}) {
        const Complex numeric =
            integrate_fourier([&](double x) { return diag_density(params, t, x); }, alpha, -1.0,
                              1.0) +
            atoms * std::cos(alpha);
        CHECK(std::abs(numeric - diag_charfn(params, t, alpha)) < 1e-6);
    }
    const double branch = 0.5;
    CHECK(std::abs(diag_charfn(params, t, branch).real() -
                   diag_charfn(params, t, branch + 1e-9).real()) < 1e-8);

    const auto freq = estimate_event(params, t, 1000000, 43, [](const SimOutcome& o) {
        return o.final.history.only_reflections;
    });
    CHECK(within(freq, prob_diagonals(params, t)));
}

TEST_CASE("diagonal density histogram") {
    const auto params = mp(1.0, 1.0, 0.2, 0.3);
    const double t = 1.0;
    const Histogram hist = simulate_histogram(
        params, t, McRun{10000000, 44, 0},
        [](const SimOutcome& o) -> std::optional<double> {
            if (o.region.kind != RegionKind::DiagonalInterior || o.region.axis != Axis::Horizontal) {
                return std::nullopt;
            }
            return o.final.x;
        },
        -1.0, 1.0, 40);
    const auto cmp = compare_histogram(hist, [&](double x) { return diag_density(params, t, x); });
    CHECK(cmp.max_abs_z <= 5.0);
}

TEST_CASE("interior characteristic function against the matrix exponential") {
    double worst = 0.0;
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.95}) {
        for (double lambda : {0.5, 1.0, 2.5}) {
            for (double c : {0.5, 1.0, 2.0}) {
                const auto params = mp(lambda, c, p, 1.0 - p);
                for (double t : {0.05, 0.5, 1.0, 3.0}) {
                    for (double alpha : {0.0, 0.3, -1.0, 2.0, 1.0 / c}) {
                        for (double beta : {0.0, 0.5, 1.0, -1.7, 1.0 / c}) {
                            const Complex v = interior_charfn_noref(params, t, alpha, beta);
                            const Complex o = oracle::interior_charfn(lambda, c, p, t, alpha, beta);
                            worst = std::max(worst, std::abs(v - o));
                            REQUIRE(std::abs(v) <= 1.0 + 1e-12);
                        }
                    }
                }
            }
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("interior characteristic function: degenerate roots") {
    // At p = 1/2 the roots vanish together on alpha c = lambda, beta = 0.
    const auto half = mp(1.0, 1.0, 0.5, 0.5);
    for (auto [a, b] : std::vector<std::pair<double, double>>{
             {1.0, 0.0}, {0.0, 1.0}, {1.0 + 1e-9, 1e-9}, {std::sqrt(0.5), std::sqrt(0.5)}}) {
        const Complex v = interior_charfn_noref(half, 1.0, a, b);
        CHECK(std::abs(v - oracle::interior_charfn(1.0, 1.0, 0.5, 1.0, a, b)) < 1e-12);
    }
    CHECK(interior_charfn_noref(half, 1.0, 0.0, 0.0) == Complex(1.0, 0.0));
    CHECK_THROWS_AS(interior_charfn_noref(mp(1.0, 1.0, 0.3, 0.3), 1.0, 0.1, 0.1),
                    UnsupportedRegime);

    const std::size_t n = 10000000;
    const auto [re, im] = empirical_charfn(half, 1.0, n, 45, [](const SimOutcome& o) {
        return PhaseSample{o.final.x, true};
    });
    const Complex closed = interior_charfn_noref(half, 1.0, 1.0, 0.0);
    CHECK(within(re, closed.real()));
    CHECK(within(im, closed.imag()));
}

TEST_CASE("interior characteristic function symmetries and Monte Carlo") {
    const auto half = mp(1.0, 1.0, 0.5, 0.5);
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0.3, 1.1}, {2.0, -0.5}}) {
        const Complex v = interior_charfn_noref(half, 1.3, a, b);
        CHECK(std::abs(v - interior_charfn_noref(half, 1.3, b, a)) < 1e-14);
        CHECK(std::abs(v - interior_charfn_noref(half, 1.3, -a, b)) < 1e-14);
    }

    const auto params = mp(1.0, 1.0, 0.7, 0.3);
    const auto [re, im] = empirical_charfn(params, 1.0, 10000000, 46, [](const SimOutcome& o) {
        return PhaseSample{0.8 * o.final.x - 0.3 * o.final.y, true};
    });
    const Complex closed = interior_charfn_noref(params, 1.0, 0.8, -0.3);
    CHECK(within(re, closed.real()));
    CHECK(within(im, closed.imag()));
}

TEST_CASE("hydrodynamic coefficient") {
    CHECK(hydro_coeff(0.5, 0.5).D == 0.5);
    CHECK(rel(hydro_coeff(1.0 / 3.0, 1.0 / 3.0).D, 0.375) < 1e-15);
    CHECK(hydro_coeff(0.2, 0.5).D == hydro_coeff(0.5, 0.2).D);
    for (double p : {0.0, 0.2, 0.5, 0.8}) {
        for (double q : {0.0, 0.1, 0.2}) {
            if (p + q > 1.0) continue;
            CHECK(hydro_coeff(p, q).D > 0.0);
            CHECK(hydro_coeff(p, q).D <= 0.5 + 1e-15);
        }
    }
}

TEST_CASE("joint hydrodynamic limit") {
    const auto params = mp(1.0, 1.0, 0.6, 0.2);
    const double t = 2.0;
    const auto lim = joint_hydro_limit(params, t, 1.0, 0.0);
    const double D = hydro_coeff(0.6, 0.2).D;
    CHECK(rel(lim.y_density, 1.0 / std::sqrt(4.0 * std::numbers::pi * D * t)) < 1e-14);
    CHECK(lim.s_star == 1.0);
    CHECK(rel(lim.variance, 2.0 * D * t) < 1e-14);
    const double mass = integrate([&](double y) { return joint_hydro_limit(params, t, 1.0, y).y_density; },
                                  -40.0, 40.0);
    CHECK(rel(mass, 1.0) < 1e-12);

    // t (2 - p - q) / (2 ((1-p)^2 + (1-q)^2)) = 2 D t in exact arithmetic.
    using R = boost::rational<long long>;
    for (auto [p, q] : std::vector<std::pair<R, R>>{
             {R(1, 2), R(1, 2)}, {R(3, 5), R(1, 5)}, {R(1, 3), R(1, 3)}, {R(2, 7), R(1, 9)}}) {
        const R a = 1 - p;
        const R b = 1 - q;
        const R tt(3, 2);
        const R limit_variance = tt * (2 - p - q) / (2 * (a * a + b * b));
        const R coeff = R(1, 4) * (a + b) / (a * a + b * b);
        CHECK(limit_variance == 2 * coeff * tt);
    }
}

TEST_CASE("occupation time endpoints and density") {
    const auto params = mp(1.0, 1.0, 0.3, 0.3);
    CHECK(t_endpoint_mass(params, 0.0) == 0.5);
    CHECK(rel(t_endpoint_mass(mp(1.0, 1.0, 0.4, 0.6), 1.0), std::exp(-1.0) / 2.0) < 1e-15);
    const double t = 1.5;
    CHECK_THROWS_AS(t_density(params, t, 0.0), DomainError);
    CHECK_THROWS_AS(t_density(params, t, t), DomainError);
    for (double s : {0.1, 0.4, 0.7}) {
        CHECK(rel(t_density(params, t, s), t_density(params, t, t - s)) < 1e-14);
    }
    const double integral = integrate_open([&](double s) { return t_density(params, t, s); }, 0.0, t);
    CHECK(rel(integral, -std::expm1(-0.6 * t)) < 1e-8);

    const auto freq = estimate_event(params, 1.0, 1000000, 47, [](const SimOutcome& o) {
        return !o.final.history.ever_vertical();
    });
    CHECK(within(freq, t_endpoint_mass(params, 1.0)));
}

TEST_CASE("occupation time density histogram") {
    const auto params = mp(1.0, 1.0, 0.3, 0.3);
    const double t = 1.0;
    const Histogram hist = simulate_histogram(
        params, t, McRun{10000000, 48, 0},
        [t](const SimOutcome& o) -> std::optional<double> {
            if (!o.final.history.ever_vertical() || !o.final.history.ever_horizontal()) {
                return std::nullopt;
            }
            return o.t_vertical;
        },
        0.0, t, 40);
    const auto cmp = compare_histogram(hist, [&](double s) { return t_density(params, t, s); });
    CHECK(cmp.max_abs_z <= 5.0);
}

TEST_CASE("occupation time characteristic function") {
    const auto params = mp(1.0, 1.0, 0.3, 0.3);
    const double t = 1.0;
    CHECK(std::abs(t_charfn(params, t, 0.0) - Complex(1.0, 0.0)) < 1e-15);
    const double mass = t_endpoint_mass(params, t);
    for (double alpha : {0.5, 1.0, 2.0, 5.0}) {
        const Complex numeric =
            integrate_fourier([&](double s) { return t_density(params, t, s); }, alpha, 0.0, t) +
            mass * (1.0 + std::exp(Complex(0.0, alpha * t)));
        CHECK(std::abs(numeric - t_charfn(params, t, alpha)) < 1e-6);
        CHECK(std::abs(t_charfn(params, t, alpha)) <= 1.0);
    }
    const double branch = 2.0 * 0.6;
    CHECK(std::abs(t_charfn(params, t, branch) - t_charfn(params, t, branch + 1e-9)) < 1e-8);
}

TEST_CASE("oblique side without reflection") {
    for (double p : {0.2, 0.5, 0.7}) {
        const auto params = mp(1.0, 1.0, p, 1.0 - p);
        CHECK(oblique_prob_noref(params, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
        for (double t : {0.3, 1.0, 2.5}) {
            CHECK(rel(oblique_prob_noref(params, t), oracle::oblique_prob_direct(1.0, p, t)) < 1e-13);
            CHECK(rel(oblique_charfn_noref(params, t, 0.0).real(), oblique_prob_noref(params, t)) <
                  1e-13);
            CHECK(std::abs(oblique_charfn_noref(params, t, 0.0).imag()) < 1e-15);
        }
    }
    const auto half = mp(1.0, 1.0, 0.5, 0.5);
    CHECK(rel(oblique_prob_noref(half, 1.0), oblique_prob_pq(half, 1.0)) < 1e-13);
    CHECK_THROWS_AS(oblique_prob_noref(mp(1.0, 1.0, 0.0, 1.0), 1.0), DomainError);
    CHECK_THROWS_AS(oblique_prob_noref(mp(1.0, 1.0, 1.0, 0.0), 1.0), DomainError);
    CHECK_THROWS_AS(oblique_prob_noref(mp(1.0, 1.0, 0.3, 0.3), 1.0), UnsupportedRegime);

    const auto params = mp(1.0, 1.0, 0.7, 0.3);
    const double t = 1.0;
    const double integral =
        integrate_open([&](double s) { return oblique_density_noref(params, t, s); }, 0.0, t);
    CHECK(rel(integral + 0.75 * std::exp(-t), oblique_prob_noref(params, t)) < 1e-8);
    for (double alpha : {0.5, 1.0, 3.0}) {
        CHECK(std::abs(oblique_charfn_noref(params, t, alpha)) <= oblique_prob_noref(params, t));
    }

    const auto freq = estimate_event(params, t, 1000000, 49, [](const SimOutcome& o) {
        return !o.final.history.visited_dir(3);
    });
    CHECK(within(freq, oblique_prob_noref(params, t)));
}

TEST_CASE("oblique density and characteristic function against Monte Carlo") {
    const auto params = mp(1.0, 1.0, 0.7, 0.3);
    const double t = 1.0;
    const Histogram hist = simulate_histogram(
        params, t, McRun{10000000, 50, 0},
        [](const SimOutcome& o) -> std::optional<double> {
            const auto& h = o.final.history;
            if (h.visited_dir(3) || !h.ever_vertical() || !h.ever_horizontal()) return std::nullopt;
            return o.t_vertical;
        },
        0.0, t, 40);
    const auto cmp =
        compare_histogram(hist, [&](double s) { return oblique_density_noref(params, t, s); });
    CHECK(cmp.max_abs_z <= 5.0);

    for (double alpha : {0.5, 1.0, 2.0}) {
        const auto [re, im] = empirical_charfn(params, t, 10000000, 51, [alpha](const SimOutcome& o) {
            return PhaseSample{alpha * o.t_vertical, !o.final.history.visited_dir(3)};
        });
        const Complex closed = oblique_charfn_noref(params, t, alpha);
        CHECK(within(re, closed.real()));
        CHECK(within(im, closed.imag()));
    }
}

TEST_CASE("oblique side with p = q") {
    const auto params = mp(1.0, 1.0, 0.3, 0.3);
    for (double t : {0.5, 1.0, 2.0}) {
        CHECK(rel(oblique_charfn_pq(params, t, 0.0).real(), oblique_prob_pq(params, t)) < 1e-15);
    }
    CHECK(rel(oblique_prob_pq(params, 0.0), 0.75) < 1e-15);
    CHECK_THROWS_AS(oblique_charfn_pq(mp(1.0, 1.0, 0.3, 0.4), 1.0, 0.0), UnsupportedRegime);
    const auto freq = estimate_event(params, 1.0, 1000000, 52, [](const SimOutcome& o) {
        return !o.final.history.visited_dir(3);
    });
    CHECK(within(freq, oblique_prob_pq(params, 1.0)));

    const auto [re, im] = empirical_charfn(params, 1.0, 1000000, 53, [](const SimOutcome& o) {
        return PhaseSample{1.5 * o.t_vertical, !o.final.history.visited_dir(3)};
    });
    const Complex closed = oblique_charfn_pq(params, 1.0, 1.5);
    CHECK(within(re, closed.real()));
    CHECK(within(im, closed.imag()));
}

TEST_CASE("vertical side") {
    const auto params = mp(1.0, 1.0, 0.2, 0.3);
    const double t = 1.0;
    for (double w : {-0.9, -0.2, 0.0, 0.5}) {
        CHECK(vertical_side_density(params, t, w) == diag_density(params, t, w));
    }
    const double integral =
        integrate_open([&](double y) { return vertical_side_density(params, t, y); }, -1.0, 1.0);
    CHECK(rel(integral + 2.0 * std::exp(-t) / 4.0, t_endpoint_mass(params, t)) < 1e-8);
    CHECK(rel(vertical_side_charfn(params, t, 0.0).real(), t_endpoint_mass(params, t)) < 1e-14);
}

TEST_CASE("densities are nonnegative and characteristic functions bounded") {
    int checked = 0;
    for (auto [p, q] : std::vector<std::pair<double, double>>{
             {0.1, 0.1}, {0.3, 0.4}, {0.05, 0.9}, {0.6, 0.2}, {0.45, 0.45}}) {
        for (double lambda : {0.3, 2.0}) {
            for (double c : {0.5, 2.0}) {
                const auto params = mp(lambda, c, p, q);
                for (double t : {0.2, 1.0, 3.0}) {
                    const double ct = c * t;
                    for (int k = 1; k < 10; ++k) {
                        const double f = -1.0 + 2.0 * k / 10.0;
                        const double s = t * k / 10.0;
                        CHECK(side_density(params, t, f * ct) >= 0.0);
                        CHECK(diag_density(params, t, f * ct) >= 0.0);
                        CHECK(t_density(params, t, s) >= 0.0);
                        checked += 3;
                    }
                    for (double alpha : {0.3, 1.0, 4.0}) {
                        CHECK(std::abs(side_charfn(params, t, alpha)) <=
                              side_charfn(params, t, 0.0).real() + 1e-15);
                        CHECK(std::abs(diag_charfn(params, t, alpha)) <=
                              diag_charfn(params, t, 0.0).real() + 1e-15);
                        CHECK(std::abs(t_charfn(params, t, alpha)) <= 1.0 + 1e-15);
                    }
                }
            }
        }
    }
    CHECK(checked >= 1000);
}
