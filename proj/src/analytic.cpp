#include "orthoplanar/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "orthoplanar/bessel.hpp"

namespace orthoplanar {
namespace {

constexpr double kImagResidue = 1e-10;

void require_time(double t, const char* fn) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        std::ostringstream msg;
        msg << fn << ": time must be finite and >= 0, got " << t;
        throw DomainError(msg.str());
    }
}

void require_open_support(double w, double half_width, const char* fn) {
    if (!(std::abs(w) < half_width)) {
        std::ostringstream msg;
        msg << fn << ": argument " << w << " outside the open support (-" << half_width
            << ", " << half_width << ")";
        throw DomainError(msg.str());
    }
}

void require_open_interval(double s, double t, const char* fn) {
    if (!(s > 0.0 && s < t)) {
        std::ostringstream msg;
        msg << fn << ": s=" << s << " outside (0, " << t << ")";
        throw DomainError(msg.str());
    }
}

void require_no_reflection(const ModelParams& params, const char* fn) {
    if (!no_reflection(params)) {
        std::ostringstream msg;
        msg << fn << ": requires p + q = 1, got p + q = " << params.p() + params.q();
        throw UnsupportedRegime(msg.str());
    }
}

void require_reflection(const ModelParams& params, const char* fn) {
    if (no_reflection(params)) {
        std::ostringstream msg;
        msg << fn << ": density exists only for p + q < 1";
        throw UnsupportedRegime(msg.str());
    }
}

// e^{shift} cosh(z) and e^{shift} sinhc(z) without forming e^{shift} and
// cosh(z) separately, so large lambda t does not overflow.
Complex exp_cosh(Complex z, double shift) {
    return 0.5 * (std::exp(shift + z) + std::exp(shift - z));
}

Complex exp_sinhc(Complex z, double shift) {
    if (std::abs(z) < 0.5) return std::exp(shift) * sinhc(z);
    return 0.5 * (std::exp(shift + z) - std::exp(shift - z)) / z;
}

double exp_cosh(double x, double shift) {
    return 0.5 * (std::exp(shift + x) + std::exp(shift - x));
}

double exp_sinhc(double x, double shift) {
    if (std::abs(x) < 0.5) return std::exp(shift) * sinhc(x);
    return 0.5 * (std::exp(shift + x) - std::exp(shift - x)) / x;
}

double real_part_checked(Complex value, const char* fn) {
    const double scale = std::max(1.0, std::abs(value.real()));
    if (std::abs(value.imag()) > kImagResidue * scale) {
        std::ostringstream msg;
        msg << fn << ": unexpected imaginary residue " << value.imag();
        throw DomainError(msg.str());
    }
    return value.real();
}

// e^{-lambda t}/4 [2 cosh(tS) + 2 a t sinhc(tS)], S = sqrt(radicand).
Complex two_exponential_charfn(double lambda, double t, double a, double radicand) {
    const Complex tS = t * std::sqrt(Complex(radicand, 0.0));
    const double shift = -lambda * t;
    return 0.25 * (2.0 * exp_cosh(tS, shift) + 2.0 * a * t * exp_sinhc(tS, shift));
}

// Kernel for telegraph-type densities on a segment of half width ct:
// (e^{-lambda t} / 4c) [A I0(K z) + d/dt I0(K z)], z = sqrt(c^2 t^2 - w^2).
double segment_density(double lambda, double c, double t, double w, double A, double K) {
    const double ct = c * t;
    const double z = std::sqrt((ct - w) * (ct + w));
    const double bracket = A * bessel_i0(K * z) + i0_dt_kernel(K, c, t, w);
    return std::exp(-lambda * t) / (4.0 * c) * bracket;
}

}  // namespace

Complex sinhc(Complex z) {
    if (std::abs(z) < 0.5) {
        const Complex z2 = z * z;
        Complex term(1.0, 0.0);
        Complex sum = term;
        for (int k = 1; k <= 12; ++k) {
            term *= z2 / static_cast<double>((2 * k) * (2 * k + 1));
            sum += term;
        }
        return sum;
    }
    return std::sinh(z) / z;
}

double sinhc(double x) { return sinhc(Complex(x, 0.0)).real(); }

// --- boundary --------------------------------------------------------------

double prob_boundary(const ModelParams& params, double t) {
    require_time(t, "prob_boundary");
    const double lt = params.lambda() * t;
    const double x = lt * std::sqrt(params.p() * params.q());
    return 2.0 * exp_cosh(x, -lt) + lt * (params.p() + params.q()) * exp_sinhc(x, -lt) -
           std::exp(-lt);
}

double prob_side_interior(const ModelParams& params, double t) {
    require_time(t, "prob_side_interior");
    const double lt = params.lambda() * t;
    const double x = lt * std::sqrt(params.p() * params.q());
    // 2 cosh(x) - 2 = 4 sinh^2(x/2)
    const double half = std::sinh(0.5 * x);
    return 0.25 * (4.0 * half * half * std::exp(-lt) +
                   lt * (params.p() + params.q()) * exp_sinhc(x, -lt));
}

double side_density(const ModelParams& params, double t, double eta) {
    require_time(t, "side_density");
    require_open_support(eta, params.c() * t, "side_density");
    const double lambda = params.lambda();
    const double K = lambda / params.c() * std::sqrt(params.p() * params.q());
    return segment_density(lambda, params.c(), t, eta, 0.5 * lambda * (params.p() + params.q()),
                           K);
}

Complex side_charfn(const ModelParams& params, double t, double alpha) {
    require_time(t, "side_charfn");
    const double lambda = params.lambda();
    const double ac = alpha * params.c();
    const double radicand = lambda * lambda * params.p() * params.q() - ac * ac;
    const Complex value = two_exponential_charfn(
        lambda, t, 0.5 * lambda * (params.p() + params.q()), radicand);
    return {real_part_checked(value, "side_charfn"), 0.0};
}

// --- diagonals -------------------------------------------------------------

double prob_diagonals(const ModelParams& params, double t) {
    require_time(t, "prob_diagonals");
    return std::exp(-params.lambda() * (params.p() + params.q()) * t);
}

double prob_diag_interior(const ModelParams& params, double t) {
    require_time(t, "prob_diag_interior");
    const double lt = params.lambda() * t;
    return 0.5 * std::exp(-lt) * std::expm1(lt * params.reflect());
}

double diag_density(const ModelParams& params, double t, double x) {
    require_time(t, "diag_density");
    require_reflection(params, "diag_density");
    require_open_support(x, params.c() * t, "diag_density");
    const double lr = params.lambda() * params.reflect();
    return segment_density(params.lambda(), params.c(), t, x, lr, lr / params.c());
}

Complex diag_charfn(const ModelParams& params, double t, double alpha) {
    require_time(t, "diag_charfn");
    const double lr = params.lambda() * params.reflect();
    const double ac = alpha * params.c();
    const Complex value = two_exponential_charfn(params.lambda(), t, lr, lr * lr - ac * ac);
    return {real_part_checked(value, "diag_charfn"), 0.0};
}

// --- interior, p + q = 1 ---------------------------------------------------

namespace {

struct InteriorRoots {
    Complex A;
    Complex B;
};

InteriorRoots interior_roots(double lambda, double c, double p, double alpha, double beta) {
    const double sum_sq = alpha * alpha + beta * beta;
    const double l2 = lambda * lambda;
    const double b0 = 4.0 * l2 * p * (1.0 - p) - c * c * sum_sq;
    const double e = c * c * c * c * alpha * alpha * beta * beta -
                     l2 * l2 * (2.0 * p - 1.0) * (2.0 * p - 1.0);
    const Complex inner = std::sqrt(Complex(e, 0.0));
    return {0.5 * std::sqrt(b0 + 2.0 * inner), 0.5 * std::sqrt(b0 - 2.0 * inner)};
}

// [X,Y]G = sum_k t^{2k+1}/(2k+1)! h_{k-1}(X, Y), h the complete homogeneous
// polynomial; used when |X| t^2 and |Y| t^2 are small.
Complex dd_sinhc_series(Complex X, Complex Y, double t) {
    const double t2 = t * t;
    Complex sum(0.0, 0.0);
    Complex h(1.0, 0.0);   // h_{k-1}(X, Y)
    Complex xp(1.0, 0.0);  // X^{k-1}
    double g = t * t2 / 6.0;
    for (int k = 1; k <= 20; ++k) {
        sum += g * h;
        xp *= X;
        h = h * Y + xp;
        g *= t2 / static_cast<double>((2 * k + 2) * (2 * k + 3));
    }
    return sum;
}

// With X = (A+B)^2, Y = (A-B)^2, C(x) = cosh(t sqrt x), G(x) = t sinhc(t sqrt x):
// u = e^{-lt} {C(X) + l G(X) + (M - 2X)/2 [X,Y]C + (N - l X) [X,Y]G},
// [X,Y] the divided difference. X - Y = 4AB, so [X,Y]C = (t^2/2) sinhc(tA) sinhc(tB),
// while [X,Y]G comes from a series near X = Y = 0 and otherwise from whichever
// of its two closed forms has the larger denominator (4AB or 2(A^2 - B^2)).
Complex interior_formula(const InteriorRoots& r, double lambda, double c, double t,
                         double alpha, double beta) {
    const double csum = c * c * (alpha * alpha + beta * beta);
    const double M = 2.0 * lambda * lambda - csum;
    const double N = lambda * lambda * lambda - lambda * csum;
    const Complex S = r.A + r.B;
    const Complex D = r.A - r.B;
    const Complex X = S * S;
    const double shift = -lambda * t;
    const double half = 0.5 * shift;

    const Complex cx = exp_cosh(t * S, shift);
    const Complex gx = t * exp_sinhc(t * S, shift);
    const Complex dd_c = 0.5 * t * t * exp_sinhc(t * r.A, half) * exp_sinhc(t * r.B, half);

    const Complex four_ab = 4.0 * r.A * r.B;
    const Complex two_diff = 2.0 * (r.A * r.A - r.B * r.B);
    Complex dd_g;
    if ((std::norm(r.A) + std::norm(r.B)) * t * t < 1e-2) {
        dd_g = std::exp(shift) * dd_sinhc_series(X, D * D, t);
    } else if (std::abs(four_ab) >= std::abs(two_diff)) {
        dd_g = (gx - t * exp_sinhc(t * D, shift)) / four_ab;
    } else {
        dd_g = t *
               (exp_cosh(t * r.A, half) * exp_sinhc(t * r.B, half) -
                exp_cosh(t * r.B, half) * exp_sinhc(t * r.A, half)) /
               two_diff;
    }
    return cx + lambda * gx + 0.5 * (M - 2.0 * X) * dd_c + (N - lambda * X) * dd_g;
}

}  // namespace

Complex interior_charfn_noref(const ModelParams& params, double t, double alpha, double beta) {
    require_time(t, "interior_charfn_noref");
    require_no_reflection(params, "interior_charfn_noref");
    const double lambda = params.lambda();
    const double c = params.c();
    const double p = params.p();
    if (t == 0.0) return {1.0, 0.0};

    return interior_formula(interior_roots(lambda, c, p, alpha, beta), lambda, c, t, alpha,
                            beta);
}

// --- hydrodynamic limit ------------------------------------------------------

HydroCoeff hydro_coeff(double p, double q) {
    if (!(p >= 0.0) || !(q >= 0.0) || !(p + q <= 1.0)) {
        std::ostringstream msg;
        msg << "hydro_coeff: need p, q >= 0 and p + q <= 1 (p=" << p << ", q=" << q << ")";
        throw InvalidProbability(msg.str());
    }
    const double a = 1.0 - p;
    const double b = 1.0 - q;
    return {0.25 * (a + b) / (a * a + b * b)};
}

JointHydroLimit joint_hydro_limit(const ModelParams& params, double t, double s, double y) {
    (void)s;
    if (!(t > 0.0)) throw DomainError("joint_hydro_limit: t must be > 0");
    const double a = 1.0 - params.p();
    const double b = 1.0 - params.q();
    // y-density sqrt(k / (pi t)) exp(-k y^2 / t), k = (a^2 + b^2) / (a + b)
    const double k = (a * a + b * b) / (a + b);
    JointHydroLimit out;
    out.variance = t / (2.0 * k);
    out.y_density = std::sqrt(k / (std::numbers::pi * t)) * std::exp(-k * y * y / t);
    out.s_star = 0.5 * t;

    const double from_coeff = 2.0 * hydro_coeff(params.p(), params.q()).D * t;
    if (std::abs(out.variance - from_coeff) > 1e-13 * from_coeff) {
        throw ToleranceExceeded("joint_hydro_limit: variance disagrees with 2 D t");
    }
    return out;
}

// --- vertical occupation time --------------------------------------------------

double t_endpoint_mass(const ModelParams& params, double t) {
    require_time(t, "t_endpoint_mass");
    return 0.5 * std::exp(-params.lambda() * (params.p() + params.q()) * t);
}

double t_density(const ModelParams& params, double t, double s) {
    require_time(t, "t_density");
    require_open_interval(s, t, "t_density");
    // h = e^{-mu t} [mu I0(z) + (d/dt + d/ds / 2) I0(z)], z = 2 mu sqrt(s (t - s)),
    // where (d/dt + d/ds / 2) I0(z) = mu^2 t I1(z) / z.
    const double mu = params.lambda() * (params.p() + params.q());
    const double z = 2.0 * mu * std::sqrt(s * (t - s));
    return std::exp(-mu * t) *
           (mu * bessel_i0(z) + mu * mu * t * bessel_i1_over_x(z));
}

Complex t_charfn(const ModelParams& params, double t, double alpha) {
    require_time(t, "t_charfn");
    const double mu = params.lambda() * (params.p() + params.q());
    const Complex halfRt = 0.5 * t * std::sqrt(Complex(4.0 * mu * mu - alpha * alpha, 0.0));
    const double shift = -mu * t;
    const Complex phase = std::exp(Complex(0.0, 0.5 * alpha * t));
    return phase * (exp_cosh(halfRt, shift) + mu * t * exp_sinhc(halfRt, shift));
}

// --- oblique side --------------------------------------------------------------

namespace {

double require_oblique_noref(const ModelParams& params, const char* fn) {
    require_no_reflection(params, fn);
    const double p = params.p();
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << fn << ": requires 0 < p < 1 (cyclic limit not covered), got p=" << p;
        throw DomainError(msg.str());
    }
    return p * (1.0 - p);
}

}  // namespace

double oblique_prob_noref(const ModelParams& params, double t) {
    require_time(t, "oblique_prob_noref");
    const double pp = require_oblique_noref(params, "oblique_prob_noref");
    const double m = 2.0 * pp;
    const double lt = params.lambda() * t;
    const double x = lt * std::sqrt(m);
    // (e^{-lt}/8){(1+a)^2 e^x + (1-a)^2 e^{-x} - (2p-1)^2/(p(1-p))}, a = 1/sqrt(m)
    // = e^{-lt} {(1+1/m) cosh(x)/4 + lt sinhc(x)/2 - (2p-1)^2/(8p(1-p))}
    const double tail = (2.0 * params.p() - 1.0) * (2.0 * params.p() - 1.0) / (8.0 * pp);
    return 0.25 * (1.0 + 1.0 / m) * exp_cosh(x, -lt) + 0.5 * lt * exp_sinhc(x, -lt) -
           tail * std::exp(-lt);
}

double oblique_density_noref(const ModelParams& params, double t, double s) {
    require_time(t, "oblique_density_noref");
    const double pp = require_oblique_noref(params, "oblique_density_noref");
    require_open_interval(s, t, "oblique_density_noref");
    // e^{-lt}[(l/2) I0 + (1 + 1/m)/4 d/dt I0 + 1/(4m) d/ds I0], m = 2p(1-p),
    // argument z = 2 nu sqrt(s(t-s)), nu = l sqrt(m). The derivative terms
    // combine to (l^2/2)(t - (1-m)s) I1(z)/z.
    const double lambda = params.lambda();
    const double m = 2.0 * pp;
    const double z = 2.0 * lambda * std::sqrt(m) * std::sqrt(s * (t - s));
    return std::exp(-lambda * t) *
           (0.5 * lambda * bessel_i0(z) +
            0.5 * lambda * lambda * (t - (1.0 - m) * s) * bessel_i1_over_x(z));
}

Complex oblique_charfn_noref(const ModelParams& params, double t, double alpha) {
    require_time(t, "oblique_charfn_noref");
    const double pp = require_oblique_noref(params, "oblique_charfn_noref");
    const double lambda = params.lambda();
    const Complex ia(0.0, alpha);
    const double c1 = (1.0 + 2.0 * pp) / (16.0 * pp);
    const Complex c2 = (4.0 * pp * (2.0 * lambda + ia) - ia * (1.0 + 2.0 * pp)) / (16.0 * pp);
    const Complex halfRt =
        0.5 * t * std::sqrt(Complex(8.0 * lambda * lambda * pp - alpha * alpha, 0.0));
    const double shift = -lambda * t;
    const double p = params.p();
    const double tail = (2.0 * p - 1.0) * (2.0 * p - 1.0) / (8.0 * pp);
    const Complex phase = std::exp(0.5 * t * ia);
    return phase * (2.0 * c1 * exp_cosh(halfRt, shift) + c2 * t * exp_sinhc(halfRt, shift)) -
           tail * std::exp(shift);
}

Complex oblique_charfn_pq(const ModelParams& params, double t, double alpha) {
    require_time(t, "oblique_charfn_pq");
    if (!symmetric_turns(params)) {
        throw UnsupportedRegime("oblique_charfn_pq: requires p = q");
    }
    const double lambda = params.lambda();
    const double p = params.p();
    const Complex ia(0.0, alpha);
    const Complex radicand(lambda * lambda * (12.0 * p * p - 4.0 * p + 1.0) - alpha * alpha,
                           -2.0 * alpha * lambda * (1.0 - 2.0 * p));
    const Complex halfQt = 0.5 * t * std::sqrt(radicand);
    // exp(t (i alpha - lambda (1 + 2p)) / 2): modulus part goes into the shift.
    const double shift = -0.5 * lambda * (1.0 + 2.0 * p) * t;
    const Complex phase = std::exp(0.5 * t * ia);
    const Complex X = lambda - ia + 6.0 * lambda * p;
    return phase * (0.75 * exp_cosh(halfQt, shift) + X / 8.0 * t * exp_sinhc(halfQt, shift));
}

double oblique_prob_pq(const ModelParams& params, double t) {
    return real_part_checked(oblique_charfn_pq(params, t, 0.0), "oblique_prob_pq");
}

// --- vertical side -------------------------------------------------------------

double vertical_side_density(const ModelParams& params, double t, double y) {
    require_time(t, "vertical_side_density");
    require_reflection(params, "vertical_side_density");
    require_open_support(y, params.c() * t, "vertical_side_density");
    const double lr = params.lambda() * params.reflect();
    return segment_density(params.lambda(), params.c(), t, y, lr, lr / params.c());
}

Complex vertical_side_charfn(const ModelParams& params, double t, double beta) {
    require_time(t, "vertical_side_charfn");
    const double lr = params.lambda() * params.reflect();
    const double bc = beta * params.c();
    const Complex value = two_exponential_charfn(params.lambda(), t, lr, lr * lr - bc * bc);
    return {real_part_checked(value, "vertical_side_charfn"), 0.0};
}

}  // namespace orthoplanar
