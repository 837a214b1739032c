#pragma once

#include <complex>

#include "orthoplanar/core.hpp"

namespace orthoplanar {

using Complex = std::complex<double>;

// Closed-form laws of the planar motion with turn probabilities p (CCW),
// q (CW) and 1-p-q (reflection). Every function throws DomainError for t < 0.
//
// Expressions of the form (1 + a/S) e^{tS} + (1 - a/S) e^{-tS} are evaluated
// as 2 cosh(tS) + 2 a t sinhc(tS), which is an entire function of S^2; this
// removes both the branch ambiguity of S and the 0/0 at S = 0.

// --- boundary of the square |x| + |y| <= ct -------------------------------

/// P((X, Y) on the boundary), vertices included.
double prob_boundary(const ModelParams& params, double t);

/// P(X + Y = ct, |X - Y| < ct): one side, vertices excluded.
double prob_side_interior(const ModelParams& params, double t);

/// Density of eta = X - Y on the side X + Y = ct, |eta| < ct.
double side_density(const ModelParams& params, double t, double eta);

/// E[exp(i alpha (X - Y)) 1{X + Y = ct}]; includes the two vertices of the
/// side, each carrying mass e^{-lambda t}/4.
Complex side_charfn(const ModelParams& params, double t, double alpha);

// --- diagonals x = 0 or y = 0 ---------------------------------------------

/// P((X, Y) on either diagonal), vertices included.
double prob_diagonals(const ModelParams& params, double t);

/// P(Y = 0, |X| < ct): interior of the horizontal diagonal.
double prob_diag_interior(const ModelParams& params, double t);

/// Density of X on {Y = 0}, |x| < ct. Throws UnsupportedRegime if p + q = 1.
double diag_density(const ModelParams& params, double t, double x);

/// E[exp(i alpha X) 1{Y = 0}], vertices (+-ct, 0) included.
Complex diag_charfn(const ModelParams& params, double t, double alpha);

// --- interior, no reflection -----------------------------------------------

/// Full characteristic function E[exp(i(alpha X + beta Y))] for p + q = 1.
/// Throws UnsupportedRegime otherwise.
Complex interior_charfn_noref(const ModelParams& params, double t, double alpha,
                              double beta);

// --- hydrodynamic limit ----------------------------------------------------

struct HydroCoeff {
    /// Diffusion coefficient of the limiting heat equation u_t = D Laplacian u.
    double D = 0.0;
};

HydroCoeff hydro_coeff(double p, double q);

/// Limit law of (T(t), Y(t)) for lambda, c -> infinity with lambda / c^2 -> 1:
/// Gaussian in y times a point mass at s = t/2.
struct JointHydroLimit {
    double y_density = 0.0;
    double variance = 0.0;
    double s_star = 0.0;
};

JointHydroLimit joint_hydro_limit(const ModelParams& params, double t, double s, double y);

// --- vertical occupation time T(t) ----------------------------------------

/// P(T = 0) = P(T = t).
double t_endpoint_mass(const ModelParams& params, double t);

/// Density of T(t) on (0, t).
double t_density(const ModelParams& params, double t, double s);

/// E[exp(i alpha T(t))].
Complex t_charfn(const ModelParams& params, double t, double alpha);

// --- (T, Y) on the oblique side y = c s -------------------------------------

/// P(Y = c T) for p + q = 1, 0 < p < 1.
double oblique_prob_noref(const ModelParams& params, double t);

/// Density of T on {Y = c T}, s in (0, t), for p + q = 1. Atoms: e^{-lambda t}/2
/// at s = 0 and e^{-lambda t}/4 at s = t.
double oblique_density_noref(const ModelParams& params, double t, double s);

/// E[exp(i alpha T) 1{Y = c T}] for p + q = 1.
Complex oblique_charfn_noref(const ModelParams& params, double t, double alpha);

/// E[exp(i alpha T) 1{Y = c T}] for p = q.
Complex oblique_charfn_pq(const ModelParams& params, double t, double alpha);

/// P(Y = c T) for p = q.
double oblique_prob_pq(const ModelParams& params, double t);

// --- (T, Y) on the vertical side s = t --------------------------------------

/// Density of Y on {T = t}; same law as the horizontal diagonal.
double vertical_side_density(const ModelParams& params, double t, double y);

/// E[exp(i beta Y) 1{T = t}].
Complex vertical_side_charfn(const ModelParams& params, double t, double beta);

// --- numerics shared with the verification harness -------------------------

/// sinh(z) / z, equal to 1 at z = 0.
Complex sinhc(Complex z);
double sinhc(double x);

}  // namespace orthoplanar
