#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "orthoplanar/core.hpp"

namespace orthoplanar {

/// One row of a verification report.
struct CheckResult {
    std::string check;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::string statistic;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    /// Informational rows never fail a run.
    bool gated = true;
    /// The identity does not apply to these parameters.
    bool skipped = false;
};

using Report = std::vector<CheckResult>;

nlohmann::ordered_json to_json(const Report& report);

/// Pretty-printed JSON array followed by a newline.
std::string report_json(const Report& report);

/// True iff every gated row passes.
bool report_passes(const Report& report);

/// Throws ToleranceExceeded naming the first failing gated row.
void enforce(const Report& report);

nlohmann::ordered_json params_json(const ModelParams& params, double t);

/// Integrals of each density plus its atoms against the closed-form masses,
/// 1e-8 relative.
Report quadrature_consistency(const ModelParams& params, double t);

/// Numerical Fourier transforms of density plus atoms against the closed-form
/// characteristic functions, 1e-6 absolute on real and imaginary parts.
Report fourier_consistency(const ModelParams& params, double t,
                           const std::vector<double>& alphas);

struct PdeGrid {
    /// Evaluation times as multiples of t.
    std::vector<double> time_factors{0.5, 0.75, 1.0, 1.25, 1.5};
    /// Spatial points as multiples of c t' (side, diagonal) or t' (occupation
    /// time, mapped to s = t' (1 + f) / 2).
    std::vector<double> space_factors{-0.8, -0.4, 0.0, 0.4, 0.8};
    /// Base step as a multiple of t'.
    double step = 1e-3;
};

/// Richardson-extrapolated central-difference residuals of the side,
/// diagonal and occupation-time densities, normalized by the largest term.
/// One row per equation holding the worst grid point; gate 1e-4.
Report pde_residuals(const ModelParams& params, double t, const PdeGrid& grid = {});

struct HydroOptions {
    std::vector<double> speeds{10.0, 20.0, 30.0};
    std::size_t n = 200000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    /// Survey mode reports every statistic ungated.
    bool strict = true;
};

/// Moments of (X, Y, T) at lambda = c^2 for each speed, compared with the
/// diffusion limit. Gates apply at the largest speed.
Report hydro_convergence(double p, double q, double t, const HydroOptions& options);

struct McOptions {
    std::size_t n = 1000000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

/// Event frequencies against the closed-form probabilities, 4 stderr.
Report mc_events(const ModelParams& params, double t, const McOptions& options);

/// Empirical characteristic function against interior_charfn_noref at each
/// (alpha, beta), 4 stderr on real and imaginary parts.
Report mc_interior_charfn(const ModelParams& params, double t,
                          const std::vector<std::pair<double, double>>& points,
                          const McOptions& options);

struct SuiteOptions {
    std::uint64_t seed = 1;
    /// 0 keeps each suite's own default replication count.
    std::size_t n = 0;
    unsigned threads = 0;
    bool strict = true;
};

/// quadrature, fourier, pde, hydro, mc or all. Throws std::invalid_argument
/// for an unknown name.
Report run_suite(std::string_view name, const SuiteOptions& options);

/// Reference (p, q) grid at lambda = c = 1 and the evaluation times.
struct GridPoint {
    double p;
    double q;
};
const std::vector<GridPoint>& reference_grid();
const std::vector<double>& reference_times();
const std::vector<double>& reference_alphas();
const std::vector<std::pair<double, double>>& reference_charfn_points();

}  // namespace orthoplanar
