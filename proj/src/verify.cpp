#include "orthoplanar/verify.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "orthoplanar/analytic.hpp"
#include "orthoplanar/mc.hpp"
#include "orthoplanar/quadrature.hpp"
#include "orthoplanar/rng.hpp"

namespace orthoplanar {

using nlohmann::ordered_json;

const std::vector<GridPoint>& reference_grid() {
    static const std::vector<GridPoint> grid{
        {0.5, 0.5}, {0.3, 0.3}, {0.6, 0.2}, {0.25, 0.25}, {0.4, 0.1}};
    return grid;
}

const std::vector<double>& reference_times() {
    static const std::vector<double> times{0.5, 1.0, 2.0};
    return times;
}

const std::vector<double>& reference_alphas() {
    static const std::vector<double> alphas{0.5, 1.0, 2.0, 5.0};
    return alphas;
}

const std::vector<std::pair<double, double>>& reference_charfn_points() {
    static const std::vector<std::pair<double, double>> points{
        {0.8, -0.3}, {1.0, 0.0}, {0.0, 0.5}, {1.0, 1.0}, {2.0, -1.5}, {0.3, 0.3}};
    return points;
}

ordered_json to_json(const Report& report) {
    ordered_json out = ordered_json::array();
    for (const auto& row : report) {
        ordered_json j;
        j["check"] = row.check;
        j["params"] = row.params;
        j["statistic"] = row.statistic;
        j["expected"] = row.expected;
        j["observed"] = row.observed;
        j["tolerance"] = row.tolerance;
        j["pass"] = row.pass;
        if (!row.gated) j["gated"] = false;
        if (row.skipped) j["skipped"] = true;
        out.push_back(std::move(j));
    }
    return out;
}

std::string report_json(const Report& report) { return to_json(report).dump(2) + "\n"; }

bool report_passes(const Report& report) {
    return std::all_of(report.begin(), report.end(),
                       [](const CheckResult& row) { return row.pass || !row.gated; });
}

void enforce(const Report& report) {
    for (const auto& row : report) {
        if (row.pass || !row.gated) continue;
        std::ostringstream msg;
        msg << row.check << " " << row.statistic << " failed: expected " << row.expected
            << ", observed " << row.observed << ", tolerance " << row.tolerance << " at "
            << row.params.dump();
        throw ToleranceExceeded(msg.str());
    }
}

ordered_json params_json(const ModelParams& params, double t) {
    ordered_json j;
    j["lambda"] = params.lambda();
    j["c"] = params.c();
    j["p"] = params.p();
    j["q"] = params.q();
    j["t"] = t;
    return j;
}

namespace {

CheckResult relative_row(std::string check, ordered_json params, std::string statistic,
                         double expected, double observed, double tol) {
    CheckResult row{std::move(check), std::move(params), std::move(statistic), expected,
                    observed, tol};
    row.pass = std::abs(observed - expected) <= tol * std::max(std::abs(expected), DBL_MIN);
    return row;
}

CheckResult absolute_row(std::string check, ordered_json params, std::string statistic,
                         double expected, double observed, double tol) {
    CheckResult row{std::move(check), std::move(params), std::move(statistic), expected,
                    observed, tol};
    row.pass = std::abs(observed - expected) <= tol;
    return row;
}

CheckResult skipped_row(std::string check, ordered_json params, std::string statistic,
                        double tol) {
    CheckResult row{std::move(check), std::move(params), std::move(statistic), 0.0, 0.0, tol};
    row.pass = true;
    row.skipped = true;
    return row;
}

constexpr double kQuadratureTol = 1e-8;
constexpr double kFourierTol = 1e-6;
constexpr double kPdeTol = 1e-4;
constexpr double kStderrGate = 4.0;

}  // namespace

Report quadrature_consistency(const ModelParams& params, double t) {
    Report report;
    const ordered_json base = params_json(params, t);
    const double ct = params.c() * t;
    const double vertex = std::exp(-params.lambda() * t) / 4.0;
    const double mu = params.lambda() * (params.p() + params.q());
    const bool noref = no_reflection(params);

    report.push_back(relative_row(
        "quadrature.side", base, "integral of density", prob_side_interior(params, t),
        integrate_open([&](double w) { return side_density(params, t, w); }, -ct, ct),
        kQuadratureTol));

    // Without reflection the diagonal and vertical-side laws are atoms only.
    const double diag_integral =
        noref ? 0.0
              : integrate_open([&](double w) { return diag_density(params, t, w); }, -ct, ct);
    report.push_back(relative_row("quadrature.diagonal", base, "integral of density",
                                  prob_diag_interior(params, t), diag_integral,
                                  kQuadratureTol));

    report.push_back(relative_row(
        "quadrature.occupation", base, "integral of density", -std::expm1(-mu * t),
        integrate_open([&](double s) { return t_density(params, t, s); }, 0.0, t),
        kQuadratureTol));

    if (noref && params.p() > 0.0 && params.p() < 1.0) {
        const double integral = integrate_open(
            [&](double s) { return oblique_density_noref(params, t, s); }, 0.0, t);
        report.push_back(relative_row("quadrature.oblique", base, "integral plus atoms",
                                      oblique_prob_noref(params, t), integral + 3.0 * vertex,
                                      kQuadratureTol));
    } else {
        report.push_back(skipped_row("quadrature.oblique", base, "not applicable",
                                     kQuadratureTol));
    }

    const double vertical_integral =
        noref ? 0.0
              : integrate_open([&](double y) { return vertical_side_density(params, t, y); },
                               -ct, ct);
    report.push_back(relative_row("quadrature.vertical_side", base, "integral plus atoms",
                                  t_endpoint_mass(params, t), vertical_integral + 2.0 * vertex,
                                  kQuadratureTol));
    return report;
}

Report fourier_consistency(const ModelParams& params, double t,
                           const std::vector<double>& alphas) {
    Report report;
    const double ct = params.c() * t;
    const double vertex = std::exp(-params.lambda() * t) / 4.0;
    const bool noref = no_reflection(params);
    const bool oblique = noref && params.p() > 0.0 && params.p() < 1.0;
    const Complex i(0.0, 1.0);

    auto push = [&](const std::string& check, const ordered_json& where, Complex closed,
                    Complex numeric) {
        report.push_back(absolute_row(check, where, "re", closed.real(), numeric.real(),
                                      kFourierTol));
        report.push_back(absolute_row(check, where, "im", closed.imag(), numeric.imag(),
                                      kFourierTol));
    };

    for (double alpha : alphas) {
        ordered_json where = params_json(params, t);
        where["alpha"] = alpha;
        const double edge = 2.0 * vertex * std::cos(alpha * ct);

        push("fourier.side", where, side_charfn(params, t, alpha),
             integrate_fourier([&](double w) { return side_density(params, t, w); }, alpha,
                               -ct, ct) +
                 edge);

        const Complex diag =
            noref ? Complex(0.0, 0.0)
                  : integrate_fourier([&](double w) { return diag_density(params, t, w); },
                                      alpha, -ct, ct);
        push("fourier.diagonal", where, diag_charfn(params, t, alpha), diag + edge);

        const double mass = t_endpoint_mass(params, t);
        push("fourier.occupation", where, t_charfn(params, t, alpha),
             integrate_fourier([&](double s) { return t_density(params, t, s); }, alpha, 0.0,
                               t) +
                 mass * (1.0 + std::exp(i * alpha * t)));

        if (oblique) {
            push("fourier.oblique", where, oblique_charfn_noref(params, t, alpha),
                 integrate_fourier([&](double s) { return oblique_density_noref(params, t, s); },
                                   alpha, 0.0, t) +
                     vertex * (2.0 + std::exp(i * alpha * t)));
        } else {
            report.push_back(skipped_row("fourier.oblique", where, "not applicable",
                                         kFourierTol));
        }

        const Complex vertical =
            noref ? Complex(0.0, 0.0)
                  : integrate_fourier(
                        [&](double y) { return vertical_side_density(params, t, y); }, alpha,
                        -ct, ct);
        push("fourier.vertical_side", where, vertical_side_charfn(params, t, alpha),
             vertical + edge);
    }
    return report;
}

namespace {

using Field = std::function<double(double, double)>;

double richardson(const std::function<double(double)>& diff, double h) {
    const double coarse = diff(h);
    const double fine = diff(0.5 * h);
    return fine + (fine - coarse) / 3.0;
}

struct Derivatives {
    double f, ft, fw, ftt, fww, ftw;
};

Derivatives differentiate(const Field& f, double t, double w, double ht, double hw) {
    Derivatives d{};
    d.f = f(t, w);
    d.ft = richardson(
        [&](double k) { return (f(t + k * ht, w) - f(t - k * ht, w)) / (2.0 * k * ht); }, 1.0);
    d.fw = richardson(
        [&](double k) { return (f(t, w + k * hw) - f(t, w - k * hw)) / (2.0 * k * hw); }, 1.0);
    d.ftt = richardson(
        [&](double k) {
            return (f(t + k * ht, w) - 2.0 * d.f + f(t - k * ht, w)) / (k * k * ht * ht);
        },
        1.0);
    d.fww = richardson(
        [&](double k) {
            return (f(t, w + k * hw) - 2.0 * d.f + f(t, w - k * hw)) / (k * k * hw * hw);
        },
        1.0);
    d.ftw = richardson(
        [&](double k) {
            return (f(t + k * ht, w + k * hw) - f(t + k * ht, w - k * hw) -
                    f(t - k * ht, w + k * hw) + f(t - k * ht, w - k * hw)) /
                   (4.0 * k * k * ht * hw);
        },
        1.0);
    return d;
}

double normalized(std::initializer_list<double> terms) {
    double sum = 0.0;
    double scale = 0.0;
    for (double term : terms) {
        sum += term;
        scale = std::max(scale, std::abs(term));
    }
    return scale > 0.0 ? std::abs(sum) / scale : 0.0;
}

// Worst residual over the grid; `position` maps (t', factor) to the spatial
// coordinate and `spatial_step` gives its finite-difference step.
CheckResult pde_row(const std::string& check, const ModelParams& params, double t,
                    const PdeGrid& grid, const Field& f,
                    const std::function<double(double, double)>& position,
                    const std::function<double(double)>& spatial_step,
                    const std::function<double(const Derivatives&)>& residual) {
    double worst = 0.0;
    double worst_t = 0.0;
    double worst_w = 0.0;
    std::size_t points = 0;
    for (double tf : grid.time_factors) {
        const double tp = tf * t;
        for (double sf : grid.space_factors) {
            const double w = position(tp, sf);
            const Derivatives d = differentiate(f, tp, w, grid.step * tp, spatial_step(tp));
            const double r = residual(d);
            ++points;
            if (!(r <= worst)) {
                worst = r;
                worst_t = tp;
                worst_w = w;
            }
        }
    }
    ordered_json where = params_json(params, t);
    where["points"] = points;
    where["worst_t"] = worst_t;
    where["worst_coordinate"] = worst_w;
    CheckResult row{check, where, "max normalized residual", 0.0, worst, kPdeTol};
    row.pass = worst <= kPdeTol;
    return row;
}

}  // namespace

Report pde_residuals(const ModelParams& params, double t, const PdeGrid& grid) {
    Report report;
    const double lambda = params.lambda();
    const double c = params.c();
    const double p = params.p();
    const double q = params.q();

    auto light_cone = [&](double tp, double sf) { return sf * c * tp; };
    auto light_step = [&](double tp) { return grid.step * c * tp; };

    report.push_back(pde_row(
        "pde.side", params, t, grid,
        [&](double tp, double w) { return side_density(params, tp, w); }, light_cone,
        light_step, [&](const Derivatives& d) {
            return normalized({d.ftt, 2.0 * lambda * d.ft, -c * c * d.fww,
                               lambda * lambda * (1.0 - p * q) * d.f});
        }));

    if (no_reflection(params)) {
        report.push_back(
            skipped_row("pde.diagonal", params_json(params, t), "not applicable", kPdeTol));
    } else {
        report.push_back(pde_row(
            "pde.diagonal", params, t, grid,
            [&](double tp, double w) { return diag_density(params, tp, w); }, light_cone,
            light_step, [&](const Derivatives& d) {
                return normalized({d.ftt, 2.0 * lambda * d.ft, -c * c * d.fww,
                                   lambda * lambda * (p + q) * (2.0 - p - q) * d.f});
            }));
    }

    const double mu = lambda * (p + q);
    report.push_back(pde_row(
        "pde.occupation", params, t, grid,
        [&](double tp, double s) { return t_density(params, tp, s); },
        [](double tp, double sf) { return 0.5 * tp * (1.0 + sf); },
        [&](double tp) { return grid.step * tp; },
        [&](const Derivatives& d) {
            return normalized({d.ftt, d.ftw, 2.0 * mu * d.ft, mu * d.fw});
        }));
    return report;
}

namespace {

struct HydroMoments {
    double var_x, var_y, corr, skew_y, kurt_y, mean_T, var_T;
};

HydroMoments hydro_moments(const ModelParams& params, double t, const McRun& run) {
    const auto s = accumulate(params, t, run, 9,
                              [t](const SimOutcome& o, std::span<double> out) {
                                  const double x = o.final.x;
                                  const double y = o.final.y;
                                  const double u = o.t_vertical / t;
                                  out[0] = x;
                                  out[1] = x * x;
                                  out[2] = y;
                                  out[3] = y * y;
                                  out[4] = x * y;
                                  out[5] = y * y * y;
                                  out[6] = y * y * y * y;
                                  out[7] = u;
                                  out[8] = u * u;
                              });
    const double n = static_cast<double>(run.n);
    const double mx = s[0] / n;
    const double my = s[2] / n;
    const double ey2 = s[3] / n;
    const double ey3 = s[5] / n;
    const double ey4 = s[6] / n;
    HydroMoments m{};
    m.var_x = s[1] / n - mx * mx;
    m.var_y = ey2 - my * my;
    m.corr = (s[4] / n - mx * my) / std::sqrt(m.var_x * m.var_y);
    const double m3 = ey3 - 3.0 * my * ey2 + 2.0 * my * my * my;
    const double m4 = ey4 - 4.0 * my * ey3 + 6.0 * my * my * ey2 - 3.0 * my * my * my * my;
    m.skew_y = m3 / std::pow(m.var_y, 1.5);
    m.kurt_y = m4 / (m.var_y * m.var_y);
    m.mean_T = s[7] / n;
    m.var_T = s[8] / n - m.mean_T * m.mean_T;
    return m;
}

}  // namespace

Report hydro_convergence(double p, double q, double t, const HydroOptions& options) {
    Report report;
    const double D = hydro_coeff(p, q).D;
    const double limit_var = 2.0 * D * t;
    const double top = options.speeds.empty()
                           ? 0.0
                           : *std::max_element(options.speeds.begin(), options.speeds.end());

    std::vector<double> var_T;
    for (std::size_t k = 0; k < options.speeds.size(); ++k) {
        const double c = options.speeds[k];
        const ModelParams params = validate_params(c * c, c, p, q);
        const std::uint64_t seed = RandomStream::for_replication(options.seed, k)();
        const HydroMoments m = hydro_moments(params, t, McRun{options.n, seed, options.threads});
        var_T.push_back(m.var_T);

        ordered_json where = params_json(params, t);
        where["n"] = options.n;
        const bool gated = options.strict && c == top;
        auto add = [&](CheckResult row) {
            row.gated = gated;
            report.push_back(std::move(row));
        };
        add(relative_row("hydro.var_x", where, "Var(X) vs 2Dt", limit_var, m.var_x, 0.05));
        add(relative_row("hydro.var_y", where, "Var(Y) vs 2Dt", limit_var, m.var_y, 0.05));
        add(absolute_row("hydro.mean_T", where, "mean of T/t", 0.5, m.mean_T, 0.01));
        add(absolute_row("hydro.corr", where, "corr(X, Y)", 0.0, m.corr, 0.02));
        add(absolute_row("hydro.skew_y", where, "skewness of Y", 0.0, m.skew_y, 0.1));
        add(absolute_row("hydro.kurt_y", where, "kurtosis of Y", 3.0, m.kurt_y, 0.1));
        CheckResult var_row{"hydro.var_T", where, "Var(T/t)", 0.0, m.var_T, 0.0};
        var_row.gated = false;
        report.push_back(var_row);
    }

    ordered_json where;
    where["p"] = p;
    where["q"] = q;
    where["t"] = t;
    where["speeds"] = options.speeds;
    where["n"] = options.n;
    if (var_T.size() >= 2) {
        double worst = 0.0;
        for (std::size_t k = 1; k < var_T.size(); ++k) {
            worst = std::max(worst, var_T[k] / var_T[k - 1]);
        }
        CheckResult row{"hydro.var_T_decreasing", where, "max ratio of successive Var(T/t)",
                        0.0, worst, 1.0};
        row.pass = worst < 1.0;
        row.gated = options.strict;
        report.push_back(row);
    }
    CheckResult size{"hydro.sample_size", where, "replications", 1e5,
                     static_cast<double>(options.n), 0.0};
    size.pass = options.n >= 100000;
    size.gated = options.strict;
    report.push_back(size);
    return report;
}

namespace {

CheckResult stderr_row(std::string check, ordered_json where, std::string statistic,
                       double expected, const McEstimate& est) {
    CheckResult row{std::move(check), std::move(where), std::move(statistic), expected,
                    est.mean, kStderrGate * est.std_error};
    row.pass = std::abs(est.mean - expected) <= row.tolerance;
    return row;
}

bool on_boundary(const SimOutcome& o) {
    return o.region.kind == RegionKind::Vertex || o.region.kind == RegionKind::SideInterior;
}

bool on_diagonals(const SimOutcome& o) {
    return o.region.kind == RegionKind::Vertex || o.region.kind == RegionKind::DiagonalInterior;
}

}  // namespace

Report mc_events(const ModelParams& params, double t, const McOptions& options) {
    const bool noref = no_reflection(params) && params.p() > 0.0 && params.p() < 1.0;
    const bool sym = symmetric_turns(params);
    const std::vector<EventPredicate> events{
        on_boundary,
        on_diagonals,
        [](const SimOutcome& o) { return !o.final.history.ever_vertical(); },
        [](const SimOutcome& o) { return !o.final.history.ever_horizontal(); },
        [](const SimOutcome& o) { return !o.final.history.visited_dir(3); },
    };
    const auto est =
        estimate_events(params, t, McRun{options.n, options.seed, options.threads}, events);

    ordered_json where = params_json(params, t);
    where["n"] = options.n;
    Report report;
    report.push_back(stderr_row("mc.boundary", where, "frequency", prob_boundary(params, t),
                                est[0]));
    report.push_back(stderr_row("mc.diagonals", where, "frequency", prob_diagonals(params, t),
                                est[1]));
    report.push_back(stderr_row("mc.T_zero", where, "frequency", t_endpoint_mass(params, t),
                                est[2]));
    report.push_back(stderr_row("mc.T_full", where, "frequency", t_endpoint_mass(params, t),
                                est[3]));
    if (noref) {
        report.push_back(stderr_row("mc.oblique_noref", where, "frequency",
                                    oblique_prob_noref(params, t), est[4]));
    }
    if (sym) {
        report.push_back(stderr_row("mc.oblique_pq", where, "frequency",
                                    oblique_prob_pq(params, t), est[4]));
    }
    if (!noref && !sym) {
        report.push_back(skipped_row("mc.oblique", where, "not applicable", 0.0));
    }
    return report;
}

Report mc_interior_charfn(const ModelParams& params, double t,
                          const std::vector<std::pair<double, double>>& points,
                          const McOptions& options) {
    const std::size_t k = points.size();
    const auto s = accumulate(params, t, McRun{options.n, options.seed, options.threads}, 4 * k,
                              [&](const SimOutcome& o, std::span<double> out) {
                                  for (std::size_t j = 0; j < k; ++j) {
                                      const double phase = points[j].first * o.final.x +
                                                           points[j].second * o.final.y;
                                      const double re = std::cos(phase);
                                      const double im = std::sin(phase);
                                      out[4 * j] = re;
                                      out[4 * j + 1] = re * re;
                                      out[4 * j + 2] = im;
                                      out[4 * j + 3] = im * im;
                                  }
                              });
    Report report;
    for (std::size_t j = 0; j < k; ++j) {
        const auto [alpha, beta] = points[j];
        const Complex closed = interior_charfn_noref(params, t, alpha, beta);
        ordered_json where = params_json(params, t);
        where["alpha"] = alpha;
        where["beta"] = beta;
        where["n"] = options.n;
        report.push_back(stderr_row("mc.interior_charfn", where, "re", closed.real(),
                                    moment_estimate(s[4 * j], s[4 * j + 1], options.n)));
        report.push_back(stderr_row("mc.interior_charfn", where, "im", closed.imag(),
                                    moment_estimate(s[4 * j + 2], s[4 * j + 3], options.n)));
    }
    return report;
}

namespace {

void append(Report& into, Report&& from) {
    into.insert(into.end(), std::make_move_iterator(from.begin()),
                std::make_move_iterator(from.end()));
}

ModelParams unit_params(const GridPoint& g) { return validate_params(1.0, 1.0, g.p, g.q); }

}  // namespace

Report run_suite(std::string_view name, const SuiteOptions& options) {
    const bool all = name == "all";
    if (!all && name != "quadrature" && name != "fourier" && name != "pde" && name != "hydro" &&
        name != "mc") {
        throw std::invalid_argument("unknown suite: " + std::string(name));
    }
    // Independent seed per stochastic check, fixed by its position.
    std::uint64_t counter = 0;
    auto next_seed = [&] { return RandomStream::for_replication(options.seed, counter++)(); };

    Report report;
    if (all || name == "quadrature") {
        for (const auto& g : reference_grid()) {
            for (double t : reference_times()) {
                append(report, quadrature_consistency(unit_params(g), t));
            }
        }
    }
    if (all || name == "fourier") {
        for (const auto& g : reference_grid()) {
            for (double t : reference_times()) {
                append(report, fourier_consistency(unit_params(g), t, reference_alphas()));
            }
        }
    }
    if (all || name == "pde") {
        std::vector<GridPoint> grid = reference_grid();
        grid.push_back({0.3, 0.5});
        grid.push_back({0.2, 0.3});
        for (const auto& g : grid) {
            for (double t : reference_times()) {
                append(report, pde_residuals(unit_params(g), t));
            }
        }
    }
    if (all || name == "mc") {
        for (const auto& g : reference_grid()) {
            for (double t : reference_times()) {
                McOptions mc{options.n ? options.n : 1000000, next_seed(), options.threads};
                append(report, mc_events(unit_params(g), t, mc));
            }
        }
        for (double p : {0.3, 0.5, 0.7}) {
            McOptions mc{options.n ? options.n : 10000000, next_seed(), options.threads};
            append(report, mc_interior_charfn(validate_params(1.0, 1.0, p, 1.0 - p), 1.0,
                                              reference_charfn_points(), mc));
        }
    }
    if (all || name == "hydro") {
        for (const auto& g : std::vector<GridPoint>{{0.5, 0.5}, {0.6, 0.2}, {0.3, 0.3}}) {
            HydroOptions hydro;
            hydro.n = options.n ? options.n : 200000;
            hydro.seed = next_seed();
            hydro.threads = options.threads;
            hydro.strict = options.strict;
            append(report, hydro_convergence(g.p, g.q, 1.0, hydro));
        }
    }
    return report;
}

}  // namespace orthoplanar
