#include "orthoplanar/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "orthoplanar/analytic.hpp"
#include "orthoplanar/format.hpp"
#include "orthoplanar/mc.hpp"
#include "orthoplanar/sim.hpp"
#include "orthoplanar/verify.hpp"

namespace orthoplanar::cli {

std::vector<double> parse_list(const std::string& text) {
    auto number = [](const std::string& token) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(token, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a number: '" + token + "'");
        }
        if (used != token.size()) throw std::invalid_argument("not a number: '" + token + "'");
        return value;
    };

    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, sep)) parts.push_back(token);
    if (parts.empty()) throw std::invalid_argument("empty list");

    if (sep == ':') {
        if (parts.size() != 3) throw std::invalid_argument("range must be start:stop:count");
        const double lo = number(parts[0]);
        const double hi = number(parts[1]);
        const double count = number(parts[2]);
        if (!(count >= 1.0) || count != std::floor(count)) {
            throw std::invalid_argument("range count must be a positive integer");
        }
        const auto n = static_cast<std::size_t>(count);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = n == 1 ? lo
                            : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& part : parts) out.push_back(number(part));
    return out;
}

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- options -----------------------------------------------------------------

struct Common {
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string config;
};

struct SimulateOptions {
    double lambda = 1.0;
    double c = 1.0;
    double p = 0.25;
    double q = 0.25;
    double t = 1.0;
    std::size_t n_paths = 1;
    std::string out;
    bool concat = false;
    bool triangle = false;
};

struct AnalyticOptions {
    std::string fn;
    std::string format = "csv";
    std::map<std::string, std::string> lists;
};

struct VerifyOptions {
    std::string suite;
    std::size_t n = 0;
    bool survey = false;
    std::string out;
};

const std::vector<std::string>& grid_names() {
    static const std::vector<std::string> names{"lambda", "c",  "p",     "q",    "t",
                                                "eta",    "x",  "s",     "y",    "alpha",
                                                "beta"};
    return names;
}

struct Parsed {
    std::unique_ptr<CLI::App> app;
    CLI::App* simulate = nullptr;
    CLI::App* analytic = nullptr;
    CLI::App* verify = nullptr;
};

void add_common(CLI::App* sub, Common& common) {
    sub->add_option("--seed", common.seed, "master seed")
        ->envname("ORTHOPLANAR_SEED")
        ->capture_default_str();
    sub->add_option("--threads", common.threads, "worker threads, 0 = all cores")
        ->capture_default_str();
    sub->add_option("--config", common.config, "key=value file; flags take precedence");
}

Parsed build_app(Common& common, SimulateOptions& sim, AnalyticOptions& ana,
                 VerifyOptions& ver) {
    Parsed parsed;
    parsed.app = std::make_unique<CLI::App>("Planar random motion with orthogonal directions",
                                            "orthoplanar");
    CLI::App& app = *parsed.app;
    app.require_subcommand(1);

    auto* s = app.add_subcommand("simulate", "simulate sample paths to CSV");
    s->add_option("--lambda", sim.lambda, "event rate")->capture_default_str();
    s->add_option("--c", sim.c, "speed")->capture_default_str();
    s->add_option("--p", sim.p, "counter-clockwise turn probability")->capture_default_str();
    s->add_option("--q", sim.q, "clockwise turn probability")->capture_default_str();
    s->add_option("--t", sim.t, "time horizon")->capture_default_str();
    s->add_option("--n-paths", sim.n_paths, "number of paths")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_option("--out", sim.out, "output file; stdout if omitted");
    s->add_flag("--concat", sim.concat, "one file with a path column");
    s->add_flag("--triangle", sim.triangle, "also write the (T, Y) path");
    add_common(s, common);
    parsed.simulate = s;

    auto* a = app.add_subcommand("analytic", "evaluate closed forms over a grid");
    a->add_option("--fn", ana.fn, "function name")->required();
    a->add_option("--format", ana.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    for (const auto& name : grid_names()) {
        a->add_option("--" + name, ana.lists[name], "list a,b,c or range start:stop:count");
    }
    add_common(a, common);
    parsed.analytic = a;

    auto* v = app.add_subcommand("verify", "run verification checks, JSON report");
    v->add_option("--suite", ver.suite, "suite")
        ->required()
        ->check(CLI::IsMember({"quadrature", "fourier", "pde", "hydro", "mc", "all"}));
    v->add_option("--n", ver.n, "replications for stochastic checks, 0 = suite default")
        ->capture_default_str();
    v->add_flag("--survey", ver.survey, "report every statistic without gating");
    v->add_option("--out", ver.out, "report file; stdout if omitted");
    add_common(v, common);
    parsed.verify = v;
    return parsed;
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        entries.emplace_back(key, value);
    }
    return entries;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

// Config entries become flags placed before the user's own, skipping keys the
// user already set.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::string& subcommand,
                                      const std::string& config_path, CLI::App* sub) {
    std::vector<std::string> merged{subcommand};
    for (const auto& [key, value] : read_config(config_path)) {
        if (key == "config") throw UsageError("config files cannot include other configs");
        if (given_on_command_line(args, key)) continue;
        CLI::Option* opt = nullptr;
        try {
            opt = sub->get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            throw UsageError("unknown config key '" + key + "'");
        }
        if (opt->get_type_size() == 0) {
            if (value == "true" || value == "1") merged.push_back("--" + key);
            else if (value != "false" && value != "0") {
                throw UsageError("flag '" + key + "' needs true or false");
            }
        } else {
            merged.push_back("--" + key + "=" + value);
        }
    }
    auto it = std::next(std::find(args.begin(), args.end(), subcommand));
    for (; it != args.end(); ++it) {
        if (*it == "--config") {
            if (std::next(it) != args.end()) ++it;
            continue;
        }
        if (it->rfind("--config=", 0) == 0) continue;
        merged.push_back(*it);
    }
    return merged;
}

// --- simulate -------------------------------------------------------------------

std::string trajectory_text(const Trajectory& traj, long path_id, bool header) {
    std::ostringstream os;
    write_trajectory_csv(os, traj, path_id, header);
    return os.str();
}

std::string triangle_text(const Trajectory& traj, long path_id, bool header) {
    std::ostringstream os;
    write_triangle_csv(os, triangle_path(traj), path_id, header);
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << text;
    if (!file) throw std::runtime_error("write failed for " + path.string());
}

std::filesystem::path with_suffix(const std::filesystem::path& base, const std::string& suffix) {
    std::filesystem::path out = base;
    out.replace_filename(base.stem().string() + suffix + base.extension().string());
    return out;
}

int cmd_simulate(const SimulateOptions& opt, const Common& common, std::ostream& out) {
    ModelParams params = [&] {
        try {
            return validate_params(opt.lambda, opt.c, opt.p, opt.q);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }();
    if (!(opt.t >= 0.0) || !std::isfinite(opt.t)) throw UsageError("--t must be finite and >= 0");
    if (opt.triangle && opt.out.empty()) throw UsageError("--triangle needs --out");

    const bool single = opt.n_paths == 1 && !opt.concat;
    const bool tagged = !single && (opt.concat || opt.out.empty());

    std::vector<std::string> paths(opt.n_paths);
    std::vector<std::string> triangles(opt.triangle ? opt.n_paths : 0);
    for_each_chunk(opt.n_paths, common.threads,
                   [&](std::size_t, std::size_t begin, std::size_t end) {
                       for (std::size_t i = begin; i < end; ++i) {
                           RandomStream rng = RandomStream::for_replication(common.seed, i);
                           const Trajectory traj = export_trajectory(params, opt.t, rng);
                           const long id = tagged ? static_cast<long>(i) : -1;
                           const bool header = !tagged || i == 0;
                           paths[i] = trajectory_text(traj, id, header);
                           if (opt.triangle) triangles[i] = triangle_text(traj, id, header);
                       }
                   });

    auto joined = [](const std::vector<std::string>& parts) {
        std::string all;
        for (const auto& p : parts) all += p;
        return all;
    };

    if (opt.out.empty()) {
        out << joined(paths);
        return kExitOk;
    }
    const std::filesystem::path base(opt.out);
    if (single || opt.concat) {
        write_file(base, joined(paths));
        if (opt.triangle) write_file(with_suffix(base, "_triangle"), joined(triangles));
        return kExitOk;
    }
    for (std::size_t i = 0; i < opt.n_paths; ++i) {
        const auto file = with_suffix(base, "_" + std::to_string(i));
        write_file(file, paths[i]);
        if (opt.triangle) write_file(with_suffix(file, "_triangle"), triangles[i]);
    }
    return kExitOk;
}

// --- analytic -----------------------------------------------------------------

enum class Shape { Real, Complex, Hydro, Joint };

struct FnSpec {
    std::vector<std::string> inputs;
    Shape shape;
    std::function<std::vector<double>(const std::map<std::string, double>&)> eval;
};

ModelParams row_params(const std::map<std::string, double>& v) {
    return validate_params(v.at("lambda"), v.at("c"), v.at("p"), v.at("q"));
}

std::vector<double> complex_cells(Complex z) { return {z.real(), z.imag()}; }

template <class F>
FnSpec real_t(F f) {
    return {{"lambda", "c", "p", "q", "t"}, Shape::Real, [f](const auto& v) {
                return std::vector<double>{f(row_params(v), v.at("t"))};
            }};
}

template <class F>
FnSpec real_tw(F f, const std::string& arg) {
    return {{"lambda", "c", "p", "q", "t", arg}, Shape::Real, [f, arg](const auto& v) {
                return std::vector<double>{f(row_params(v), v.at("t"), v.at(arg))};
            }};
}

template <class F>
FnSpec complex_tw(F f, const std::string& arg) {
    return {{"lambda", "c", "p", "q", "t", arg}, Shape::Complex, [f, arg](const auto& v) {
                return complex_cells(f(row_params(v), v.at("t"), v.at(arg)));
            }};
}

const std::map<std::string, FnSpec>& functions() {
    static const std::map<std::string, FnSpec> table = [] {
        std::map<std::string, FnSpec> m;
        m["prob_boundary"] = real_t(prob_boundary);
        m["prob_side_interior"] = real_t(prob_side_interior);
        m["prob_diagonals"] = real_t(prob_diagonals);
        m["prob_diag_interior"] = real_t(prob_diag_interior);
        m["t_endpoint_mass"] = real_t(t_endpoint_mass);
        m["oblique_prob_noref"] = real_t(oblique_prob_noref);
        m["oblique_prob_pq"] = real_t(oblique_prob_pq);
        m["side_density"] = real_tw(side_density, "eta");
        m["diag_density"] = real_tw(diag_density, "x");
        m["t_density"] = real_tw(t_density, "s");
        m["oblique_density_noref"] = real_tw(oblique_density_noref, "s");
        m["vertical_side_density"] = real_tw(vertical_side_density, "y");
        m["side_charfn"] = complex_tw(side_charfn, "alpha");
        m["diag_charfn"] = complex_tw(diag_charfn, "alpha");
        m["t_charfn"] = complex_tw(t_charfn, "alpha");
        m["oblique_charfn_noref"] = complex_tw(oblique_charfn_noref, "alpha");
        m["oblique_charfn_pq"] = complex_tw(oblique_charfn_pq, "alpha");
        m["vertical_side_charfn"] = complex_tw(vertical_side_charfn, "beta");
        m["interior_charfn_noref"] = {
            {"lambda", "c", "p", "q", "t", "alpha", "beta"}, Shape::Complex,
            [](const auto& v) {
                return complex_cells(
                    interior_charfn_noref(row_params(v), v.at("t"), v.at("alpha"), v.at("beta")));
            }};
        m["hydro_coeff"] = {{"p", "q"}, Shape::Hydro, [](const auto& v) {
                                return std::vector<double>{hydro_coeff(v.at("p"), v.at("q")).D};
                            }};
        m["joint_hydro_limit"] = {
            {"lambda", "c", "p", "q", "t", "s", "y"}, Shape::Joint, [](const auto& v) {
                const auto lim = joint_hydro_limit(row_params(v), v.at("t"), v.at("s"), v.at("y"));
                return std::vector<double>{lim.y_density, lim.variance, lim.s_star};
            }};
        return m;
    }();
    return table;
}

std::vector<std::string> value_columns(Shape shape) {
    switch (shape) {
        case Shape::Real:
            return {"value"};
        case Shape::Complex:
            return {"re", "im"};
        case Shape::Hydro:
            return {"D"};
        case Shape::Joint:
            return {"y_density", "variance", "s_star"};
    }
    return {};
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

int cmd_analytic(const AnalyticOptions& opt, std::ostream& out, std::ostream& err) {
    const auto& table = functions();
    const auto found = table.find(opt.fn);
    if (found == table.end()) {
        err << "unknown --fn '" << opt.fn << "'; available:";
        for (const auto& [name, spec] : table) err << " " << name;
        err << "\n";
        return kExitUsage;
    }
    const FnSpec& spec = found->second;

    std::vector<std::vector<double>> axes;
    for (const auto& name : spec.inputs) {
        const std::string& text = opt.lists.at(name);
        if (text.empty()) throw UsageError("--fn " + opt.fn + " needs --" + name);
        try {
            axes.push_back(parse_list(text));
        } catch (const std::invalid_argument& e) {
            throw UsageError("--" + name + ": " + e.what());
        }
    }
    for (const auto& [name, text] : opt.lists) {
        if (!text.empty() &&
            std::find(spec.inputs.begin(), spec.inputs.end(), name) == spec.inputs.end()) {
            throw UsageError("--fn " + opt.fn + " does not take --" + name);
        }
    }

    const auto outputs = value_columns(spec.shape);
    const bool json = opt.format == "json";
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    if (!json) {
        for (const auto& name : spec.inputs) out << name << ",";
        for (const auto& name : outputs) out << name << ",";
        out << "error\n";
    }

    std::vector<std::size_t> index(axes.size(), 0);
    for (bool done = false; !done;) {
        std::map<std::string, double> values;
        for (std::size_t k = 0; k < axes.size(); ++k) values[spec.inputs[k]] = axes[k][index[k]];

        std::vector<double> result;
        std::string error;
        try {
            result = spec.eval(values);
        } catch (const Error& e) {
            error = e.what();
        }

        if (json) {
            nlohmann::ordered_json row;
            for (const auto& name : spec.inputs) row[name] = values[name];
            for (std::size_t k = 0; k < outputs.size(); ++k) {
                row[outputs[k]] = result.empty() ? nlohmann::ordered_json(nullptr)
                                                 : nlohmann::ordered_json(result[k]);
            }
            row["error"] = error.empty() ? nlohmann::ordered_json(nullptr)
                                         : nlohmann::ordered_json(error);
            rows.push_back(std::move(row));
        } else {
            for (const auto& name : spec.inputs) out << format_double(values[name]) << ",";
            for (std::size_t k = 0; k < outputs.size(); ++k) {
                if (!result.empty()) out << format_double(result[k]);
                out << ",";
            }
            out << csv_field(error) << "\n";
        }

        // Odometer over the grid, last axis fastest.
        done = true;
        for (std::size_t k = axes.size(); k-- > 0;) {
            if (++index[k] < axes[k].size()) {
                done = false;
                break;
            }
            index[k] = 0;
        }
    }
    if (json) out << rows.dump(2) << "\n";
    return kExitOk;
}

// --- verify ---------------------------------------------------------------------

int cmd_verify(const VerifyOptions& opt, const Common& common, std::ostream& out) {
    SuiteOptions suite;
    suite.seed = common.seed;
    suite.n = opt.n;
    suite.threads = common.threads;
    suite.strict = !opt.survey;
    const Report report = run_suite(opt.suite, suite);
    const std::string text = report_json(report);
    if (opt.out.empty()) {
        out << text;
    } else {
        write_file(opt.out, text);
    }
    return report_passes(report) ? kExitOk : kExitVerifyFailed;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             bool allow_config) {
    Common common;
    SimulateOptions sim;
    AnalyticOptions ana;
    VerifyOptions ver;
    Parsed parsed = build_app(common, sim, ana, ver);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        parsed.app->parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = parsed.app->exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* sub = parsed.app->get_subcommands().front();
    if (!common.config.empty()) {
        if (!allow_config) throw UsageError("--config given twice");
        return dispatch(merge_config(args, sub->get_name(), common.config, sub), out, err,
                        false);
    }

    if (sub == parsed.simulate) return cmd_simulate(sim, common, out);
    if (sub == parsed.analytic) return cmd_analytic(ana, out, err);
    return cmd_verify(ver, common, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err, true);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace orthoplanar::cli
