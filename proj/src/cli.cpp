#include "robin/cli.hpp"

#include "robin/asymptotics.hpp"
#include "robin/comparison1d.hpp"
#include "robin/errors.hpp"
#include "robin/exact_models.hpp"
#include "robin/geometry.hpp"
#include "robin/report.hpp"
#include "robin/strip2d.hpp"
#include "robin/transverse1d.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>

namespace robin::cli {

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_numerical = 3;

json config_to_json(const RunConfig& c) {
    json j;
    j["schema"] = 1;
    j["command"] = c.command;
    if (!c.curve_json.empty()) j["curve"] = json::parse(c.curve_json);
    j["betas"] = c.betas;
    j["a"] = c.width;
    j["mesh"] = {{"ns", c.n_s}, {"nu", c.n_u}};
    j["s_trunc"] = c.s_trunc;
    j["k"] = c.k;
    j["format"] = c.format;
    j["seed"] = c.seed;
    j["tol"] = c.tol;
    j["R"] = c.disc_radius;
    j["m"] = c.disc_m;
    j["d"] = c.duct_width;
    j["far"] = c.far;
    j["margin"] = c.margin;
    return j;
}

} // namespace

std::string RunConfig::canonical() const { return config_to_json(*this).dump(); }

RunConfig parse_config(const std::string& json_text) {
    json obj;
    try {
        obj = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("config: parse error: ") + err.what());
    }
    if (!obj.is_object()) throw std::invalid_argument("config: expected a JSON object");
    static const std::vector<std::string> allowed = {
        "schema", "command", "curve", "beta", "betas", "a", "mesh", "s_trunc",
        "k", "output", "format", "seed", "tol", "R", "m", "d", "far", "margin",
        "criterion"};
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw std::invalid_argument("config: unknown key \"" + it.key() + "\"");
    }
    if (obj.contains("schema") && obj["schema"].get<int>() != 1)
        throw std::invalid_argument("config: unsupported schema version");

    RunConfig c;
    if (obj.contains("command")) c.command = obj["command"].get<std::string>();
    if (obj.contains("curve")) c.curve_json = obj["curve"].dump();
    if (obj.contains("beta")) c.betas = {obj["beta"].get<double>()};
    if (obj.contains("betas")) c.betas = obj["betas"].get<std::vector<double>>();
    if (obj.contains("a")) c.width = obj["a"].get<double>();
    if (obj.contains("mesh")) {
        const json& mesh = obj["mesh"];
        for (auto it = mesh.begin(); it != mesh.end(); ++it)
            if (it.key() != "ns" && it.key() != "nu")
                throw std::invalid_argument("config: unknown mesh key \"" + it.key() + "\"");
        if (mesh.contains("ns")) c.n_s = mesh["ns"].get<int>();
        if (mesh.contains("nu")) c.n_u = mesh["nu"].get<int>();
    }
    if (obj.contains("s_trunc")) c.s_trunc = obj["s_trunc"].get<double>();
    if (obj.contains("k")) c.k = obj["k"].get<int>();
    if (obj.contains("output")) c.output = obj["output"].get<std::string>();
    if (obj.contains("format")) c.format = obj["format"].get<std::string>();
    if (obj.contains("seed")) c.seed = obj["seed"].get<unsigned long>();
    if (obj.contains("tol")) c.tol = obj["tol"].get<double>();
    if (obj.contains("R")) c.disc_radius = obj["R"].get<double>();
    if (obj.contains("m")) c.disc_m = obj["m"].get<int>();
    if (obj.contains("d")) c.duct_width = obj["d"].get<double>();
    if (obj.contains("far")) c.far = obj["far"].get<std::string>();
    if (obj.contains("margin")) c.margin = obj["margin"].get<double>();
    if (obj.contains("criterion")) c.criterion = obj["criterion"].get<int>();
    return c;
}

namespace {

void validate_positive(double v, const char* name) {
    if (!(v > 0))
        throw std::invalid_argument(std::string("config: ") + name + " must be positive");
}

FarBC far_from_string(const std::string& far) {
    if (far == "dirichlet") return FarBC::dirichlet;
    if (far == "neumann") return FarBC::neumann;
    throw std::invalid_argument("config: far must be dirichlet or neumann");
}

double effective_width(const RunConfig& c, double beta, double gamma_abs_max) {
    double a = c.width;
    if (a <= 0) {
        if (beta <= 1.0)
            throw std::invalid_argument("config: the width rule (3/beta) log beta needs "
                                        "beta > 1; pass an explicit a");
        a = 3.0 * std::log(beta) / beta;
    }
    if (gamma_abs_max > 0 && a * gamma_abs_max >= 0.95) a = 0.95 / gamma_abs_max;
    return a;
}

double effective_margin(const RunConfig& c, double beta) {
    if (c.margin >= 0) return c.margin;
    return default_discreteness_margin(beta);
}

struct Sink {
    std::ofstream file;
    std::ostream* os = nullptr;
    Sink(const RunConfig& c, std::ostream& fallback) {
        if (c.output.empty()) {
            os = &fallback;
        } else {
            file.open(c.output);
            if (!file) throw std::invalid_argument("config: cannot open output " + c.output);
            os = &file;
        }
    }
};

int env_workers() {
    const char* raw = std::getenv("ROBIN_WORKERS");
    if (!raw) return 1;
    const int n = std::atoi(raw);
    return n > 1 ? n : 1;
}

// ---- commands -----------------------------------------------------------------

int cmd_disc(const RunConfig& c, std::ostream& out) {
    if (c.betas.empty()) throw std::invalid_argument("disc: needs --beta");
    validate_positive(c.disc_radius, "R");
    Sink sink(c, out);
    const std::string hash = hash_hex(config_hash(c.canonical()));
    if (c.format == "json") {
        json rows = json::array();
        for (double beta : c.betas) {
            const DiscExteriorState st = disc_exterior_eigenvalue(c.disc_radius, beta, c.disc_m);
            const double asym = disc_exterior_asymptotic(c.disc_radius, beta, c.disc_m);
            rows.push_back({{"R", st.radius}, {"beta", st.beta}, {"m", st.m},
                            {"u_root", st.u_root}, {"lambda_exact", st.eigenvalue},
                            {"lambda_asymptotic", asym},
                            {"residual", st.eigenvalue - asym}});
        }
        *sink.os << json{{"config_hash", hash}, {"rows", rows}}.dump(2) << '\n';
        return exit_ok;
    }
    CsvWriter csv(*sink.os);
    csv.header({"R", "beta", "m", "u_root", "lambda_exact", "lambda_asymptotic",
                "residual", "config_hash"});
    for (double beta : c.betas) {
        const DiscExteriorState st = disc_exterior_eigenvalue(c.disc_radius, beta, c.disc_m);
        const double asym = disc_exterior_asymptotic(c.disc_radius, beta, c.disc_m);
        csv.field(st.radius).field(st.beta).field(st.m).field(st.u_root)
            .field(st.eigenvalue).field(asym).field(st.eigenvalue - asym).field(hash);
        csv.end_row();
    }
    return exit_ok;
}

int cmd_curve_check(const RunConfig& c, std::ostream& out) {
    if (c.curve_json.empty()) throw std::invalid_argument("curve-check: needs a curve");
    if (c.width <= 0) throw std::invalid_argument("curve-check: needs an explicit a > 0");
    const BoundaryCurve curve = curve_from_json(c.curve_json);
    const AssumptionReport rep = check_assumptions(curve, c.width);
    Sink sink(c, out);
    json j = {{"config_hash", hash_hex(config_hash(c.canonical()))},
              {"a", c.width},
              {"injective", rep.injective},
              {"a1_estimate", rep.tube_halfwidth_limit},
              {"decay_ok", rep.decay_ok},
              {"min_tube_distance", rep.min_tube_distance},
              {"stats",
               {{"gamma_max", rep.stats.gamma_max},
                {"gamma_min", rep.stats.gamma_min},
                {"gamma_abs_max", rep.stats.gamma_abs_max},
                {"gamma_deriv_abs_max", rep.stats.gamma_deriv_abs_max},
                {"gamma_deriv2_abs_max", rep.stats.gamma_deriv2_abs_max},
                {"s_at_max", rep.stats.s_at_max},
                {"decay_exponent_fit", rep.stats.decay_exponent_fit},
                {"flat", rep.stats.flat}}}};
    if (!rep.injective) j["error"] = {{"type", "injectivity"},
                                      {"message", "tube of width a self-intersects"}};
    *sink.os << j.dump(2) << '\n';
    return rep.injective ? exit_ok : exit_validation;
}

StripModel model_from_config(const RunConfig& c, double beta, StripSide side_override,
                             bool has_override) {
    if (c.curve_json.empty()) throw std::invalid_argument("config: needs a curve");
    BoundaryCurve curve = curve_from_json(c.curve_json);
    StripModel model{curve};
    const bool closed = curve.topology() == CurveTopology::closed_loop;
    model.side = has_override ? side_override
                              : (closed ? StripSide::obstacle_exterior
                                        : StripSide::domain_interior);
    model.beta = beta;
    model.far = far_from_string(c.far);
    model.s_trunc = c.s_trunc;
    model.n_s = c.n_s;
    model.n_u = c.n_u;
    const double lo = closed ? 0.0 : -c.s_trunc;
    const double hi = closed ? curve.perimeter() : c.s_trunc;
    const CurvatureStats stats = curvature_stats(curve, lo, hi, 2048);
    model.width = model.side == StripSide::waveguide
                      ? c.duct_width
                      : effective_width(c, beta, stats.gamma_abs_max);
    return model;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
    if (c.betas.empty()) throw std::invalid_argument("spectrum: needs --beta");
    Sink sink(c, out);
    const std::string hash = hash_hex(config_hash(c.canonical()));
    CsvWriter csv(*sink.os);
    csv.header({"beta", "j", "lambda", "residual", "discrete_flag", "mesh_ns",
                "mesh_nu", "a", "config_hash"});
    for (double beta : c.betas) {
        validate_positive(beta, "beta");
        StripModel model = model_from_config(c, beta, {}, false);
        Spectrum spec = solve_strip(model, c.k, c.tol, c.seed);
        spec = classify_discrete(std::move(spec), strip_threshold(model),
                                 effective_margin(c, beta));
        for (int j = 0; j < c.k; ++j) {
            csv.field(beta).field(j + 1).field(spec.values[j]).field(spec.residuals[j])
                .field(spec.discrete_flags[j]).field(model.n_s).field(model.n_u)
                .field(model.width).field(hash);
            csv.end_row();
        }
    }
    return exit_ok;
}

int cmd_bracket(const RunConfig& c, std::ostream& out) {
    if (c.betas.size() != 1) throw std::invalid_argument("bracket: needs exactly one --beta");
    const double beta = c.betas.front();
    validate_positive(beta, "beta");
    StripModel model = model_from_config(c, beta, {}, false);
    const BracketResult br = bracket_eigenvalues(model, c.k, c.tol);

    Sink sink(c, out);
    const std::string hash = hash_hex(config_hash(c.canonical()));
    CsvWriter csv(*sink.os);
    csv.header({"beta", "j", "lower", "upper", "refined_lower", "mu", "separated_lower",
                "separated_upper", "lower_slack", "config_hash"});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j < c.k; ++j) {
        csv.field(beta).field(j + 1).field(br.lower[j]).field(br.upper[j])
            .field(br.refined_lower[j]).field(br.mu[j])
            .field(br.separated_available ? br.separated.lower[j] : nan)
            .field(br.separated_available ? br.separated.upper[j] : nan)
            .field(br.separated_available ? br.lower_slack : nan)
            .field(hash);
        csv.end_row();
    }
    return exit_ok;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
    if (c.betas.size() < 1) throw std::invalid_argument("sweep: needs at least one beta");
    for (double b : c.betas) validate_positive(b, "beta");
    StripModel probe = model_from_config(c, c.betas.front(), {}, false);
    const bool closed = probe.curve.topology() == CurveTopology::closed_loop;
    const double lo = closed ? 0.0 : -c.s_trunc;
    const double hi = closed ? probe.curve.perimeter() : c.s_trunc;
    const CurvatureStats stats = curvature_stats(probe.curve, lo, hi, 4096);

    struct BetaRows {
        double beta = 0, a = 0;
        BracketResult bracket;
    };
    std::vector<BetaRows> results(c.betas.size());
    auto run_one = [&](size_t i) {
        BetaRows r;
        r.beta = c.betas[i];
        StripModel model = model_from_config(c, r.beta, {}, false);
        r.a = model.width;
        r.bracket = bracket_eigenvalues(model, c.k, c.tol);
        return r;
    };
    const int workers = env_workers();
    if (workers <= 1) {
        for (size_t i = 0; i < c.betas.size(); ++i) results[i] = run_one(i);
    } else {
        std::vector<std::future<BetaRows>> futs(c.betas.size());
        size_t next = 0, done = 0;
        while (done < c.betas.size()) {
            size_t in_flight = 0;
            for (size_t i = done; i < next; ++i)
                if (futs[i].valid()) ++in_flight;
            while (next < c.betas.size() && in_flight < static_cast<size_t>(workers)) {
                futs[next] = std::async(std::launch::async, run_one, next);
                ++next;
                ++in_flight;
            }
            results[done] = futs[done].get();
            ++done;
        }
    }

    PredictionReport report;
    report.model = probe.curve.descriptor();
    report.betas = c.betas;
    const bool interior = probe.side == StripSide::domain_interior;
    for (const BetaRows& r : results) {
        const double threshold = interior ? -r.beta * r.beta : 0.0;
        const double margin = effective_margin(c, r.beta);
        for (int j = 0; j < c.k; ++j) {
            PredictionRow row;
            row.beta = r.beta;
            row.j = j + 1;
            row.lambda_lower = r.bracket.lower[j];
            row.lambda_upper = r.bracket.upper[j];
            row.predicted_two_term = interior ? predict_interior(stats.gamma_max, r.beta)
                                              : predict_exterior(stats.gamma_min, r.beta);
            row.refined_lower = r.bracket.refined_lower[j];
            row.residual = row.lambda_upper - row.predicted_two_term;
            row.discrete_flag = row.lambda_upper < threshold - margin;
            row.mesh_ns = c.n_s;
            row.mesh_nu = c.n_u;
            row.a = r.a;
            report.rows.push_back(row);
        }
    }
    fit_report_exponents(report, c.k);

    Sink sink(c, out);
    const std::string hash = hash_hex(config_hash(c.canonical()));
    if (c.format == "json") {
        json jrows = json::array();
        for (const PredictionRow& row : report.rows)
            jrows.push_back({{"beta", row.beta}, {"j", row.j},
                             {"lambda_computed_lower", row.lambda_lower},
                             {"lambda_computed_upper", row.lambda_upper},
                             {"predicted_two_term", row.predicted_two_term},
                             {"refined_lower", row.refined_lower},
                             {"residual", row.residual},
                             {"discrete_flag", row.discrete_flag},
                             {"mesh_ns", row.mesh_ns}, {"mesh_nu", row.mesh_nu},
                             {"a", row.a}});
        json jfit = json::array();
        for (size_t j = 0; j < report.fitted_exponent.size(); ++j)
            jfit.push_back({{"j", j + 1},
                            {"exponent", report.fitted_exponent[j]},
                            {"r_squared", report.fitted_r_squared[j]}});
        *sink.os << json{{"config_hash", hash}, {"model", report.model},
                          {"rows", jrows}, {"fitted_exponent", jfit}}
                         .dump(2)
                  << '\n';
        return exit_ok;
    }
    CsvWriter csv(*sink.os);
    csv.header({"beta", "j", "lambda_computed_lower", "lambda_computed_upper",
                "predicted_two_term", "refined_lower", "residual", "discrete_flag",
                "mesh_ns", "mesh_nu", "a", "config_hash"});
    for (const PredictionRow& row : report.rows) {
        csv.field(row.beta).field(row.j).field(row.lambda_lower).field(row.lambda_upper)
            .field(row.predicted_two_term).field(row.refined_lower).field(row.residual)
            .field(row.discrete_flag).field(row.mesh_ns).field(row.mesh_nu).field(row.a)
            .field(hash);
        csv.end_row();
    }
    return exit_ok;
}

int cmd_waveguide(const RunConfig& c, std::ostream& out) {
    if (c.betas.empty()) throw std::invalid_argument("waveguide: needs --beta");
    validate_positive(c.duct_width, "d");
    Sink sink(c, out);
    const std::string hash = hash_hex(config_hash(c.canonical()));
    CsvWriter csv(*sink.os);
    csv.header({"beta", "j", "lambda", "solver_residual", "predicted_two_term",
                "residual", "discrete_flag", "mesh_ns", "mesh_nu", "d", "config_hash"});
    for (double beta : c.betas) {
        validate_positive(beta, "beta");
        StripModel model = model_from_config(c, beta, StripSide::waveguide, true);
        const double lo = -c.s_trunc, hi = c.s_trunc;
        const CurvatureStats stats = curvature_stats(model.curve, lo, hi, 4096);
        const double gamma_par_min = parallel_curvature(stats.gamma_min, c.duct_width);
        Spectrum spec = solve_strip(model, c.k, c.tol, c.seed);
        spec = classify_discrete(std::move(spec), strip_threshold(model),
                                 effective_margin(c, beta));
        for (int j = 0; j < c.k; ++j) {
            const double pred = predict_waveguide(stats.gamma_max, gamma_par_min, beta);
            csv.field(beta).field(j + 1).field(spec.values[j]).field(spec.residuals[j])
                .field(pred).field(spec.values[j] - pred).field(spec.discrete_flags[j])
                .field(model.n_s).field(model.n_u).field(c.duct_width).field(hash);
            csv.end_row();
        }
    }
    return exit_ok;
}

void emit_error(std::ostream& err, const RunConfig& c, const char* type,
                const std::string& message) {
    json j = {{"error", {{"type", type}, {"message", message}}},
              {"config_hash", hash_hex(config_hash(c.canonical()))}};
    err << j.dump() << '\n';
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.command == "disc") return cmd_disc(config, out);
        if (config.command == "curve-check") return cmd_curve_check(config, out);
        if (config.command == "spectrum") return cmd_spectrum(config, out);
        if (config.command == "bracket") return cmd_bracket(config, out);
        if (config.command == "sweep") return cmd_sweep(config, out);
        if (config.command == "waveguide") return cmd_waveguide(config, out);
        throw std::invalid_argument("unknown command \"" + config.command + "\"");
    } catch (const ConvergenceError& e) {
        emit_error(err, config, "non_convergence", e.what());
        return exit_numerical;
    } catch (const DefinitenessError& e) {
        emit_error(err, config, "definiteness", e.what());
        return exit_numerical;
    } catch (const RangeError& e) {
        emit_error(err, config, "range", e.what());
        return exit_numerical;
    } catch (const SingularCoordinatesError& e) {
        emit_error(err, config, "singular_coordinates", e.what());
        return exit_validation;
    } catch (const std::domain_error& e) {
        emit_error(err, config, "domain", e.what());
        return exit_validation;
    } catch (const std::invalid_argument& e) {
        emit_error(err, config, "validation", e.what());
        return exit_validation;
    }
}

int main_entry(int argc, const char* const* argv, const VerifyFn& verify_fn,
               std::ostream& out, std::ostream& err) {
    CLI::App app{"robinspec: discrete spectra of attractive Robin Laplacians on "
                 "curved planar domains"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, curve_text;
    std::vector<double> betas;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--curve", curve_text, "curve JSON object");
        sub->add_option("--beta", betas, "Robin strength (repeatable)");
        sub->add_option("--a", cfg.width, "strip width a (default: (3/beta) log beta)");
        sub->add_option("--ns", cfg.n_s, "longitudinal mesh intervals");
        sub->add_option("--nu", cfg.n_u, "transverse mesh intervals");
        sub->add_option("--s-trunc", cfg.s_trunc, "longitudinal truncation half-window");
        sub->add_option("--k", cfg.k, "number of eigenvalues");
        sub->add_option("--output", cfg.output, "report file (default stdout)");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", cfg.seed, "iterative solver seed");
        sub->add_option("--tol", cfg.tol, "residual tolerance");
        sub->add_option("--far", cfg.far, "far boundary condition")
            ->check(CLI::IsMember({"dirichlet", "neumann"}));
        sub->add_option("--margin", cfg.margin, "discreteness margin");
    };

    CLI::App* disc = app.add_subcommand("disc", "exact disc-exterior eigenvalues");
    disc->add_option("--R", cfg.disc_radius, "disc radius");
    disc->add_option("--m", cfg.disc_m, "angular momentum");
    add_common(disc);

    CLI::App* curve_check = app.add_subcommand("curve-check", "geometric assumption checks");
    add_common(curve_check);

    CLI::App* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues of one model");
    add_common(spectrum);

    CLI::App* bracket = app.add_subcommand("bracket", "two-sided eigenvalue enclosures");
    add_common(bracket);

    CLI::App* sweep = app.add_subcommand("sweep", "beta sweep against predictions");
    add_common(sweep);

    CLI::App* waveguide = app.add_subcommand("waveguide", "Robin duct spectra");
    waveguide->add_option("--d", cfg.duct_width, "duct width");
    add_common(waveguide);

    CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--criterion", cfg.criterion, "criterion number (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << e.what() << '\n';
        return exit_validation;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        RunConfig effective;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot read config file " + config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            effective = parse_config(ss.str());
        }
        // Flags override file values.
        effective.command = sub->get_name();
        if (sub == verify) {
            if (verify->count("--criterion")) effective.criterion = cfg.criterion;
            return verify_fn(effective.criterion, out);
        }
        auto passed = [&](const std::string& flag) { return sub->count(flag) > 0; };
        if (passed("--curve")) effective.curve_json = curve_text;
        if (!betas.empty()) effective.betas = betas;
        if (passed("--a")) effective.width = cfg.width;
        if (passed("--ns")) effective.n_s = cfg.n_s;
        if (passed("--nu")) effective.n_u = cfg.n_u;
        if (passed("--s-trunc")) effective.s_trunc = cfg.s_trunc;
        if (passed("--k")) effective.k = cfg.k;
        if (passed("--output")) effective.output = cfg.output;
        if (passed("--format")) effective.format = cfg.format;
        if (passed("--seed")) effective.seed = cfg.seed;
        if (passed("--tol")) effective.tol = cfg.tol;
        if (passed("--far")) effective.far = cfg.far;
        if (passed("--margin")) effective.margin = cfg.margin;
        if (sub == disc) {
            if (disc->count("--R")) effective.disc_radius = cfg.disc_radius;
            if (disc->count("--m")) effective.disc_m = cfg.disc_m;
        }
        if (sub == waveguide && waveguide->count("--d")) effective.duct_width = cfg.duct_width;
        return run(effective, out, err);
    } catch (const std::invalid_argument& e) {
        err << nlohmann::json{{"error", {{"type", "validation"}, {"message", e.what()}}}}
                   .dump()
            << '\n';
        return exit_validation;
    }
}

} // namespace robin::cli
