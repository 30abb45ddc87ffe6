// lkms: evaluate local-KMS thermal two-point functions, run the constraint
// verification suites, classify inverse-temperature fields, and emit
// temperature profiles. JSON config in, CSV/JSON out.
//
// Exit codes: 0 success / all suites pass, 1 suite failure, 2 config or
// command-line error, 3 numeric failure.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lkms/classifier.hpp"
#include "lkms/constraints.hpp"
#include "lkms/wightman.hpp"

using json = nlohmann::ordered_json;
using namespace lkms;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSuiteFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

constexpr double kDetailedBalanceTol = 1e-13;
constexpr double kBetaConstraintTol = 1e-8;
constexpr double kPdeResidualTol = 1e-4;
constexpr double kStencilStep = 1e-2;

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Worldline
{
    std::optional<FourVector> origin;
    FourVector direction{1, 0, 0, 0};
    std::vector<double> tau;
};

struct RunConfig
{
    double mass = 0;
    AffineBetaField field;
    std::vector<FourVector> q_points;
    std::vector<FourVector> z_points;
    Worldline worldline;
    QuadratureConfig quadrature;
    std::uint64_t seed = 12345;
    std::string output_path;
};

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const char* where)
{
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigError(std::string("unknown key \"") + key + "\" in " + where);
    }
}

double get_number(const json& v, const char* where)
{
    if (!v.is_number()) throw ConfigError(std::string(where) + " must be a number");
    return v.get<double>();
}

FourVector parse_four_vector(const json& v, const char* where)
{
    if (!v.is_array() || v.size() != 4)
        throw ConfigError(std::string(where) + " must be an array of 4 numbers");
    return FourVector(get_number(v[0], where), get_number(v[1], where), get_number(v[2], where),
                      get_number(v[3], where));
}

std::vector<FourVector> parse_points(const json& v, const char* where)
{
    std::vector<FourVector> points;
    if (v.is_array()) {
        for (const auto& entry : v) points.push_back(parse_four_vector(entry, where));
        return points;
    }
    if (v.is_object()) {
        check_keys(v, {"linspace"}, where);
        if (!v.contains("linspace"))
            throw ConfigError(std::string(where) + " must be a point list or a linspace spec");
        const json& ls = v["linspace"];
        check_keys(ls, {"start", "stop", "count"}, "linspace");
        const FourVector start = parse_four_vector(ls.at("start"), "linspace.start");
        const FourVector stop = parse_four_vector(ls.at("stop"), "linspace.stop");
        const std::int64_t count = ls.at("count").get<std::int64_t>();
        if (count < 1 || count > 10000000) throw ConfigError("linspace.count must be in [1, 1e7]");
        for (std::int64_t i = 0; i < count; ++i) {
            const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            points.push_back(start + (stop - start) * s);
        }
        return points;
    }
    throw ConfigError(std::string(where) + " must be a point list or a linspace spec");
}

std::vector<double> parse_tau(const json& v)
{
    std::vector<double> tau;
    if (v.is_array()) {
        for (const auto& entry : v) tau.push_back(get_number(entry, "worldline.tau"));
        return tau;
    }
    if (v.is_object()) {
        check_keys(v, {"linspace"}, "worldline.tau");
        const json& ls = v.at("linspace");
        check_keys(ls, {"start", "stop", "count"}, "worldline.tau.linspace");
        const double start = get_number(ls.at("start"), "tau start");
        const double stop = get_number(ls.at("stop"), "tau stop");
        const std::int64_t count = ls.at("count").get<std::int64_t>();
        if (count < 1 || count > 10000000) throw ConfigError("tau count must be in [1, 1e7]");
        for (std::int64_t i = 0; i < count; ++i) {
            const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            tau.push_back(start + (stop - start) * s);
        }
        return tau;
    }
    throw ConfigError("worldline.tau must be a number list or a linspace spec");
}

AffineBetaField parse_beta_spec(const json& spec)
{
    check_keys(spec, {"affine", "constant"}, "beta_spec");
    if (spec.contains("constant")) {
        if (spec.contains("affine")) throw ConfigError("beta_spec: give either affine or constant");
        const FourVector beta = parse_four_vector(spec["constant"], "beta_spec.constant");
        if (!is_future_timelike(beta)) {
            std::ostringstream msg;
            msg << "beta_spec.constant (" << beta.t << ", " << beta.x << ", " << beta.y << ", "
                << beta.z << ") is not future-pointing timelike";
            throw ConfigError(msg.str());
        }
        return AffineBetaField::constant(beta);
    }
    if (!spec.contains("affine")) throw ConfigError("beta_spec needs \"affine\" or \"constant\"");
    const json& aff = spec["affine"];
    check_keys(aff, {"c", "C", "beta_tilde"}, "beta_spec.affine");
    const double c = get_number(aff.at("c"), "beta_spec.affine.c");
    Tensor2 C = Tensor2::zero();
    if (aff.contains("C")) {
        const json& carr = aff["C"];
        if (!carr.is_array() || carr.size() != 6)
            throw ConfigError("beta_spec.affine.C must be [C01, C02, C03, C12, C13, C23]");
        C = Tensor2::antisymmetric(get_number(carr[0], "C"), get_number(carr[1], "C"),
                                   get_number(carr[2], "C"), get_number(carr[3], "C"),
                                   get_number(carr[4], "C"), get_number(carr[5], "C"));
    }
    FourVector beta_tilde{};
    if (aff.contains("beta_tilde"))
        beta_tilde = parse_four_vector(aff["beta_tilde"], "beta_spec.affine.beta_tilde");
    return AffineBetaField(c, C, beta_tilde);
}

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(doc, {"mass", "beta_spec", "grid", "worldline", "quadrature", "seed", "output_path"},
               "config");

    RunConfig cfg;
    cfg.mass = get_number(doc.at("mass"), "mass");
    if (!(cfg.mass >= 0)) throw ConfigError("mass must be >= 0");
    cfg.field = parse_beta_spec(doc.at("beta_spec"));

    if (doc.contains("grid")) {
        const json& grid = doc["grid"];
        check_keys(grid, {"q_points", "z_points"}, "grid");
        if (grid.contains("q_points")) cfg.q_points = parse_points(grid["q_points"], "grid.q_points");
        if (grid.contains("z_points")) cfg.z_points = parse_points(grid["z_points"], "grid.z_points");
    }
    if (doc.contains("worldline")) {
        const json& wl = doc["worldline"];
        check_keys(wl, {"origin", "direction", "tau"}, "worldline");
        if (wl.contains("origin")) cfg.worldline.origin = parse_four_vector(wl["origin"], "worldline.origin");
        if (wl.contains("direction"))
            cfg.worldline.direction = parse_four_vector(wl["direction"], "worldline.direction");
        if (wl.contains("tau")) cfg.worldline.tau = parse_tau(wl["tau"]);
    }
    if (doc.contains("quadrature")) {
        const json& q = doc["quadrature"];
        check_keys(q, {"rel_tol", "abs_tol", "max_refinements", "cutoff_safety"}, "quadrature");
        if (q.contains("rel_tol")) cfg.quadrature.rel_tol = get_number(q["rel_tol"], "rel_tol");
        if (q.contains("abs_tol")) cfg.quadrature.abs_tol = get_number(q["abs_tol"], "abs_tol");
        if (q.contains("max_refinements")) cfg.quadrature.max_refinements = q["max_refinements"].get<int>();
        if (q.contains("cutoff_safety")) cfg.quadrature.cutoff_safety = get_number(q["cutoff_safety"], "cutoff_safety");
        if (!(cfg.quadrature.rel_tol > 0) || !(cfg.quadrature.abs_tol > 0) ||
            cfg.quadrature.max_refinements < 1 || !(cfg.quadrature.cutoff_safety > 0))
            throw ConfigError("quadrature tolerances must be positive and max_refinements >= 1");
    }
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("output_path")) cfg.output_path = doc["output_path"].get<std::string>();
    return cfg;
}

std::string format_cell(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_vector(const FourVector& v)
{
    std::ostringstream s;
    s << "(" << v.t << ", " << v.x << ", " << v.y << ", " << v.z << ")";
    return s.str();
}

void write_output(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
}

int resolve_threads(int option)
{
    if (option > 0) return option;
    if (const char* env = std::getenv("LKMS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run fn(i) for i in [0, count) on a worker pool, rethrowing the first
/// failure. Results must be stored by index by fn itself.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn)
{
    if (count == 0) return;
    const int nworkers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (nworkers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < nworkers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

int cmd_eval(const RunConfig& cfg, const std::string& out_path, int threads, bool verbose)
{
    const StateSpec state(cfg.mass, cfg.field);

    // Validate the whole grid before evaluating anything, so a bad
    // configuration is a config error rather than a runtime fault.
    for (const FourVector& q : cfg.q_points) {
        const FourVector beta = state.beta_raw(q);
        if (!is_future_timelike(beta)) {
            std::cerr << "lkms eval: beta" << format_vector(q) << " = " << format_vector(beta)
                      << " is not future-pointing timelike\n";
            return kExitConfigError;
        }
    }

    struct Row
    {
        std::size_t iq, iz;
        EvalResult result;
    };
    const std::size_t nrows = cfg.q_points.size() * cfg.z_points.size();
    std::vector<Row> rows(nrows);

    if (verbose) std::cerr << "lkms eval: " << nrows << " rows\n";
    try {
        parallel_for(nrows, threads, [&](std::size_t i) {
            const std::size_t iq = i / cfg.z_points.size();
            const std::size_t iz = i % cfg.z_points.size();
            rows[i] = {iq, iz,
                       regular_part_with_error(cfg.q_points[iq], cfg.z_points[iz], state,
                                               cfg.quadrature)};
        });
    } catch (const quadrature_error& e) {
        std::cerr << "lkms eval: " << e.what() << " (error estimate " << e.error_estimate << ")\n";
        return kExitNumericError;
    } catch (const std::exception& e) {
        std::cerr << "lkms eval: " << e.what() << "\n";
        return kExitNumericError;
    }

    std::string csv = "q0,q1,q2,q3,z0,z1,z2,z3,W,err_estimate\n";
    for (const Row& row : rows) {
        const FourVector& q = cfg.q_points[row.iq];
        const FourVector& z = cfg.z_points[row.iz];
        for (int mu = 0; mu < 4; ++mu) csv += format_cell(q[mu]) + ",";
        for (int mu = 0; mu < 4; ++mu) csv += format_cell(z[mu]) + ",";
        csv += format_cell(row.result.value) + "," + format_cell(row.result.error_estimate) + "\n";
    }
    write_output(csv, out_path);
    return kExitOk;
}

json suite_entry(const std::string& name, double residual, double scale, double tol)
{
    json entry;
    entry["name"] = name;
    entry["max_residual"] = residual;
    entry["scale"] = scale;
    entry["pass"] = residual <= tol;
    return entry;
}

int cmd_check(const RunConfig& cfg, const std::string& out_path, int threads, bool verbose)
{
    (void)threads;
    const StateSpec state(cfg.mass, cfg.field);
    if (cfg.q_points.empty()) {
        std::cerr << "lkms check: grid.q_points must be nonempty\n";
        return kExitConfigError;
    }
    const std::vector<Vec3> probes = default_shell_probes(cfg.mass, cfg.seed);

    double balance = 0, balance_scale = 1;
    double c1 = 0, c1_scale = 1;
    double c2 = 0, c2_scale = 1;
    double pde_mixed = 0, pde_box = 0;
    try {
        for (const FourVector& q : cfg.q_points) {
            const ResidualReport rb = kms_detailed_balance(q, state, probes, kDetailedBalanceTol);
            if (rb.max_abs_residual > balance) balance = rb.max_abs_residual, balance_scale = rb.scale;

            const Tensor2 J = beta_jacobian(state, q, kStencilStep);
            const ResidualReport r1 = constraint1_residual(J, cfg.mass, probes);
            if (r1.max_abs_residual > c1) c1 = r1.max_abs_residual, c1_scale = r1.scale;

            const ResidualReport r2 = constraint2_residual(state, q, probes, kStencilStep);
            if (r2.max_abs_residual > c2) c2 = r2.max_abs_residual, c2_scale = r2.scale;

            for (const FourVector& z : cfg.z_points) {
                const PdeResiduals pde = w_pde_residuals(state, q, z, kStencilStep, cfg.quadrature);
                pde_mixed = std::max(pde_mixed, std::abs(pde.mixed));
                pde_box = std::max(pde_box, std::abs(pde.box));
            }
        }
    } catch (const quadrature_error& e) {
        std::cerr << "lkms check: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const std::domain_error& e) {
        std::cerr << "lkms check: " << e.what() << "\n";
        return kExitConfigError;
    }

    json report;
    report["seed"] = cfg.seed;
    report["suites"] = json::array();
    report["suites"].push_back(suite_entry("detailed_balance", balance, balance_scale, kDetailedBalanceTol));
    report["suites"].push_back(suite_entry("beta_constraint1", c1, c1_scale, kBetaConstraintTol));
    report["suites"].push_back(suite_entry("beta_constraint2", c2, c2_scale, kBetaConstraintTol));
    if (!cfg.z_points.empty()) {
        report["suites"].push_back(suite_entry("w_pde_mixed", pde_mixed, 1.0, kPdeResidualTol));
        report["suites"].push_back(suite_entry("w_pde_box", pde_box, 1.0, kPdeResidualTol));
    }
    bool all_pass = true;
    for (const auto& suite : report["suites"])
        if (!suite["pass"].get<bool>()) all_pass = false;
    report["pass"] = all_pass;

    if (verbose) std::cerr << "lkms check: " << (all_pass ? "pass" : "FAIL") << "\n";
    write_output(report.dump(2) + "\n", out_path);
    return all_pass ? kExitOk : kExitSuiteFailure;
}

json region_json(const ConeRegion& region)
{
    json r;
    switch (region.kind) {
        case ConeKind::ForwardCone: r["kind"] = "ForwardCone"; break;
        case ConeKind::BackwardCone: r["kind"] = "BackwardCone"; break;
        case ConeKind::AllMinkowski: r["kind"] = "AllMinkowski"; return r;
    }
    r["apex"] = {region.apex.t, region.apex.x, region.apex.y, region.apex.z};
    return r;
}

// A sample in the candidate region, so the domain check stays meaningful
// when the config does not name one.
FourVector default_sample(const AffineBetaField& field)
{
    const double tol = 1e-8;
    if (std::abs(field.c) <= tol) return FourVector{};
    const FourVector apex = -(field.beta_tilde / field.c);
    return field.c > 0 ? apex + FourVector{1, 0, 0, 0} : apex - FourVector{1, 0, 0, 0};
}

int cmd_classify(const RunConfig& cfg, const std::string& out_path)
{
    std::vector<FourVector> samples = cfg.q_points;
    if (samples.empty()) samples.push_back(default_sample(cfg.field));
    const Verdict verdict = classify_affine(cfg.field, cfg.mass, samples);

    json out;
    out["kind"] = to_string(verdict.kind);
    if (verdict.kind == VerdictKind::NotLKMS) {
        out["reason"] = verdict.reason;
        out["region"] = nullptr;
    } else {
        out["c"] = verdict.c;
        out["beta_tilde"] = {verdict.beta_tilde.t, verdict.beta_tilde.x, verdict.beta_tilde.y,
                             verdict.beta_tilde.z};
        out["region"] = region_json(verdict.region);
    }
    out["fit_residual"] = verdict.fit_residual;
    write_output(out.dump(2) + "\n", out_path);
    return kExitOk;
}

int cmd_profile(const RunConfig& cfg, const std::string& out_path, int threads, bool verbose)
{
    const StateSpec state(cfg.mass, cfg.field);
    if (cfg.worldline.tau.empty()) {
        std::cerr << "lkms profile: worldline.tau must be nonempty\n";
        return kExitConfigError;
    }

    const std::vector<FourVector> samples{default_sample(cfg.field)};
    const Verdict verdict = classify_affine(cfg.field, cfg.mass, samples);
    if (verdict.kind == VerdictKind::NotLKMS) {
        std::cerr << "lkms profile: field is NotLKMS: " << verdict.reason << "\n";
        return kExitConfigError;
    }

    FourVector origin = verdict.region.kind == ConeKind::AllMinkowski ? FourVector{}
                                                                      : verdict.region.apex;
    if (cfg.worldline.origin) origin = *cfg.worldline.origin;

    std::vector<FourVector> points;
    for (double tau : cfg.worldline.tau) {
        const FourVector q = origin + cfg.worldline.direction * tau;
        if (!cone_contains(verdict.region, q)) {
            std::cerr << "lkms profile: worldline point " << format_vector(q)
                      << " leaves the maximal region\n";
            return kExitNumericError;
        }
        points.push_back(q);
    }

    struct Row
    {
        double temperature;
        double coincidence;
    };
    std::vector<Row> rows(points.size());
    if (verbose) std::cerr << "lkms profile: " << points.size() << " samples\n";
    try {
        parallel_for(points.size(), threads, [&](std::size_t i) {
            rows[i] = {temperature(state, points[i]),
                       coincidence_limit(points[i], state, cfg.quadrature)};
        });
    } catch (const std::exception& e) {
        std::cerr << "lkms profile: " << e.what() << "\n";
        return kExitNumericError;
    }

    std::string csv = "tau,T,W\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        csv += format_cell(cfg.worldline.tau[i]) + "," + format_cell(rows[i].temperature) + "," +
               format_cell(rows[i].coincidence) + "\n";
    }
    write_output(csv, out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{
        "lkms: local-KMS thermal two-point functions of the free Klein-Gordon field.\n"
        "Exit codes: 0 success (all suites pass), 1 verification-suite failure,\n"
        "2 config/usage error, 3 numeric failure."};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int threads = 0;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", out_path, "output path (default: config output_path, else stdout)");
    app.add_option("--threads", threads, "worker threads (default: LKMS_THREADS or all cores)");
    app.add_flag("--verbose", verbose, "progress notes on stderr");

    auto* eval = app.add_subcommand("eval", "evaluate W on the q x z grid, write CSV");
    auto* check = app.add_subcommand("check", "run the verification suites, write a JSON report");
    auto* classify = app.add_subcommand("classify", "classify the field, write a JSON verdict");
    auto* profile = app.add_subcommand("profile", "temperature/W profile along a worldline, CSV");
    for (CLI::App* sub : {eval, check, classify, profile}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    RunConfig cfg;
    try {
        cfg = parse_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "lkms: " << e.what() << "\n";
        return kExitConfigError;
    }
    if (out_path.empty()) out_path = cfg.output_path;
    const int nthreads = resolve_threads(threads);

    try {
        if (eval->parsed()) return cmd_eval(cfg, out_path, nthreads, verbose);
        if (check->parsed()) return cmd_check(cfg, out_path, nthreads, verbose);
        if (classify->parsed()) return cmd_classify(cfg, out_path);
        if (profile->parsed()) return cmd_profile(cfg, out_path, nthreads, verbose);
    } catch (const std::exception& e) {
        std::cerr << "lkms: " << e.what() << "\n";
        return kExitNumericError;
    }
    return kExitConfigError;
}
