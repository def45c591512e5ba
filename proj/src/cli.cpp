#include "hyplayer/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyplayer/hamiltonian.hpp"
#include "hyplayer/kernel.hpp"
#include "hyplayer/layer.hpp"
#include "hyplayer/local_limit.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace hyplayer {

namespace {

constexpr const char* kSchema = "hyplayer-summary-v1";

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& cols) {
    std::FILE* fp = std::fopen(path.string().c_str(), "w");
    if (!fp) throw IoError("cannot open " + path.string());
    for (std::size_t c = 0; c < header.size(); ++c)
        std::fprintf(fp, "%s%s", header[c].c_str(), c + 1 < header.size() ? "," : "\n");
    const std::size_t rows = cols.empty() ? 0 : cols.front()->size();
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            std::fprintf(fp, "%.17g%s", (*cols[c])[r], c + 1 < cols.size() ? "," : "\n");
    if (std::fclose(fp) != 0) throw IoError("write failed: " + path.string());
}

// One pipeline run: artifacts directory, summary document and collected diagnostics.
class Run {
public:
    Run(std::string name, const RunConfig& cfg, std::ostream& log)
        : name_(std::move(name)), cfg_(cfg), log_(log), dir_(cfg.output.directory) {
        summary_["schema"] = kSchema;
        summary_["subcommand"] = name_;
        summary_["status"] = "ok";
        summary_["exit_code"] = 0;
        summary_["message"] = "";
        summary_["diagnostics"] = json::array();
        summary_["config"] = config_json(cfg);
        summary_["results"] = json::object();
    }

    const RunConfig& cfg() const { return cfg_; }
    std::ostream& log() { return log_; }
    json& results() { return summary_["results"]; }

    void check(bool ok, const std::string& what) {
        if (ok) return;
        summary_["diagnostics"].push_back(what);
        log_ << "  diagnostic: " << what << "\n";
    }
    bool clean() const { return summary_["diagnostics"].empty(); }

    void csv(const std::string& file, const std::vector<std::string>& header,
             const std::vector<const std::vector<double>*>& cols) {
        if (!cfg_.output.wants("csv")) return;
        write_csv(dir_ / file, header, cols);
        log_ << "  wrote " << (dir_ / file).string() << "\n";
    }

    fs::path path(const std::string& file) const { return dir_ / file; }

    int finish(int code, const std::string& status, const std::string& message) {
        summary_["status"] = status;
        summary_["exit_code"] = code;
        summary_["message"] = message;
        if (cfg_.output.wants("json")) {
            try {
                std::FILE* fp = std::fopen((dir_ / "summary.json").string().c_str(), "w");
                if (!fp) throw IoError("cannot open summary.json");
                std::string text = summary_.dump(2) + "\n";
                std::fwrite(text.data(), 1, text.size(), fp);
                std::fclose(fp);
            } catch (const std::exception& e) {
                log_ << "error: " << e.what() << "\n";
                return kExitIo;
            }
        }
        return code;
    }

    static json config_json(const RunConfig& c) {
        json j;
        j["model"] = {{"n", c.model.n},
                      {"gamma", c.model.gamma},
                      {"mu", c.model.mu > 0.0 ? c.model.mu : static_cast<double>(c.model.n)},
                      {"potential", c.model.potential}};
        j["grid"] = {{"T", c.grid.T}, {"R", c.grid.R}, {"Nt", c.grid.Nt}, {"Ny", c.grid.Ny},
                     {"q", c.grid.q > 0.0 ? c.grid.q : default_grading(c.model.gamma)},
                     {"top", c.grid.top}};
        j["solver"] = {{"tol", c.solver.tol}, {"max_iters", c.solver.max_iters},
                       {"damping", c.solver.damping}};
        return j;
    }

private:
    std::string name_;
    const RunConfig& cfg_;
    std::ostream& log_;
    fs::path dir_;
    json summary_;
};

json report_json(const SolveReport& r) {
    return {{"converged", r.converged},
            {"iterations", r.iterations},
            {"final_residual", r.residual_history.empty() ? 0.0 : r.residual_history.back()},
            {"energy", r.final_energy},
            {"damping_events", r.damping_events},
            {"flow_steps", r.flow_steps}};
}

double sup_abs_window(const std::vector<double>& t, const std::vector<double>& v, double window) {
    double m = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (std::abs(t[i]) <= window) m = std::max(m, std::abs(v[i]));
    return m;
}

// Layer solve plus the property checks shared by `layer` and `sweep`.
LayerResult run_layer(Run& run, bool with_stability) {
    const RunConfig& cfg = run.cfg();
    ModelParams params = cfg.model_params();
    LayerResult L = compute_layer(params, cfg.layer_grid_config(), cfg.solver_config());
    const LayerProfile& p = L.profile;
    json& r = run.results();
    r["solve"] = report_json(L.report);
    r["t0"] = p.t0;
    r["monotonicity_margin"] = p.monotonicity_margin;
    r["decay_plus"] = p.decay_plus;
    r["decay_minus"] = p.decay_minus;
    r["L_plus"] = p.L_plus;
    r["L_minus"] = p.L_minus;
    r["oddness_defect"] = oddness_defect(L.field);
    double max_abs = L.field.max_abs();
    r["max_abs"] = max_abs;
    NecessaryConditionReport nc = necessary_condition_check(params.potential(), p.L_plus, p.L_minus);
    r["necessary_condition"] = {{"passed", nc.passed}, {"min_F", nc.min_F},
                                {"F_plus", nc.F_plus}, {"F_minus", nc.F_minus}};
    run.check(max_abs <= 1.0 + 1e-9, "maximum principle violated: max |u| = " + std::to_string(max_abs));
    run.check(nc.passed, "necessary condition failed: " + nc.detail);
    if (with_stability) {
        double ev = stability_smallest_eigenvalue(L.field, L.op);
        r["stability_eigenvalue"] = ev;
        run.check(ev >= -1e-8, "negative second variation: " + std::to_string(ev));
    }
    run.csv("profile.csv", {"t", "w", "dw_dt"}, {&p.t, &p.trace, &p.dw_dt});
    if (cfg.output.wants("field")) {
        write_field_csv(L.field, run.path("field.csv").string());
        write_field_binary(L.field, run.path("field.bin").string());
    }
    return L;
}

void pipeline_layer(Run& run) { run_layer(run, true); }

void pipeline_hamiltonian(Run& run) {
    LayerResult L = run_layer(run, false);
    HamiltonianTrace h = hamiltonian_trace(L.field, run.cfg().model_params());
    std::vector<double> res = h.weighted_identity_residual();
    const double window = 5.0;
    double rel = relative_l2(h.t, h.Vprime_numeric, h.Vprime_formula, window);
    double id_ratio = sup_abs_window(h.t, res, window) / sup_abs_window(h.t, h.identity_rhs, window);
    double v_end = std::max(std::abs(h.V.front()), std::abs(h.V.back()));
    bool signs = true;
    for (std::size_t i = 0; i < h.t.size(); ++i) {
        if (h.t[i] > 0.0 && h.Vprime_formula[i] > 0.0) signs = false;
        if (h.t[i] < 0.0 && h.Vprime_formula[i] < 0.0) signs = false;
    }
    json& r = run.results();
    r["hamiltonian"] = {{"V_end_max", v_end},
                        {"Vprime_relative_l2", rel},
                        {"identity_relative_residual", id_ratio},
                        {"window", window},
                        {"dissipation_sign_ok", signs}};
    run.check(signs, "V' formula has the wrong sign");
    run.check(v_end <= 1e-3, "|V(+-T)| exceeds 1e-3");
    run.check(rel <= 0.05, "V' formula vs numeric discrepancy exceeds 5%");
    run.check(id_ratio <= 0.05, "weighted identity residual exceeds 5%");
    run.csv("hamiltonian.csv",
            {"t", "V", "Vprime_formula", "Vprime_numeric", "ut_integral", "uy_integral",
             "identity_lhs", "identity_rhs"},
            {&h.t, &h.V, &h.Vprime_formula, &h.Vprime_numeric, &h.ut_integral, &h.uy_integral,
             &h.identity_lhs, &h.identity_rhs});
}

void pipeline_ode(Run& run) {
    const RunConfig& cfg = run.cfg();
    ModelParams params = cfg.model_params();
    const int N = 40 * cfg.grid.Nt;
    OdeProfile p = ode_layer(params, cfg.grid.T, N);
    std::vector<double> ham = ode_hamiltonian_check(p, params.potential());
    std::vector<double> slack = limit_inequality_slack(p, params.potential());
    const double window = 0.8 * cfg.grid.T;
    double ham_sup = sup_abs_window(p.t, ham, window);
    double slack_min = 0.0;
    for (std::size_t i = 0; i < p.t.size(); ++i)
        if (std::abs(p.t[i]) <= window) slack_min = std::min(slack_min, slack[i]);
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < p.w.size(); ++i) monotone = monotone && p.w[i + 1] > p.w[i];
    json& r = run.results();
    r["ode"] = {{"N", N},
                {"drift", p.drift},
                {"iterations", p.iterations},
                {"max_residual", p.max_residual},
                {"hamiltonian_residual", ham_sup},
                {"inequality_min_slack", slack_min},
                {"window", window},
                {"monotone", monotone}};
    run.check(p.max_residual <= 1e-12, "ODE residual exceeds 1e-12");
    run.check(ham_sup <= 1e-4, "ODE Hamiltonian identity residual exceeds 1e-4");
    run.check(monotone, "ODE profile is not increasing");
    run.csv("ode.csv", {"t", "w", "wp", "residual", "hamiltonian_residual", "inequality_slack"},
            {&p.t, &p.w, &p.wp, &p.residual, &ham, &slack});
}

void pipeline_limit(Run& run) {
    const RunConfig& cfg = run.cfg();
    const std::vector<double> gammas = {0.80, 0.90, 0.95, 0.99};
    LimitStudy st = gamma_limit_study(gammas, cfg.model_params(), cfg.layer_grid_config(),
                                      cfg.solver_config());
    json rows = json::array();
    std::vector<std::vector<double>> cols(14);
    bool all = true;
    for (const LimitRow& row : st.rows) {
        all = all && row.solved;
        rows.push_back({{"gamma", row.gamma},
                        {"solved", row.solved},
                        {"e", row.e},
                        {"e_prime", row.e_prime},
                        {"e_second", row.e_second},
                        {"m", {row.m[0], row.m[1], row.m[2]}},
                        {"m_mismatch", {row.m_mismatch[0], row.m_mismatch[1], row.m_mismatch[2]}},
                        {"d_gamma_ratio", row.d_gamma_ratio},
                        {"t0", row.t0}});
        double v[14] = {row.gamma, row.e, row.e_prime, row.e_second, row.m[0], row.m[1], row.m[2],
                        row.m_mismatch[0], row.m_mismatch[1], row.m_mismatch[2],
                        row.d_gamma_ratio, row.t0, row.solved ? 1.0 : 0.0, 0.0};
        for (int c = 0; c < 13; ++c) cols[c].push_back(v[c]);
    }
    json& r = run.results();
    r["rows"] = rows;
    r["L_plus"] = st.L_plus;
    r["L_minus"] = st.L_minus;
    r["inequality_min_slack"] = st.inequality_min_slack;
    run.check(all, "a layer solve in the study failed");
    if (all) {
        bool e_dec = true, m_dec = true;
        for (std::size_t k = 1; k < st.rows.size(); ++k) {
            e_dec = e_dec && st.rows[k].e < st.rows[k - 1].e;
            m_dec = m_dec && st.rows[k].m_mismatch[0] < st.rows[k - 1].m_mismatch[0];
        }
        const LimitRow& last = st.rows.back();
        run.check(e_dec, "e(gamma) is not strictly decreasing");
        run.check(m_dec, "m(gamma, 0) mismatch is not strictly decreasing");
        run.check(last.e <= 0.05, "e(0.99) exceeds 0.05");
        run.check(std::abs(last.d_gamma_ratio - 1.0) <= 0.1, "d_gamma / (1 + a) is not within 10% of 1");
    }
    run.csv("limit.csv",
            {"gamma", "e", "e_prime", "e_second", "m_at_t0", "m_at_t1", "m_at_t2", "m_mismatch_t0", "m_mismatch_t1",
             "m_mismatch_t2", "d_gamma_ratio", "t0", "solved"},
            {&cols[0], &cols[1], &cols[2], &cols[3], &cols[4], &cols[5], &cols[6], &cols[7],
             &cols[8], &cols[9], &cols[10], &cols[11], &cols[12]});
    run.csv("limit_profile.csv", {"t", "w", "wp"}, {&st.limit.t, &st.limit.w, &st.limit.wp});
}

void pipeline_kernel(Run& run) {
    const ModelSection& m = run.cfg().model;
    if (m.n < 3 || m.n % 2 == 0) throw std::invalid_argument("kernel: n must be odd and >= 3");
    KernelSamples s = sample_kernel(1e-4, 100.0, 4000, m.n, m.gamma);
    const double rate = m.n - 1;
    LineFit near = fit_asymptotic_slopes(s, {1e-4, 1e-3});
    LineFit tail = fit_asymptotic_slopes(s, {30.0, 60.0}, SlopeFit::kCompensated, rate);
    double near_target = -(m.n + 2.0 * m.gamma), tail_target = -(1.0 + m.gamma);
    bool positive = std::all_of(s.values.begin(), s.values.end(), [](double v) { return v > 0.0; });
    json& r = run.results();
    r["kernel"] = {{"near_slope", near.slope}, {"near_target", near_target},
                   {"near_window", {1e-4, 1e-3}}, {"tail_slope", tail.slope},
                   {"tail_target", tail_target},  {"tail_window", {30.0, 60.0}},
                   {"tail_rate", rate},           {"positive", positive}};
    run.check(positive, "kernel is not positive on the sampled range");
    run.check(std::abs(near.slope - near_target) <= 0.05, "near-origin slope off by more than 0.05");
    run.check(std::abs(tail.slope - tail_target) <= 0.1, "compensated tail slope off by more than 0.1");
    std::vector<double> lr, lk, ck;
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        lr.push_back(std::log(s.rho[i]));
        lk.push_back(std::log(s.values[i]));
        ck.push_back(lk.back() + rate * s.rho[i]);
    }
    run.csv("kernel.csv", {"rho", "K", "log_rho", "log_K", "compensated_log_K"},
            {&s.rho, &s.values, &lr, &lk, &ck});
}

void pipeline_spectral(Run& run) {
    const RunConfig& cfg = run.cfg();
    if (cfg.model.n != 3) throw std::invalid_argument("spectral-check: only n = 3 is supported");
    SpectralCheckConfig sc;
    // Keeps the radial spacing equal to the layer t-spacing and scales with --grid-scale.
    sc.N = std::max(8, cfg.grid.Nt / 2);
    sc.solve.R = cfg.grid.R;
    sc.solve.Ny = cfg.grid.Ny;
    sc.solve.q = cfg.grid.q;
    sc.solve.solver = cfg.solver_config();
    SpectralCheck c = spectral_check(cfg.model.gamma, sc);
    json& r = run.results();
    r["spectral"] = {{"relative_l2", c.rel_l2},
                     {"L", sc.L},
                     {"N", sc.N},
                     {"bump_radius", sc.bump_radius},
                     {"reference_factor", sc.reference_factor},
                     {"solve", report_json(c.report)}};
    run.check(c.rel_l2 <= 0.02, "numeric DtN differs from the spectral multiplier by more than 2%");
    std::vector<double> rho;
    for (int j = 0; j <= sc.N; ++j) rho.push_back(c.data.rho(j));
    run.csv("spectral.csv", {"rho", "w", "dtn_numeric", "dtn_spectral"},
            {&rho, &c.data.samples, &c.numeric.samples, &c.reference.samples});
}

int run_one(const std::string& name, const RunConfig& cfg, std::ostream& log);

int workers_from_env() {
    const char* v = std::getenv("HYPLAYER_WORKERS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1) throw ConfigError(ConfigErrorKind::kValidation,
                                                 "HYPLAYER_WORKERS must be a positive integer");
    return static_cast<int>(std::min<long>(n, 64));
}

std::string cell_name(double gamma, int n, double T) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "gamma%.4g_n%d_T%.4g", gamma, n, T);
    return buf;
}

int pipeline_sweep(const RunConfig& cfg, std::ostream& log) {
    struct Cell {
        RunConfig cfg;
        std::string name;
        int code = -1;
        std::string status, message;
    };
    std::vector<Cell> cells;
    for (double g : cfg.sweep.gammas)
        for (int n : cfg.sweep.ns)
            for (double T : cfg.sweep.Ts) {
                Cell c{cfg, cell_name(g, n, T), -1, "", ""};
                c.cfg.model.gamma = g;
                c.cfg.model.n = n;
                if (c.cfg.model.mu > 0.0 && !(c.cfg.model.mu > n - 1)) c.cfg.model.mu = n;
                c.cfg.grid.Nt = std::max(8, static_cast<int>(std::lround(cfg.grid.Nt * T / cfg.grid.T)));
                c.cfg.grid.T = T;
                c.cfg.output.directory = (fs::path(cfg.output.directory) / c.name).string();
                cells.push_back(std::move(c));
            }
    const int workers = std::min<int>(workers_from_env(), static_cast<int>(cells.size()));
    log << "sweep: " << cells.size() << " cells on " << workers << " worker(s)\n";

    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&]() {
        for (std::size_t k; (k = next++) < cells.size();) {
            Cell& c = cells[k];
            std::ostringstream cell_log;
            try {
                validate_config(c.cfg);
                c.code = run_one("layer", c.cfg, cell_log);
            } catch (const ConfigError& e) {
                c.code = e.exit_code();
                c.message = e.what();
            } catch (const std::exception& e) {
                c.code = kExitSolver;
                c.message = e.what();
            }
            std::lock_guard<std::mutex> lock(log_mutex);
            log << "[" << c.name << "] exit " << c.code << "\n" << cell_log.str();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    json manifest;
    manifest["schema"] = "hyplayer-sweep-manifest-v1";
    manifest["cells"] = json::array();
    int worst = kExitOk, failed = 0;
    for (const Cell& c : cells) {
        std::string status = c.code == kExitOk ? "ok" : c.code == kExitDiagnostic ? "diagnostic_failure"
                                                                                   : "error";
        failed += c.code != kExitOk;
        if (c.code != kExitOk && (worst == kExitOk || c.code == kExitDiagnostic)) worst = c.code;
        manifest["cells"].push_back({{"gamma", c.cfg.model.gamma},
                                     {"n", c.cfg.model.n},
                                     {"T", c.cfg.grid.T},
                                     {"directory", c.name},
                                     {"exit_code", c.code},
                                     {"status", status},
                                     {"message", c.message}});
    }
    manifest["failed"] = failed;
    manifest["total"] = cells.size();
    fs::create_directories(cfg.output.directory);
    std::FILE* fp = std::fopen((fs::path(cfg.output.directory) / "manifest.json").string().c_str(), "w");
    if (!fp) {
        log << "error: cannot write manifest.json\n";
        return kExitIo;
    }
    std::string text = manifest.dump(2) + "\n";
    std::fwrite(text.data(), 1, text.size(), fp);
    std::fclose(fp);
    log << "sweep: " << failed << " of " << cells.size() << " cells failed\n";
    // A single diagnostic failure marks the sweep as a diagnostic failure; otherwise the first
    // operational code is returned.
    return worst;
}

int run_one(const std::string& name, const RunConfig& cfg, std::ostream& log) {
    try {
        fs::create_directories(cfg.output.directory);
    } catch (const std::exception& e) {
        log << "error: cannot create output directory: " << e.what() << "\n";
        return kExitIo;
    }
    Run run(name, cfg, log);
    log << name << ": gamma=" << cfg.model.gamma << " n=" << cfg.model.n << " -> "
        << cfg.output.directory << "\n";
    try {
        if (name == "layer") pipeline_layer(run);
        else if (name == "hamiltonian") pipeline_hamiltonian(run);
        else if (name == "ode") pipeline_ode(run);
        else if (name == "limit-study") pipeline_limit(run);
        else if (name == "kernel") pipeline_kernel(run);
        else if (name == "spectral-check") pipeline_spectral(run);
        else throw std::invalid_argument("unknown subcommand " + name);
    } catch (const LayerDiagnosticError& e) {
        run.check(false, e.what());
        return run.finish(kExitDiagnostic, "diagnostic_failure", e.what());
    } catch (const SolveFailure& e) {
        run.results()["solve"] = report_json(e.report());
        log << "error: " << e.what() << "\n";
        return run.finish(kExitSolver, "solver_failure", e.what());
    } catch (const IoError& e) {
        log << "error: " << e.what() << "\n";
        return run.finish(kExitIo, "io_failure", e.what());
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return run.finish(kExitValidation, "validation_failure", e.what());
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return run.finish(kExitSolver, "solver_failure", e.what());
    }
    if (!run.clean()) return run.finish(kExitDiagnostic, "diagnostic_failure", "property check failed");
    return run.finish(kExitOk, "ok", "");
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = {"layer",  "ode",            "limit-study", "hamiltonian",
                                                   "kernel", "spectral-check", "sweep"};
    return names;
}

int run_subcommand(const std::string& name, const RunConfig& cfg, std::ostream& log) {
    if (name == "sweep") {
        try {
            return pipeline_sweep(cfg, log);
        } catch (const ConfigError& e) {
            log << "error: " << e.what() << "\n";
            return e.exit_code();
        } catch (const std::exception& e) {
            log << "error: " << e.what() << "\n";
            return kExitIo;
        }
    }
    return run_one(name, cfg, log);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Layer solutions of fractional Allen-Cahn equations on hyperbolic space"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, out_dir;
    double gamma = 0.0;
    int grid_scale = 1;
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--out", out_dir, "output directory (overrides [output] directory)");
    app.add_option("--gamma", gamma, "fractional order (overrides [model] gamma)");
    app.add_option("--grid-scale", grid_scale, "multiplies Nt and Ny")->check(CLI::PositiveNumber);
    static const std::map<std::string, std::string> help = {
        {"layer", "solve the layer, write profile.csv"},
        {"ode", "solve the local (gamma = 1) profile, write ode.csv"},
        {"limit-study", "compare layers for gamma -> 1 with the local profile"},
        {"hamiltonian", "layer plus Hamiltonian diagnostics"},
        {"kernel", "sample the jump kernel and fit its asymptotic slopes"},
        {"spectral-check", "numeric DtN against the spectral multiplier (n = 3)"},
        {"sweep", "run the layer over the [sweep] grid of gamma, n, T"},
    };
    for (const auto& name : subcommand_names()) app.add_subcommand(name, help.at(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }
    const std::string name = app.get_subcommands().front()->get_name();

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = parse_config(config_path);
        if (app.count("--gamma")) cfg.model.gamma = gamma;
        if (!out_dir.empty()) cfg.output.directory = out_dir;
        cfg.grid.Nt *= grid_scale;
        cfg.grid.Ny *= grid_scale;
        validate_config(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    }
    return run_subcommand(name, cfg, std::cerr);
}

}  // namespace hyplayer
