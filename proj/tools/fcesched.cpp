// Command-line front end: gen-traces, score, solve, sweep, report.

#include "fcesched/classical.hpp"
#include "fcesched/errors.hpp"
#include "fcesched/eval.hpp"
#include "fcesched/io.hpp"
#include "fcesched/qubo.hpp"
#include "fcesched/trace.hpp"
#include "fcesched/vqe.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace fcesched;

namespace {

constexpr const char *kOutDirEnv = "FCESCHED_OUT_DIR";

struct Globals {
    std::uint64_t seed = kDefaultSeed;
    bool json_logs = false;
};

Globals globals;

void log(const char *level, const std::string &msg, const Json &fields = Json::object()) {
    if (globals.json_logs) {
        Json rec{{"level", level}, {"msg", msg}};
        for (const auto &[k, v] : fields.items()) {
            rec[k] = v;
        }
        std::cerr << rec.dump() << '\n';
    } else {
        std::cerr << "[" << level << "] " << msg;
        if (!fields.empty()) {
            std::cerr << ' ' << fields.dump();
        }
        std::cerr << '\n';
    }
}

/// Relative output paths land in $FCESCHED_OUT_DIR when it is set.
fs::path output_path(const std::string &p) {
    fs::path path(p);
    const char *dir = std::getenv(kOutDirEnv);
    if (path.is_relative() && dir != nullptr && *dir != '\0') {
        path = fs::path(dir) / path;
    }
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    return path;
}

fs::path sibling(const fs::path &p, const std::string &suffix) {
    fs::path out = p;
    out.replace_extension();
    out += suffix;
    return out;
}

// Parses "2..6" or "4".
std::pair<std::size_t, std::size_t> parse_range(const std::string &s) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            const auto v = static_cast<std::size_t>(std::stoul(s));
            return {v, v};
        }
        return {static_cast<std::size_t>(std::stoul(s.substr(0, dots))),
                static_cast<std::size_t>(std::stoul(s.substr(dots + 2)))};
    } catch (const std::exception &) {
        throw UsageError("order range must look like 2..6, got '" + s + "'");
    }
}

struct MatrixSource {
    std::string path;
    std::size_t planted_z = 9;
    int background = 0;
    bool planted = false;

    void add_options(CLI::App *cmd) {
        cmd->add_option("--w", path, "Transition matrix JSON");
        cmd->add_flag("--planted", planted,
                      "Use a planted matrix (99 on the 20%/60% pair) instead of --w");
        cmd->add_option("--levels", planted_z, "Number of levels for --planted")
            ->check(CLI::Range(2, 64));
        cmd->add_option("--background", background,
                        "Largest background entry for planted matrices (0..90)");
    }

    [[nodiscard]] std::optional<TransitionMatrix> load_fixed() const {
        if (!path.empty()) {
            return transition_from_json(Json::parse(read_text_file(path)));
        }
        return std::nullopt;
    }

    [[nodiscard]] TransitionMatrix load(std::uint64_t seed) const {
        if (auto w = load_fixed()) {
            return *w;
        }
        if (!planted) {
            throw UsageError("give a transition matrix with --w or use --planted");
        }
        return planted_transition_matrix(planted_z, seed, background);
    }

    [[nodiscard]] Json describe() const {
        if (!path.empty()) {
            return Json{{"w", path}};
        }
        return Json{{"planted", true}, {"levels", planted_z}, {"background", background}};
    }
};

struct SolverOptions {
    double a = kDefaultPenalty;
    double b = kDefaultReward;
    SaParams sa;
    VqeConfig vqe;
    std::string vqe_config_path;
    std::string evaluator = "exact";
    std::string noise = "none";
    double noise_eps = 0.0;

    void add_options(CLI::App *cmd) {
        cmd->add_option("--a", a, "One-hot penalty weight");
        cmd->add_option("--b", b, "Transition reward weight");
        cmd->add_option("--reads", sa.num_reads, "SA reads");
        cmd->add_option("--sweeps", sa.sweeps, "SA sweeps per read");
        cmd->add_option("--beta-hot", sa.beta_hot, "SA initial inverse temperature");
        cmd->add_option("--beta-cold", sa.beta_cold, "SA final inverse temperature");
        cmd->add_option("--vqe-config", vqe_config_path, "VQE config JSON");
        cmd->add_option("--shots", vqe.shots, "Shots per objective evaluation");
        cmd->add_option("--iterations", vqe.iterations, "NFT parameter updates per trial");
        cmd->add_option("--trials", vqe.trials, "Random restarts");
        cmd->add_option("--evaluator", evaluator, "exact | sampled")
            ->check(CLI::IsMember({"exact", "sampled"}));
        cmd->add_option("--noise", noise, "none | brussels | nazca | symmetric")
            ->check(CLI::IsMember({"none", "brussels", "nazca", "symmetric"}));
        cmd->add_option("--noise-eps", noise_eps, "Rate for --noise symmetric");
    }

    // Command-line flags override a --vqe-config file only where given.
    void resolve(const CLI::App *cmd) {
        if (!vqe_config_path.empty()) {
            VqeConfig file = vqe_config_from_json(Json::parse(read_text_file(vqe_config_path)));
            if (cmd->count("--shots") > 0) file.shots = vqe.shots;
            if (cmd->count("--iterations") > 0) file.iterations = vqe.iterations;
            if (cmd->count("--trials") > 0) file.trials = vqe.trials;
            if (cmd->count("--evaluator") > 0) file.evaluator = parse_evaluator(evaluator);
            if (cmd->count("--noise") > 0) file.noise = parse_noise_profile(noise);
            if (cmd->count("--noise-eps") > 0) file.noise_eps = noise_eps;
            vqe = file;
        } else {
            vqe.evaluator = parse_evaluator(evaluator);
            vqe.noise = parse_noise_profile(noise);
            vqe.noise_eps = noise_eps;
        }
        sa.validate();
        vqe.validate();
    }

    [[nodiscard]] SolveOptions to_solve_options() const {
        SolveOptions o;
        o.a = a;
        o.b = b;
        o.sa = sa;
        o.vqe = vqe;
        return o;
    }
};

// ---------------------------------------------------------------------------

int cmd_gen_traces(const GeneratorConfig &config, const std::string &out) {
    const ConductanceTrace trace = generate_synthetic_trace(config);
    const Json cfg{{"command", "gen-traces"},
                   {"cycles", config.n_cycles},
                   {"levels", config.z_levels},
                   {"noise", config.noise_amplitude},
                   {"seed", config.seed}};
    const fs::path path = output_path(out);
    const std::string text = trace_to_csv(trace, cfg);
    write_text_file(path, text);
    const ConductanceTrace check = trace_from_csv(read_text_file(path));
    if (check.fb_events.size() != config.n_cycles) {
        throw IoError("written trace does not read back with the expected cycle count");
    }
    log("info", "wrote trace",
        {{"path", path.string()}, {"cycles", config.n_cycles}, {"samples", trace.samples.size()}});
    return EXIT_SUCCESS;
}

int cmd_score(const std::vector<std::string> &inputs, double tolerance, std::size_t z,
              const std::string &out) {
    std::vector<ScoreObservation> db;
    std::size_t cycles = 0;
    for (const std::string &in : inputs) {
        const std::string text = read_text_file(in);
        const ConductanceTrace trace = trace_from_csv(text);
        const std::vector<ScoreObservation> obs = trace_observations(trace, tolerance);
        cycles += trace.fb_events.size();
        db.insert(db.end(), obs.begin(), obs.end());
    }
    if (db.empty()) {
        throw EmptyInputError("traces contain fewer than two feedback cycles");
    }
    const std::vector<double> levels = z > 0 ? default_levels(z) : std::vector<double>{};
    const TransitionMatrix w = build_transition_matrix(db, levels);
    Json j = transition_to_json(w);
    j["config"] = Json{{"command", "score"},
                       {"inputs", inputs},
                       {"tolerance", tolerance},
                       {"levels", z},
                       {"cycles", cycles},
                       {"transitions", db.size()}};
    const fs::path path = output_path(out);
    write_text_file(path, j.dump(2) + "\n");
    (void)transition_from_json(Json::parse(read_text_file(path)));
    log("info", "wrote transition matrix",
        {{"path", path.string()}, {"z", w.z()}, {"max", w.max_entry()}});
    return EXIT_SUCCESS;
}

int cmd_solve(const MatrixSource &source, SolverOptions &opts, const CLI::App *cmd,
              const std::string &backend_name, std::size_t n_orders, const std::string &out,
              std::string trajectory_out, const std::string &qubo_out, bool timing) {
    opts.resolve(cmd);
    const std::uint64_t seed = globals.seed;
    const TransitionMatrix w = source.load(seed);
    if (n_orders > 10) {
        log("warn", "N above 10 is outside the studied range", {{"n", n_orders}});
    }
    const QuboProblem q = build_qubo(w, n_orders, opts.a, opts.b);
    if (!qubo_out.empty()) {
        write_text_file(output_path(qubo_out), qubo_to_json(q).dump() + "\n");
    }

    BackendSpec spec;
    if (backend_name == "vqe") {
        spec.kind = opts.vqe.evaluator == EvaluatorKind::exact ? BackendKind::vqe_exact
                                                               : BackendKind::vqe_sampled;
    } else {
        spec = BackendSpec::parse(backend_name);
    }

    Json config{{"command", "solve"},
                {"backend", backend_name},
                {"n_orders", n_orders},
                {"a", opts.a},
                {"b", opts.b},
                {"seed", seed},
                {"source", source.describe()}};

    SolverResult result;
    std::optional<std::vector<TrajectoryPoint>> trajectory;
    if (spec.kind == BackendKind::vqe_exact || spec.kind == BackendKind::vqe_sampled ||
        spec.kind == BackendKind::vqe_noisy) {
        VqeConfig cfg = opts.vqe;
        cfg.seed = seed;
        if (backend_name != "vqe") {
            cfg.evaluator = spec.kind == BackendKind::vqe_exact ? EvaluatorKind::exact
                                                                : EvaluatorKind::sampled;
            if (spec.kind == BackendKind::vqe_noisy) {
                cfg.noise = spec.noise;
            }
        }
        config["vqe"] = vqe_config_to_json(cfg);
        VqeResult vr = vqe_solve(q, cfg);
        result = std::move(vr.result);
        trajectory = std::move(vr.trajectories[vr.best_trial]);
        config["best_trial"] = vr.best_trial;
    } else {
        if (spec.kind == BackendKind::sa) {
            SaParams p = opts.sa;
            p.seed = seed;
            config["sa"] = sa_params_to_json(p);
        }
        result = run_backend(spec, q, w, opts.to_solve_options(), seed);
    }

    Json extra{{"backend", spec.tag()}, {"config", config}};
    if (timing) {
        extra["wall_time"] = result.wall_time;
    }
    const fs::path path = output_path(out);
    write_text_file(path, solver_result_to_jsonl(result, q, extra));
    if (trajectory) {
        const fs::path tpath =
            trajectory_out.empty() ? sibling(path, ".trajectory.csv") : output_path(trajectory_out);
        write_text_file(tpath, trajectory_to_csv(*trajectory, config));
        log("info", "wrote trajectory", {{"path", tpath.string()}});
    }
    log("info", "solved",
        {{"backend", spec.tag()},
         {"n", n_orders},
         {"best_energy", result.best_energy},
         {"feasible", result.feasible},
         {"wall_time", result.wall_time},
         {"path", path.string()}});
    return EXIT_SUCCESS;
}

int cmd_sweep(const MatrixSource &source, SolverOptions &opts, const CLI::App *cmd,
              const std::string &backends, const std::string &range, std::size_t repeats,
              const std::string &ref, const std::string &out, std::string json_out) {
    opts.resolve(cmd);
    SweepConfig cfg;
    cfg.backends = parse_backends(backends);
    std::tie(cfg.n_min, cfg.n_max) = parse_range(range);
    if (cfg.n_min < 2) {
        throw UsageError("sweep needs N >= 2");
    }
    if (cfg.n_max > 10) {
        log("warn", "N above 10 is outside the studied range", {{"n_max", cfg.n_max}});
    }
    cfg.repeats = repeats;
    cfg.ref_mode = parse_ref_mode(ref);
    cfg.options = opts.to_solve_options();
    cfg.w = source.load_fixed();
    if (!cfg.w && !source.planted) {
        throw UsageError("give a transition matrix with --w or use --planted");
    }
    cfg.z_levels = source.planted_z;
    cfg.background_max = source.background;
    cfg.seed = globals.seed;

    const Json config{{"command", "sweep"},
                      {"backends", backends},
                      {"n_range", range},
                      {"repeats", repeats},
                      {"ref", ref},
                      {"a", cfg.options.a},
                      {"b", cfg.options.b},
                      {"sa", sa_params_to_json(cfg.options.sa)},
                      {"vqe", vqe_config_to_json(cfg.options.vqe)},
                      {"seed", cfg.seed},
                      {"source", source.describe()}};
    const std::vector<SweepRow> rows = sweep(cfg);
    const fs::path path = output_path(out);
    write_text_file(path, sweep_to_csv(rows, config));
    const fs::path jpath = json_out.empty() ? sibling(path, ".json") : output_path(json_out);
    write_text_file(jpath, sweep_to_json(rows, config).dump(2) + "\n");
    if (sweep_from_csv(read_text_file(path)).size() != rows.size()) {
        throw IoError("sweep CSV does not read back");
    }
    log("info", "wrote sweep", {{"path", path.string()}, {"rows", rows.size()}});
    return EXIT_SUCCESS;
}

int cmd_report(const std::string &in, const std::string &out) {
    const std::vector<SweepRow> rows = sweep_from_csv(read_text_file(in));
    std::printf("%-18s %3s %12s %10s %10s %9s  %s\n", "backend", "N", "E_res", "std", "S_max",
                "std", "best schedule");
    for (const SweepRow &r : rows) {
        std::string sched;
        for (double v : r.best_schedule) {
            sched += (sched.empty() ? "" : "-") + format_double(v);
        }
        if (r.feasible_trials > 0 || r.trials == 0) {
            std::printf("%-18s %3zu %12.2f %10.2f %10.2f %9.2f  %s\n", r.backend.c_str(), r.n,
                        r.e_res.mean, r.e_res.std, r.s_max.mean, r.s_max.std, sched.c_str());
        } else {
            std::printf("%-18s %3zu %12.2f %10.2f %10s %9s  %s\n", r.backend.c_str(), r.n,
                        r.e_res.mean, r.e_res.std, "-", "-", "(none feasible)");
        }
    }
    if (!out.empty()) {
        const Json summary = sweep_to_json(rows, Json{{"command", "report"}, {"input", in}});
        write_text_file(output_path(out), summary.dump(2) + "\n");
    }
    return EXIT_SUCCESS;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Feedback-voltage schedule optimization: trace scoring, QUBO construction "
                 "and ground-state search"};
    app.require_subcommand(1);
    app.add_option("--seed", globals.seed, "Random seed (default " +
                                                 std::to_string(kDefaultSeed) + ")");
    app.add_flag("--json-logs", globals.json_logs, "Emit logs as JSON lines on stderr");

    GeneratorConfig gen;
    std::string gen_out = "traces.csv";
    auto *gen_cmd = app.add_subcommand("gen-traces", "Generate a synthetic conductance trace");
    gen_cmd->add_option("--cycles", gen.n_cycles, "Feedback cycles");
    gen_cmd->add_option("--levels", gen.z_levels, "Number of feedback levels");
    gen_cmd->add_option("--noise", gen.noise_amplitude, "Conductance noise (G0 units)");
    gen_cmd->add_option("-o,--out", gen_out, "Output CSV");

    std::vector<std::string> score_in;
    double tolerance = 0.5;
    std::size_t score_levels = 0;
    std::string score_out = "w.json";
    auto *score_cmd = app.add_subcommand("score", "Score traces into a transition matrix");
    score_cmd->add_option("-i,--in", score_in, "Trace CSV file(s)")->required();
    score_cmd->add_option("--tolerance", tolerance, "Plateau band half-width (G0)");
    score_cmd->add_option("--levels", score_levels,
                          "Expected number of levels (default: labels found in the traces)");
    score_cmd->add_option("-o,--out", score_out, "Output JSON");

    MatrixSource solve_src;
    SolverOptions solve_opts;
    std::string backend;
    std::size_t n_orders = 2;
    std::string solve_out = "result.jsonl";
    std::string trajectory_out;
    std::string qubo_out;
    bool timing = false;
    auto *solve_cmd = app.add_subcommand("solve", "Search the schedule QUBO for its ground state");
    solve_src.add_options(solve_cmd);
    solve_opts.add_options(solve_cmd);
    solve_cmd->add_option("--backend", backend,
                          "dp | brute | sa | vqe | vqe-exact | vqe-sampled | vqe-noisy[:profile]")
        ->required();
    solve_cmd->add_option("-N,--orders", n_orders, "Number of orders")->required();
    solve_cmd->add_option("-o,--out", solve_out, "Output JSONL");
    solve_cmd->add_option("--trajectory", trajectory_out, "VQE trajectory CSV");
    solve_cmd->add_option("--qubo-out", qubo_out, "Also write the QUBO as JSON");
    solve_cmd->add_flag("--timing", timing, "Record wall time in the summary record");

    MatrixSource sweep_src;
    SolverOptions sweep_opts;
    std::string backends = "dp,sa,vqe-exact";
    std::string range = "2..10";
    std::size_t repeats = 1;
    std::string ref = "exact";
    std::string sweep_out = "sweep.csv";
    std::string sweep_json;
    auto *sweep_cmd = app.add_subcommand("sweep", "Residual energy and S_max versus N");
    sweep_src.add_options(sweep_cmd);
    sweep_opts.add_options(sweep_cmd);
    sweep_cmd->add_option("--backends", backends, "Comma-separated backend list");
    sweep_cmd->add_option("-N,--orders", range, "Order range, e.g. 2..6");
    sweep_cmd->add_option("--repeats", repeats, "Independent repeats per cell");
    sweep_cmd->add_option("--ref", ref, "Reference energy: exact | sa-min")
        ->check(CLI::IsMember({"exact", "sa-min"}));
    sweep_cmd->add_option("-o,--out", sweep_out, "Output CSV");
    sweep_cmd->add_option("--json", sweep_json, "JSON summary path (default next to the CSV)");

    std::string report_in;
    std::string report_out;
    auto *report_cmd = app.add_subcommand("report", "Print a sweep CSV as a table");
    report_cmd->add_option("-i,--in", report_in, "Sweep CSV")->required();
    report_cmd->add_option("-o,--out", report_out, "Optional JSON summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (*gen_cmd) {
            gen.seed = globals.seed;
            return cmd_gen_traces(gen, gen_out);
        }
        if (*score_cmd) {
            return cmd_score(score_in, tolerance, score_levels, score_out);
        }
        if (*solve_cmd) {
            return cmd_solve(solve_src, solve_opts, solve_cmd, backend, n_orders, solve_out,
                             trajectory_out, qubo_out, timing);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep_src, sweep_opts, sweep_cmd, backends, range, repeats, ref,
                             sweep_out, sweep_json);
        }
        if (*report_cmd) {
            return cmd_report(report_in, report_out);
        }
    } catch (const UsageError &e) {
        log("error", e.what(), {{"kind", "usage"}});
        return 2;
    } catch (const ConfigError &e) {
        log("error", e.what(), {{"kind", "config"}});
        return 3;
    } catch (const EmptyInputError &e) {
        log("error", e.what(), {{"kind", "empty-input"}});
        return 4;
    } catch (const ParseError &e) {
        log("error", e.what(), {{"kind", "parse"}, {"line", e.line()}});
        return 5;
    } catch (const IoError &e) {
        log("error", e.what(), {{"kind", "io"}});
        return 6;
    } catch (const Error &e) {
        log("error", e.what(), {{"kind", "domain"}});
        return 1;
    } catch (const std::exception &e) {
        log("error", e.what(), {{"kind", "internal"}});
        return 1;
    }
    return EXIT_FAILURE;
}
