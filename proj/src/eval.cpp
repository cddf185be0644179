#include "fcesched/eval.hpp"

#include "fcesched/errors.hpp"
#include "fcesched/rng.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace fcesched {

std::string BackendSpec::tag() const {
    switch (kind) {
    case BackendKind::sa: return "sa";
    case BackendKind::vqe_exact: return "vqe-exact";
    case BackendKind::vqe_sampled: return "vqe-sampled";
    case BackendKind::vqe_noisy:
        return noise == NoiseProfile::brussels ? "vqe-noisy" : "vqe-noisy:" + to_string(noise);
    case BackendKind::brute: return "brute";
    case BackendKind::dp: return "dp";
    }
    return "dp";
}

BackendSpec BackendSpec::parse(const std::string &tag) {
    if (tag == "sa") return {BackendKind::sa, NoiseProfile::none};
    if (tag == "vqe-exact") return {BackendKind::vqe_exact, NoiseProfile::none};
    if (tag == "vqe-sampled") return {BackendKind::vqe_sampled, NoiseProfile::none};
    if (tag == "vqe-noisy") return {BackendKind::vqe_noisy, NoiseProfile::brussels};
    if (tag == "brute") return {BackendKind::brute, NoiseProfile::none};
    if (tag == "dp") return {BackendKind::dp, NoiseProfile::none};
    const std::string prefix = "vqe-noisy:";
    if (tag.rfind(prefix, 0) == 0) {
        const NoiseProfile p = parse_noise_profile(tag.substr(prefix.size()));
        if (p != NoiseProfile::brussels && p != NoiseProfile::nazca) {
            throw UsageError("vqe-noisy takes a device profile (brussels or nazca)");
        }
        return {BackendKind::vqe_noisy, p};
    }
    throw UsageError("unknown backend '" + tag + "'");
}

std::vector<BackendSpec> parse_backends(const std::string &comma_list) {
    std::vector<BackendSpec> out;
    std::stringstream ss(comma_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(BackendSpec::parse(item));
        }
    }
    if (out.empty()) {
        throw UsageError("no backends given");
    }
    return out;
}

std::string to_string(RefMode m) {
    return m == RefMode::exact ? "exact" : "sa-min";
}

RefMode parse_ref_mode(const std::string &s) {
    if (s == "exact") return RefMode::exact;
    if (s == "sa-min") return RefMode::sa_min;
    throw UsageError("unknown reference mode '" + s + "'");
}

MeanStd mean_std(std::span<const double> values) {
    if (values.empty()) {
        throw EmptyInputError("no values to aggregate");
    }
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
}

MeanStd residual_energy(std::span<const double> trial_energies, double e_ref) {
    if (trial_energies.empty()) {
        throw EmptyInputError("no trials to aggregate");
    }
    const MeanStd e = mean_std(trial_energies);
    return {e.mean - e_ref, e.std};
}

MeanStd residual_energy(std::span<const TrialRecord> trials, double e_ref) {
    std::vector<double> energies;
    energies.reserve(trials.size());
    for (const TrialRecord &t : trials) {
        energies.push_back(t.energy);
    }
    return residual_energy(energies, e_ref);
}

BestSchedule best_smax(std::span<const TrialRecord> trials, const TransitionMatrix &w) {
    std::optional<BestSchedule> best;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        if (!trials[i].feasible || !trials[i].schedule) {
            continue;
        }
        const double s = s_max(w, *trials[i].schedule);
        if (!best || s > best->s_max) {
            best = BestSchedule{*trials[i].schedule, s, i};
        }
    }
    if (!best) {
        std::vector<std::size_t> all(trials.size());
        for (std::size_t i = 0; i < all.size(); ++i) {
            all[i] = i;
        }
        throw InfeasibleError(std::move(all));
    }
    return *best;
}

TransitionMatrix planted_transition_matrix(std::size_t z, std::uint64_t seed,
                                           int background_max) {
    if (background_max < 0 || background_max > 90) {
        throw ConfigError("background_max must lie in [0, 90]");
    }
    std::vector<double> levels = default_levels(z);
    const PlantedPair pair = planted_pair(levels);
    Rng rng = make_rng(seed, {0x706c616e74ULL});
    std::uniform_int_distribution<int> pick(0, background_max / 10);
    std::vector<int> w(z * z, 0);
    for (std::size_t i = 0; i < z; ++i) {
        for (std::size_t j = 0; j < z; ++j) {
            w[i * z + j] = 10 * pick(rng);
        }
    }
    w[pair.first * z + pair.second] = 99;
    w[pair.second * z + pair.first] = 99;
    return TransitionMatrix(std::move(levels), std::move(w));
}

bool is_planted_alternation(const Schedule &s, const TransitionMatrix &w) {
    const PlantedPair pair = planted_pair(w.levels());
    if (s.size() == 0) {
        return false;
    }
    const std::size_t start = s.levels[0];
    if (start != pair.first && start != pair.second) {
        return false;
    }
    const std::size_t other = start == pair.first ? pair.second : pair.first;
    for (std::size_t o = 0; o < s.size(); ++o) {
        if (s.levels[o] != (o % 2 == 0 ? start : other)) {
            return false;
        }
    }
    return true;
}

SolverResult run_backend(const BackendSpec &backend, const QuboProblem &q,
                         const TransitionMatrix &w, const SolveOptions &options,
                         std::uint64_t seed, Exec exec) {
    switch (backend.kind) {
    case BackendKind::sa: {
        SaParams p = options.sa;
        p.seed = seed;
        return sa_solve(q, p, exec);
    }
    case BackendKind::vqe_exact:
    case BackendKind::vqe_sampled:
    case BackendKind::vqe_noisy: {
        VqeConfig cfg = options.vqe;
        cfg.seed = seed;
        cfg.evaluator = backend.kind == BackendKind::vqe_exact ? EvaluatorKind::exact
                                                               : EvaluatorKind::sampled;
        cfg.noise = backend.kind == BackendKind::vqe_noisy ? backend.noise : NoiseProfile::none;
        return vqe_solve(q, cfg, exec).result;
    }
    case BackendKind::brute: {
        const auto start = std::chrono::steady_clock::now();
        BruteForceResult r = brute_force(q, exec);
        std::vector<TrialRecord> trials;
        trials.push_back(make_trial(q, std::move(r.bits)));
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        return collect_trials(std::move(trials), dt.count());
    }
    case BackendKind::dp: {
        const auto start = std::chrono::steady_clock::now();
        const DpResult r = dp_exact(w, q.n_orders(), q.b());
        std::vector<TrialRecord> trials;
        trials.push_back(make_trial(q, encode_schedule(r.schedule, w.z())));
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        return collect_trials(std::move(trials), dt.count());
    }
    }
    throw UsageError("unhandled backend");
}

double reference_energy(const QuboProblem &q, const TransitionMatrix &w, RefMode mode,
                        const SolveOptions &options, std::uint64_t seed) {
    if (mode == RefMode::exact) {
        return dp_exact(w, q.n_orders(), q.b()).energy;
    }
    SaParams p = options.sa;
    p.seed = derive_seed(seed, {0x726566ULL});
    return sa_solve(q, p).best_energy;
}

void SweepConfig::validate() const {
    if (backends.empty()) {
        throw ConfigError("sweep needs at least one backend");
    }
    if (n_min < 2 || n_max < n_min) {
        throw ConfigError("sweep order range must satisfy 2 <= n_min <= n_max");
    }
    if (repeats < 1) {
        throw ConfigError("repeats must be at least 1");
    }
    const std::size_t z = w ? w->z() : z_levels;
    for (const BackendSpec &b : backends) {
        if (b.kind == BackendKind::brute && n_max * z > kBruteForceMaxVars) {
            throw ConfigError("brute backend needs n_max * Z <= " +
                              std::to_string(kBruteForceMaxVars));
        }
    }
    options.sa.validate();
    options.vqe.validate();
}

std::vector<SweepRow> sweep(const SweepConfig &cfg, Exec exec) {
    cfg.validate();
    const std::size_t n_count = cfg.n_max - cfg.n_min + 1;
    // cells[b][n - n_min][r]
    std::vector<std::vector<std::vector<std::vector<TrialRecord>>>> cells(
        cfg.backends.size(),
        std::vector<std::vector<std::vector<TrialRecord>>>(
            n_count, std::vector<std::vector<TrialRecord>>(cfg.repeats)));
    std::vector<std::vector<double>> refs(n_count, std::vector<double>(cfg.repeats, 0.0));
    std::optional<std::vector<double>> levels;

    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        const TransitionMatrix w =
            cfg.w ? *cfg.w
                  : planted_transition_matrix(cfg.z_levels, derive_seed(cfg.seed, {0x57ULL, r}),
                                              cfg.background_max);
        levels = w.levels();
        for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
            const std::uint64_t cell_seed = derive_seed(cfg.seed, {n, r});
            const QuboProblem q = build_qubo(w, n, cfg.options.a, cfg.options.b);
            refs[n - cfg.n_min][r] = reference_energy(q, w, cfg.ref_mode, cfg.options, cell_seed);
            for (std::size_t bi = 0; bi < cfg.backends.size(); ++bi) {
                cells[bi][n - cfg.n_min][r] =
                    run_backend(cfg.backends[bi], q, w, cfg.options, cell_seed, exec).per_trial;
            }
        }
    }

    std::vector<SweepRow> rows;
    for (std::size_t bi = 0; bi < cfg.backends.size(); ++bi) {
        for (std::size_t n = cfg.n_min; n <= cfg.n_max; ++n) {
            SweepRow row;
            row.backend = cfg.backends[bi].tag();
            row.n = n;
            std::vector<double> residuals;
            std::vector<double> scores;
            const TrialRecord *best = nullptr;
            for (std::size_t r = 0; r < cfg.repeats; ++r) {
                const auto &trials = cells[bi][n - cfg.n_min][r];
                const double ref = refs[n - cfg.n_min][r];
                row.per_repeat.push_back(residual_energy(trials, ref));
                for (const TrialRecord &t : trials) {
                    residuals.push_back(t.energy - ref);
                    if (t.feasible && t.s_max) {
                        scores.push_back(*t.s_max);
                        if (best == nullptr || *t.s_max > *best->s_max) {
                            best = &t;
                        }
                    }
                }
            }
            row.trials = residuals.size();
            row.feasible_trials = scores.size();
            row.e_res = mean_std(residuals);
            if (!scores.empty()) {
                row.s_max = mean_std(scores);
            }
            if (best != nullptr) {
                for (std::size_t level : best->schedule->levels) {
                    row.best_schedule.push_back(levels->at(level));
                }
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace fcesched
