#pragma once

#include "fcesched/classical.hpp"
#include "fcesched/kernels.hpp"
#include "fcesched/qubo.hpp"
#include "fcesched/trace.hpp"
#include "fcesched/vqe.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fcesched {

enum class BackendKind { sa, vqe_exact, vqe_sampled, vqe_noisy, brute, dp };

/// A solver backend plus, for vqe-noisy, the device profile. Written as
/// "sa", "vqe-exact", "vqe-sampled", "vqe-noisy" (brussels-like),
/// "vqe-noisy:nazca", "brute" or "dp".
struct BackendSpec {
    BackendKind kind = BackendKind::dp;
    NoiseProfile noise = NoiseProfile::none;

    [[nodiscard]] std::string tag() const;
    [[nodiscard]] static BackendSpec parse(const std::string &tag);
};

[[nodiscard]] std::vector<BackendSpec> parse_backends(const std::string &comma_list);

enum class RefMode { exact, sa_min };

[[nodiscard]] std::string to_string(RefMode m);
[[nodiscard]] RefMode parse_ref_mode(const std::string &s);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0; ///< sample standard deviation, 0 for a single value
};

[[nodiscard]] MeanStd mean_std(std::span<const double> values);

/// Mean trial energy minus the reference, with the spread over trials.
[[nodiscard]] MeanStd residual_energy(std::span<const double> trial_energies, double e_ref);
[[nodiscard]] MeanStd residual_energy(std::span<const TrialRecord> trials, double e_ref);

struct BestSchedule {
    Schedule schedule;
    double s_max = 0.0;
    std::size_t trial = 0;
};

/// Feasible trial with the largest transition score; earliest on ties.
/// Throws InfeasibleError when no trial is feasible.
[[nodiscard]] BestSchedule best_smax(std::span<const TrialRecord> trials,
                                     const TransitionMatrix &w);

/// Planted family member: 99 on both directions of the 20%/60% pair, every
/// other entry a seeded multiple of 10 in [0, background_max].
[[nodiscard]] TransitionMatrix planted_transition_matrix(std::size_t z, std::uint64_t seed,
                                                         int background_max = 0);

/// Alternating between the two planted levels, starting from either one.
[[nodiscard]] bool is_planted_alternation(const Schedule &s, const TransitionMatrix &w);

struct BenchmarkRun {
    BackendSpec backend;
    std::size_t n_orders = 0;
    std::size_t z_levels = 0;
    std::vector<TrialRecord> trials;
    double e_ref = 0.0;
    RefMode e_ref_mode = RefMode::exact;
};

struct SolveOptions {
    double a = kDefaultPenalty;
    double b = kDefaultReward;
    SaParams sa;
    VqeConfig vqe;
};

/// Dispatches one backend on q (built from w). `seed` replaces the seeds
/// inside the option structs.
[[nodiscard]] SolverResult run_backend(const BackendSpec &backend, const QuboProblem &q,
                                       const TransitionMatrix &w, const SolveOptions &options,
                                       std::uint64_t seed, Exec exec = Exec::parallel);

/// Reference minimum for residual energies.
[[nodiscard]] double reference_energy(const QuboProblem &q, const TransitionMatrix &w,
                                      RefMode mode, const SolveOptions &options,
                                      std::uint64_t seed);

struct SweepConfig {
    std::vector<BackendSpec> backends;
    std::size_t n_min = 2;
    std::size_t n_max = 10;
    std::size_t repeats = 1;
    RefMode ref_mode = RefMode::exact;
    SolveOptions options;
    /// Fixed matrix for every cell; when absent each repeat draws a planted
    /// family member.
    std::optional<TransitionMatrix> w;
    std::size_t z_levels = 9;
    int background_max = 0;
    std::uint64_t seed = kDefaultSeed;

    void validate() const;
};

struct SweepRow {
    std::string backend;
    std::size_t n = 0;
    MeanStd e_res;
    MeanStd s_max;
    std::size_t trials = 0;
    std::size_t feasible_trials = 0;
    std::vector<double> best_schedule; ///< percent labels, empty if none feasible
    std::vector<MeanStd> per_repeat;   ///< residual energy of each repeat
};

/// One row per (backend, N). Trial energies are pooled over repeats.
/// Seeds depend on (seed, N, repeat) only, so backends see the same
/// matrices and starting points.
[[nodiscard]] std::vector<SweepRow> sweep(const SweepConfig &cfg, Exec exec = Exec::parallel);

} // namespace fcesched
