#pragma once

#include "fcesched/kernels.hpp"
#include "fcesched/qubo.hpp"
#include "fcesched/rng.hpp"
#include "fcesched/trace.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace fcesched {

struct SaParams {
    std::size_t num_reads = 10;
    std::size_t sweeps = 100000;
    double beta_hot = 0.004;
    double beta_cold = 10.0;
    std::uint64_t seed = kDefaultSeed;

    void validate() const;
};

/// Outcome of one read / restart.
struct TrialRecord {
    Bitstring bits;
    double energy = 0.0;
    bool feasible = false;
    std::optional<Schedule> schedule;
    std::optional<double> s_max;
};

struct SolverResult {
    Bitstring best_bits;
    double best_energy = 0.0;
    bool feasible = false;
    std::optional<Schedule> schedule;
    std::optional<double> s_max;
    std::vector<TrialRecord> per_trial;
    double wall_time = 0.0; ///< seconds
};

/// Evaluates x on q and fills feasibility, schedule and S_max (the latter
/// only when q knows its transition matrix).
[[nodiscard]] TrialRecord make_trial(const QuboProblem &q, Bitstring x);

/// Best trial = lowest energy, earliest on ties.
[[nodiscard]] SolverResult collect_trials(std::vector<TrialRecord> trials, double wall_time);

/// Single-bit-flip Metropolis annealing with a geometric inverse-temperature
/// schedule. Each read draws from its own stream derived from (seed, read).
[[nodiscard]] SolverResult sa_solve(const QuboProblem &q, const SaParams &p,
                                    Exec exec = Exec::parallel);

/// Global minimum over all 2^num_vars bitstrings (num_vars <= 20).
[[nodiscard]] BruteForceResult brute_force(const QuboProblem &q, Exec exec = Exec::parallel);

struct DpResult {
    Schedule schedule;
    double s_max = 0.0;
    double energy = 0.0; ///< -b * s_max
};

/// Exact maximum of the transition score over all Z^N schedules by a
/// layered longest-path recursion. Returns the lexicographically smallest
/// optimal schedule.
[[nodiscard]] DpResult dp_exact(const TransitionMatrix &w, std::size_t n_orders, double b);

} // namespace fcesched
