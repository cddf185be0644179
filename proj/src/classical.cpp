#include "fcesched/classical.hpp"

#include "fcesched/errors.hpp"

#include <chrono>
#include <cmath>

namespace fcesched {

void SaParams::validate() const {
    if (num_reads < 1) {
        throw ConfigError("num_reads must be at least 1");
    }
    if (sweeps < 1) {
        throw ConfigError("sweeps must be at least 1");
    }
    if (!(beta_hot > 0.0 && beta_hot < beta_cold)) {
        throw ConfigError("need 0 < beta_hot < beta_cold");
    }
}

TrialRecord make_trial(const QuboProblem &q, Bitstring x) {
    TrialRecord t;
    t.energy = energy(q, x);
    t.feasible = is_feasible(x, q.n_orders(), q.z_levels());
    if (t.feasible) {
        t.schedule = decode_schedule(x, q.n_orders(), q.z_levels());
        if (q.transitions()) {
            t.s_max = s_max(*q.transitions(), *t.schedule);
        }
    }
    t.bits = std::move(x);
    return t;
}

SolverResult collect_trials(std::vector<TrialRecord> trials, double wall_time) {
    if (trials.empty()) {
        throw EmptyInputError("solver produced no trials");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < trials.size(); ++i) {
        if (trials[i].energy < trials[best].energy) {
            best = i;
        }
    }
    SolverResult r;
    r.best_bits = trials[best].bits;
    r.best_energy = trials[best].energy;
    r.feasible = trials[best].feasible;
    r.schedule = trials[best].schedule;
    r.s_max = trials[best].s_max;
    r.per_trial = std::move(trials);
    r.wall_time = wall_time;
    return r;
}

namespace {

Bitstring anneal_once(const QuboProblem &q, const SaParams &p, std::uint64_t read) {
    const std::size_t n = q.num_vars();
    Rng rng = make_rng(p.seed, {0x5341ULL, read});
    Bitstring x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = static_cast<std::uint8_t>(rng() >> 63);
    }
    // field[k] = linear[k] + sum_j Q_kj x_j; flipping k changes E by
    // (1 - 2 x_k) * field[k].
    std::vector<double> field(q.linear());
    for (std::size_t k = 0; k < n; ++k) {
        if (x[k]) {
            for (const Neighbor &nb : q.neighbors(k)) {
                field[nb.index] += nb.coeff;
            }
        }
    }
    const double ratio = p.beta_cold / p.beta_hot;
    for (std::size_t s = 0; s < p.sweeps; ++s) {
        const double frac =
            p.sweeps > 1 ? static_cast<double>(s) / static_cast<double>(p.sweeps - 1) : 1.0;
        const double beta = p.beta_hot * std::pow(ratio, frac);
        for (std::size_t k = 0; k < n; ++k) {
            const double delta = x[k] ? -field[k] : field[k];
            if (delta <= 0.0 || uniform01(rng) < std::exp(-beta * delta)) {
                const double sign = x[k] ? -1.0 : 1.0;
                x[k] ^= 1U;
                for (const Neighbor &nb : q.neighbors(k)) {
                    field[nb.index] += sign * nb.coeff;
                }
            }
        }
    }
    return x;
}

} // namespace

SolverResult sa_solve(const QuboProblem &q, const SaParams &p, Exec exec) {
    p.validate();
    const auto start = std::chrono::steady_clock::now();
    std::vector<TrialRecord> trials(p.num_reads);
    const auto reads = static_cast<std::int64_t>(p.num_reads);

#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (std::int64_t r = 0; r < reads; ++r) {
        trials[static_cast<std::size_t>(r)] =
            make_trial(q, anneal_once(q, p, static_cast<std::uint64_t>(r)));
    }

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return collect_trials(std::move(trials), elapsed.count());
}

BruteForceResult brute_force(const QuboProblem &q, Exec exec) {
    return brute_force_scan(q, exec);
}

DpResult dp_exact(const TransitionMatrix &w, std::size_t n_orders, double b) {
    if (n_orders < 2) {
        throw DomainError("at least two orders are needed for a transition");
    }
    const std::size_t z = w.z();
    // best[o][i]: largest score of orders o..N-1 given level i at order o.
    std::vector<std::vector<double>> best(n_orders, std::vector<double>(z, 0.0));
    for (std::size_t o = n_orders - 1; o-- > 0;) {
        for (std::size_t i = 0; i < z; ++i) {
            double top = -1.0;
            for (std::size_t j = 0; j < z; ++j) {
                top = std::max(top, w(i, j) + best[o + 1][j]);
            }
            best[o][i] = top;
        }
    }
    DpResult out;
    out.schedule.levels.resize(n_orders);
    std::size_t cur = 0;
    for (std::size_t i = 1; i < z; ++i) {
        if (best[0][i] > best[0][cur]) {
            cur = i;
        }
    }
    out.schedule.levels[0] = cur;
    out.s_max = best[0][cur];
    for (std::size_t o = 1; o < n_orders; ++o) {
        const double target = best[o - 1][cur];
        std::size_t next = 0;
        while (w(cur, next) + best[o][next] != target) {
            ++next;
        }
        out.schedule.levels[o] = next;
        cur = next;
    }
    out.energy = 0.0 - b * out.s_max; // avoids -0.0
    return out;
}

} // namespace fcesched
