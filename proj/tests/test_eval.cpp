#include "fcesched/errors.hpp"
#include "fcesched/eval.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace fcesched;

namespace {

SolveOptions light_options() {
    SolveOptions o;
    o.sa.sweeps = 200;
    o.vqe.iterations = 200;
    o.vqe.trials = 3;
    o.vqe.shots = 512;
    return o;
}

} // namespace

TEST(Backends, TagsRoundTrip) {
    for (const char *tag :
         {"sa", "vqe-exact", "vqe-sampled", "vqe-noisy", "vqe-noisy:nazca", "brute", "dp"}) {
        EXPECT_EQ(BackendSpec::parse(tag).tag(), tag);
    }
    EXPECT_EQ(BackendSpec::parse("vqe-noisy:brussels").tag(), "vqe-noisy");
    EXPECT_THROW((void)BackendSpec::parse("qa"), UsageError);
    EXPECT_THROW((void)BackendSpec::parse("vqe-noisy:none"), UsageError);
    EXPECT_EQ(parse_backends("dp,sa,,vqe-exact").size(), 3U);
    EXPECT_THROW((void)parse_backends(","), UsageError);
}

TEST(Aggregate, MeanAndSampleStd) {
    const std::vector<double> v{2.0, 4.0, 6.0};
    const MeanStd m = mean_std(v);
    EXPECT_DOUBLE_EQ(m.mean, 4.0);
    EXPECT_DOUBLE_EQ(m.std, 2.0);
    const std::vector<double> one{5.0};
    EXPECT_EQ(mean_std(one).std, 0.0);
    EXPECT_THROW((void)mean_std(std::vector<double>{}), EmptyInputError);
}

TEST(Aggregate, ResidualEnergyAgainstReference) {
    const std::vector<double> e{-600.0, -700.0};
    const MeanStd r = residual_energy(e, -700.0);
    EXPECT_DOUBLE_EQ(r.mean, 50.0);
    EXPECT_DOUBLE_EQ(r.std, std::sqrt(5000.0));
    EXPECT_THROW((void)residual_energy(std::vector<double>{}, 0.0), EmptyInputError);
}

TEST(Aggregate, BestSmaxPicksHighestFeasible) {
    const TransitionMatrix w = planted_transition_matrix(9, 1);
    const QuboProblem q = build_qubo(w, 3, 1000.0, 7.0);
    std::vector<TrialRecord> trials{
        make_trial(q, Bitstring(27)),
        make_trial(q, encode_schedule(Schedule{{0, 0, 0}}, 9)),
        make_trial(q, encode_schedule(Schedule{{1, 5, 1}}, 9))};
    const BestSchedule b = best_smax(trials, w);
    EXPECT_EQ(b.trial, 2U);
    EXPECT_EQ(b.s_max, 198.0);
    EXPECT_LE(b.s_max, dp_exact(w, 3, 7.0).s_max);
    std::vector<TrialRecord> none{trials[0]};
    EXPECT_THROW((void)best_smax(none, w), InfeasibleError);
}

TEST(Planted, MatrixShape) {
    const TransitionMatrix w = planted_transition_matrix(9, 7, 40);
    EXPECT_EQ(w(1, 5), 99);
    EXPECT_EQ(w(5, 1), 99);
    for (std::size_t i = 0; i < 9; ++i) {
        for (std::size_t j = 0; j < 9; ++j) {
            if ((i == 1 && j == 5) || (i == 5 && j == 1)) {
                continue;
            }
            EXPECT_LE(w(i, j), 40);
            EXPECT_EQ(w(i, j) % 10, 0);
        }
    }
    EXPECT_EQ(planted_transition_matrix(9, 7).max_entry(), 99);
    EXPECT_THROW((void)planted_transition_matrix(9, 7, 95), ConfigError);
}

TEST(Planted, DpFindsAlternation) {
    for (std::size_t n = 2; n <= 10; ++n) {
        const TransitionMatrix w = planted_transition_matrix(9, n);
        const DpResult r = dp_exact(w, n, 7.0);
        EXPECT_TRUE(is_planted_alternation(r.schedule, w));
        EXPECT_EQ(r.s_max, 99.0 * (n - 1));
        EXPECT_EQ(r.schedule.levels[0], 1U);
    }
    const TransitionMatrix w = planted_transition_matrix(9, 1);
    EXPECT_TRUE(is_planted_alternation(Schedule{{5, 1, 5}}, w));
    EXPECT_FALSE(is_planted_alternation(Schedule{{1, 1, 5}}, w));
    EXPECT_FALSE(is_planted_alternation(Schedule{{2, 5, 1}}, w));
}

TEST(Backends, DpAndBruteAgree) {
    const TransitionMatrix w = planted_transition_matrix(9, 4, 60);
    const QuboProblem q = build_qubo(w, 2, 1000.0, 7.0);
    const SolveOptions o = light_options();
    const SolverResult dp = run_backend(BackendSpec::parse("dp"), q, w, o, 1);
    const SolverResult bf = run_backend(BackendSpec::parse("brute"), q, w, o, 1);
    EXPECT_EQ(dp.best_energy, bf.best_energy);
    EXPECT_EQ(dp.best_bits, bf.best_bits);
}

TEST(Reference, SaMinNeverBelowExact) {
    const TransitionMatrix w = planted_transition_matrix(9, 5, 30);
    const SolveOptions o = light_options();
    for (std::size_t n = 2; n <= 6; ++n) {
        const QuboProblem q = build_qubo(w, n, 1000.0, 7.0);
        EXPECT_GE(reference_energy(q, w, RefMode::sa_min, o, n),
                  reference_energy(q, w, RefMode::exact, o, n));
    }
    EXPECT_EQ(parse_ref_mode(to_string(RefMode::sa_min)), RefMode::sa_min);
    EXPECT_THROW((void)parse_ref_mode("min"), UsageError);
}

TEST(Sweep, RowsPerBackendAndSize) {
    SweepConfig cfg;
    cfg.backends = parse_backends("dp,sa,vqe-exact");
    cfg.n_min = 2;
    cfg.n_max = 6;
    cfg.options = light_options();
    const auto rows = sweep(cfg);
    ASSERT_EQ(rows.size(), 15U);
    for (const SweepRow &r : rows) {
        EXPECT_GE(r.e_res.mean, 0.0);
        for (const MeanStd &m : r.per_repeat) {
            EXPECT_GE(m.mean, 0.0);
        }
        if (r.backend == "dp") {
            EXPECT_EQ(r.e_res.mean, 0.0);
            EXPECT_EQ(r.e_res.std, 0.0);
            EXPECT_EQ(r.s_max.mean, 99.0 * (r.n - 1));
            EXPECT_EQ(r.best_schedule.front(), 20.0);
        }
        if (!r.best_schedule.empty()) {
            EXPECT_EQ(r.best_schedule.size(), r.n);
            EXPECT_LE(r.s_max.mean, 99.0 * (r.n - 1));
        }
    }
    EXPECT_EQ(rows.front().backend, "dp");
    EXPECT_EQ(rows.back().backend, "vqe-exact");
    EXPECT_EQ(rows.back().n, 6U);
}

TEST(Sweep, ResidualsNonNegativeOverRepeats) {
    SweepConfig cfg;
    cfg.backends = parse_backends("sa,vqe-sampled");
    cfg.n_min = 2;
    cfg.n_max = 4;
    cfg.repeats = 3;
    cfg.background_max = 30;
    cfg.options = light_options();
    for (const SweepRow &r : sweep(cfg)) {
        EXPECT_EQ(r.per_repeat.size(), 3U);
        EXPECT_GE(r.e_res.mean, 0.0);
        EXPECT_EQ(r.trials, r.backend == "sa" ? 30U : 9U);
    }
}

TEST(Sweep, Deterministic) {
    SweepConfig cfg;
    cfg.backends = parse_backends("sa,vqe-noisy");
    cfg.n_min = 2;
    cfg.n_max = 3;
    cfg.options = light_options();
    const auto a = sweep(cfg, Exec::parallel);
    const auto b = sweep(cfg, Exec::serial);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].e_res.mean, b[i].e_res.mean);
        EXPECT_EQ(a[i].e_res.std, b[i].e_res.std);
        EXPECT_EQ(a[i].best_schedule, b[i].best_schedule);
    }
}

TEST(Sweep, ConfigValidation) {
    SweepConfig cfg;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.backends = parse_backends("dp");
    cfg.n_min = 1;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.n_min = 2;
    cfg.repeats = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.repeats = 1;
    cfg.backends = parse_backends("brute");
    cfg.n_max = 3;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.n_max = 2;
    EXPECT_NO_THROW(cfg.validate());
}
