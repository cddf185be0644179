#include "fcesched/errors.hpp"
#include "fcesched/qubo.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fcesched;

namespace {

TransitionMatrix two_level(int w00, int w01, int w10, int w11) {
    return TransitionMatrix({20.0, 60.0}, {w00, w01, w10, w11});
}

Bitstring from_mask(std::uint64_t m, std::size_t n) {
    Bitstring x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = (m >> k) & 1U;
    }
    return x;
}

} // namespace

TEST(Qubo, OrderMajorIndex) {
    EXPECT_EQ(var_index(0, 0, 3, 9), 0U);
    EXPECT_EQ(var_index(1, 0, 3, 9), 9U);
    EXPECT_EQ(var_index(2, 8, 3, 9), 26U);
    EXPECT_THROW((void)var_index(3, 0, 3, 9), IndexError);
    EXPECT_THROW((void)var_index(0, 9, 3, 9), IndexError);
}

TEST(Qubo, ExpandedCoefficients) {
    const TransitionMatrix w = two_level(10, 99, 40, 0);
    const QuboProblem q = build_qubo(w, 2, 1000.0, 7.0);
    EXPECT_EQ(q.num_vars(), 4U);
    EXPECT_EQ(q.offset(), 2000.0);
    for (double c : q.linear()) {
        EXPECT_EQ(c, -1000.0);
    }
    auto coeff = [&](std::size_t i, std::size_t j) {
        for (const QuadTerm &t : q.quadratic()) {
            if (t.i == i && t.j == j) {
                return t.coeff;
            }
        }
        return 0.0;
    };
    EXPECT_EQ(coeff(0, 1), 2000.0);
    EXPECT_EQ(coeff(2, 3), 2000.0);
    EXPECT_EQ(coeff(0, 2), -70.0);
    EXPECT_EQ(coeff(0, 3), -693.0);
    EXPECT_EQ(coeff(1, 2), -280.0);
    EXPECT_EQ(coeff(1, 3), 0.0);
}

TEST(Qubo, ZeroVectorEnergyIsOffset) {
    Rng rng(3);
    const TransitionMatrix w = oracle::random_matrix(9, rng);
    const QuboProblem q = build_qubo(w, 4, 1000.0, 7.0);
    EXPECT_EQ(energy(q, Bitstring(q.num_vars())), 4000.0);
}

TEST(Qubo, RejectsBadArguments) {
    const TransitionMatrix w = two_level(0, 99, 99, 0);
    EXPECT_THROW((void)build_qubo(w, 1, 1000.0, 7.0), DomainError);
    EXPECT_THROW((void)build_qubo(w, 2, 0.0, 7.0), DomainError);
    EXPECT_THROW((void)build_qubo(w, 2, 1000.0, -1.0), DomainError);
    const QuboProblem q = build_qubo(w, 2, 1000.0, 7.0);
    EXPECT_THROW((void)energy(q, Bitstring(3)), DimensionError);
}

TEST(Qubo, DuplicatePairsAreMerged) {
    const QuboProblem q(1, 3, 1.0, 1.0, 0.0, {0.0, 0.0, 0.0},
                        {{0, 1, 1.5}, {1, 0, 2.0}, {2, 1, -1.0}}, std::nullopt);
    ASSERT_EQ(q.quadratic().size(), 2U);
    EXPECT_EQ(q.quadratic()[0].i, 0U);
    EXPECT_EQ(q.quadratic()[0].j, 1U);
    EXPECT_EQ(q.quadratic()[0].coeff, 3.5);
    EXPECT_EQ(q.quadratic()[1].i, 1U);
    EXPECT_EQ(q.quadratic()[1].j, 2U);
    EXPECT_EQ(q.neighbors(1).size(), 2U);
}

TEST(Qubo, ExpansionMatchesDirectCostExhaustively) {
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const TransitionMatrix w = oracle::random_matrix(2, rng);
        const QuboProblem q = build_qubo(w, 2, 1000.0, 7.0);
        for (std::uint64_t m = 0; m < 16; ++m) {
            const Bitstring x = from_mask(m, 4);
            EXPECT_NEAR(energy(q, x), oracle::direct_cost(w.entries(), 2, 2, x.bits, 1000.0, 7.0),
                        1e-9);
        }
    }
}

TEST(Qubo, ExpansionMatchesDirectCostRandomized) {
    Rng rng(19);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n_orders = 2 + rep % 9;
        const TransitionMatrix w = oracle::random_matrix(9, rng);
        const double a = 1.0 + 999.0 * uniform01(rng);
        const double b = 10.0 * uniform01(rng);
        const QuboProblem q = build_qubo(w, n_orders, a, b);
        const Bitstring x = oracle::random_bits(q.num_vars(), rng);
        EXPECT_NEAR(energy(q, x), oracle::direct_cost(w.entries(), 9, n_orders, x.bits, a, b),
                    1e-9);
    }
}

TEST(Qubo, FlipDeltaMatchesRecompute) {
    Rng rng(23);
    const TransitionMatrix w = oracle::random_matrix(9, rng);
    const QuboProblem q = build_qubo(w, 5, 1000.0, 7.0);
    for (int rep = 0; rep < 200; ++rep) {
        Bitstring x = oracle::random_bits(q.num_vars(), rng);
        const std::size_t k = rep % q.num_vars();
        const double before = energy(q, x);
        const double delta = flip_delta(q, x, k);
        x[k] ^= 1U;
        EXPECT_NEAR(energy(q, x) - before, delta, 1e-9);
    }
}

TEST(Schedule, Fig2PatternRoundTrip) {
    const TransitionMatrix w(default_levels(9), std::vector<int>(81, 0));
    const std::vector<double> percents{60, 40, 90, 30, 50, 20, 50, 70, 20, 40};
    Schedule s;
    for (double p : percents) {
        s.levels.push_back(static_cast<std::size_t>(p / 10.0) - 1);
    }
    const Bitstring x = encode_schedule(s, 9);
    EXPECT_EQ(x.size(), 90U);
    EXPECT_TRUE(is_feasible(x, 10, 9));
    EXPECT_EQ(schedule_percent(w, decode_schedule(x, 10, 9)), percents);
}

TEST(Schedule, SmallDecode) {
    const Bitstring x(std::vector<std::uint8_t>{1, 0, 0, 1});
    EXPECT_EQ(decode_schedule(x, 2, 2).levels, (std::vector<std::size_t>{0, 1}));
}

TEST(Schedule, RoundTripExhaustiveN3Z4) {
    std::size_t feasible = 0;
    for (std::uint64_t m = 0; m < (1U << 12); ++m) {
        const Bitstring x = from_mask(m, 12);
        if (!is_feasible(x, 3, 4)) {
            EXPECT_THROW((void)decode_schedule(x, 3, 4), InfeasibleError);
            continue;
        }
        ++feasible;
        EXPECT_EQ(encode_schedule(decode_schedule(x, 3, 4), 4), x);
    }
    EXPECT_EQ(feasible, 64U);
}

TEST(Schedule, InfeasibleErrorNamesOrders) {
    Bitstring x(9);
    x[0] = 1;                   // order 0 fine
    x[3] = 1, x[4] = 1;         // order 1 has two bits
                                // order 2 has none
    try {
        (void)decode_schedule(x, 3, 3);
        FAIL() << "expected InfeasibleError";
    } catch (const InfeasibleError &e) {
        EXPECT_EQ(e.orders(), (std::vector<std::size_t>{1, 2}));
    }
}

TEST(Smax, Examples) {
    const TransitionMatrix alt = two_level(0, 99, 99, 0);
    EXPECT_EQ(s_max(alt, Schedule{{0, 1, 0}}), 198.0);
    EXPECT_EQ(s_max(alt, Schedule{{1, 1, 1, 1}}), 0.0);
}

TEST(Smax, FeasibleEnergyIdentity) {
    Rng rng(29);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n_orders = 2 + rep % 9;
        const TransitionMatrix w = oracle::random_matrix(9, rng);
        const QuboProblem q = build_qubo(w, n_orders, 1000.0, 7.0);
        const Schedule s = oracle::random_schedule(n_orders, 9, rng);
        const Bitstring x = encode_schedule(s, 9);
        EXPECT_EQ(energy(q, x), -7.0 * s_max(w, s));
    }
}

namespace {

double min_infeasible_gap(const TransitionMatrix &w) {
    const QuboProblem q = build_qubo(w, 2, 1000.0, 7.0);
    const double feasible_min =
        -7.0 * oracle::exhaustive_schedule_max(w.entries(), w.z(), 2).s_max;
    double gap = 1e300;
    const std::size_t n = q.num_vars();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        const Bitstring x = from_mask(m, n);
        if (!is_feasible(x, 2, w.z())) {
            gap = std::min(gap, energy(q, x) - feasible_min);
        }
    }
    return gap;
}

} // namespace

TEST(Penalty, PlantedInfeasibleStatesSitAPenaltyAbove) {
    std::vector<int> entries(81, 0);
    entries[1 * 9 + 5] = 99;
    entries[5 * 9 + 1] = 99;
    EXPECT_GE(min_infeasible_gap(TransitionMatrix(default_levels(9), entries)), 1000.0);
}

// Worst case over row counts is two bits in each order: 2a - 3*99b.
TEST(Penalty, GapBoundOnRandomMatrices) {
    Rng rng(31);
    for (int rep = 0; rep < 3; ++rep) {
        EXPECT_GE(min_infeasible_gap(oracle::random_matrix(9, rng)), 2000.0 - 3 * 693.0);
    }
}

// A 2x2 block of maximal weights lets two bits per order outscore any
// feasible schedule: 2a - 4*99b < -99b.
TEST(Penalty, DenseBlockBeatsFeasibleOptimum) {
    const TransitionMatrix w = two_level(99, 99, 99, 99);
    EXPECT_DOUBLE_EQ(min_infeasible_gap(w), 2000.0 - 4 * 693.0 + 693.0);
}
