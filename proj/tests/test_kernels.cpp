#include "fcesched/errors.hpp"
#include "fcesched/kernels.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>

using namespace fcesched;

namespace {

QuboProblem random_qubo(std::size_t n, Rng &rng) {
    std::vector<double> linear(n);
    for (double &c : linear) {
        c = std::round(20.0 * uniform01(rng) - 10.0);
    }
    std::vector<QuadTerm> quad;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (uniform01(rng) < 0.4) {
                quad.push_back({i, j, std::round(20.0 * uniform01(rng) - 10.0)});
            }
        }
    }
    return QuboProblem(1, n, 1.0, 1.0, 3.0, linear, quad, std::nullopt);
}

bool same_batch(const ShotBatch &a, const ShotBatch &b) {
    if (a.shots() != b.shots() || a.num_vars() != b.num_vars()) {
        return false;
    }
    for (std::size_t s = 0; s < a.shots(); ++s) {
        const auto ra = a.row(s);
        const auto rb = b.row(s);
        if (!std::equal(ra.begin(), ra.end(), rb.begin())) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST(TieBreak, LowestDifferingBitSetWins) {
    EXPECT_TRUE(wins_tie(0b1001, 0b0110));
    EXPECT_FALSE(wins_tie(0b0110, 0b1001));
    EXPECT_TRUE(wins_tie(0b0101, 0b0110));
    EXPECT_FALSE(wins_tie(0b0110, 0b0110));
}

TEST(BruteForce, ScanMatchesNaiveReference) {
    Rng rng(41);
    for (int rep = 0; rep < 30; ++rep) {
        const QuboProblem q = random_qubo(4 + rep % 13, rng);
        const BruteForceResult ref = brute_force_reference(q);
        for (Exec exec : {Exec::serial, Exec::parallel}) {
            const BruteForceResult got = brute_force_scan(q, exec);
            EXPECT_EQ(got.energy, ref.energy);
            EXPECT_EQ(got.bits, ref.bits);
        }
    }
}

TEST(BruteForce, AllZeroWeightsMinimumIsZeroAndOneHot) {
    const TransitionMatrix w(default_levels(3), std::vector<int>(9, 0));
    const QuboProblem q = build_qubo(w, 3, 1000.0, 7.0);
    const BruteForceResult r = brute_force_scan(q);
    EXPECT_EQ(r.energy, 0.0);
    EXPECT_TRUE(is_feasible(r.bits, 3, 3));
    EXPECT_EQ(decode_schedule(r.bits, 3, 3).levels, (std::vector<std::size_t>{0, 0, 0}));
}

TEST(BruteForce, TwoOrderAlternationPicksLowestSchedule) {
    const TransitionMatrix w({20.0, 60.0}, {0, 99, 99, 0});
    const QuboProblem q = build_qubo(w, 2, 1000.0, 7.0);
    const BruteForceResult r = brute_force_scan(q);
    EXPECT_EQ(r.energy, -693.0);
    EXPECT_EQ(r.bits, Bitstring(std::vector<std::uint8_t>{1, 0, 0, 1}));
}

TEST(BruteForce, CapAt20Variables) {
    Rng rng(43);
    EXPECT_THROW((void)brute_force_scan(random_qubo(21, rng)), SizeError);
    EXPECT_THROW((void)brute_force_reference(random_qubo(21, rng)), SizeError);
}

TEST(BruteForce, ThreadCountDoesNotChangeResult) {
    Rng rng(47);
    const QuboProblem q = random_qubo(18, rng);
    omp_set_num_threads(1);
    const BruteForceResult one = brute_force_scan(q);
    omp_set_num_threads(4);
    const BruteForceResult four = brute_force_scan(q);
    EXPECT_EQ(one.bits, four.bits);
    EXPECT_EQ(one.energy, four.energy);
}

TEST(Shots, BatchPacking) {
    ShotBatch b(3, 70);
    EXPECT_EQ(b.words(), 2U);
    b.set(1, 0);
    b.set(1, 69);
    b.set(2, 64);
    EXPECT_TRUE(b.bit(1, 0));
    EXPECT_TRUE(b.bit(1, 69));
    EXPECT_FALSE(b.bit(0, 69));
    b.clear(1, 69);
    EXPECT_FALSE(b.bit(1, 69));
    const Bitstring s = b.shot(2);
    EXPECT_EQ(s.size(), 70U);
    EXPECT_EQ(s[64], 1U);
    const auto means = b.column_means();
    EXPECT_DOUBLE_EQ(means[0], 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(means[64], 1.0 / 3.0);
}

TEST(Shots, ExtremeProbabilities) {
    const std::vector<double> probs{0.0, 1.0, 0.0, 1.0};
    const ShotBatch b = sample_shots(probs, 1000, 1);
    const auto means = b.column_means();
    EXPECT_EQ(means, (std::vector<double>{0.0, 1.0, 0.0, 1.0}));
}

TEST(Shots, SerialEqualsParallel) {
    Rng rng(53);
    std::vector<double> probs(37);
    for (double &p : probs) {
        p = uniform01(rng);
    }
    const ShotBatch serial = sample_shots(probs, 3000, 99, Exec::serial);
    omp_set_num_threads(3);
    const ShotBatch parallel = sample_shots(probs, 3000, 99, Exec::parallel);
    EXPECT_TRUE(same_batch(serial, parallel));
}

TEST(Shots, FrequenciesMatchReferenceSampler) {
    Rng rng(59);
    std::vector<double> probs(24);
    for (double &p : probs) {
        p = uniform01(rng);
    }
    const std::size_t shots = 40000;
    const auto fast = sample_shots(probs, shots, 5).column_means();
    const auto slow = sample_shots_reference(probs, shots, 5).column_means();
    for (std::size_t k = 0; k < probs.size(); ++k) {
        const double sigma = std::sqrt(probs[k] * (1.0 - probs[k]) / shots);
        EXPECT_NEAR(fast[k], probs[k], 5.0 * sigma + 1e-12) << k;
        EXPECT_NEAR(slow[k], probs[k], 5.0 * sigma + 1e-12) << k;
    }
}

TEST(Shots, PairsAreIndependent) {
    const std::vector<double> probs{0.3, 0.7};
    const std::size_t shots = 50000;
    const ShotBatch b = sample_shots(probs, shots, 8);
    std::size_t both = 0;
    for (std::size_t s = 0; s < shots; ++s) {
        both += b.bit(s, 0) && b.bit(s, 1);
    }
    const double p = 0.21;
    EXPECT_NEAR(static_cast<double>(both) / shots, p, 5.0 * std::sqrt(p * (1 - p) / shots));
}

TEST(ShotEnergies, MatchReference) {
    Rng rng(61);
    for (int rep = 0; rep < 10; ++rep) {
        const TransitionMatrix w = oracle::random_matrix(9, rng);
        const QuboProblem q = build_qubo(w, 2 + rep % 8, 1000.0, 7.0);
        std::vector<double> probs(q.num_vars());
        for (double &p : probs) {
            p = uniform01(rng);
        }
        const ShotBatch b = sample_shots(probs, 500, rep);
        const auto ref = shot_energies_reference(q, b);
        const DenseQubo dense(q);
        for (Exec exec : {Exec::serial, Exec::parallel}) {
            const auto got = shot_energies(dense, b, exec);
            ASSERT_EQ(got.size(), ref.size());
            for (std::size_t s = 0; s < ref.size(); ++s) {
                EXPECT_NEAR(got[s], ref[s], 1e-9);
            }
        }
    }
}

TEST(ShotEnergies, WidthMismatch) {
    Rng rng(67);
    const QuboProblem q = random_qubo(5, rng);
    EXPECT_THROW((void)shot_energies(DenseQubo(q), ShotBatch(4, 6)), DimensionError);
}
