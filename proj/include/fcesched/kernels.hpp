#pragma once

// Data-parallel inner loops. Each OpenMP kernel has a plain serial
// reference next to it that tests and the benchmark compare against.

#include "fcesched/qubo.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fcesched {

enum class Exec { serial, parallel };

// ---------------------------------------------------------------------------
// Exhaustive minimization

inline constexpr std::size_t kBruteForceMaxVars = 20;

struct BruteForceResult {
    Bitstring bits;
    double energy = 0.0;
};

/// True when `a` wins an exact energy tie against `b`: the lowest position
/// at which they differ is set in `a`. For one-hot bitstrings this picks
/// the lexicographically smallest schedule.
[[nodiscard]] bool wins_tie(std::uint64_t a, std::uint64_t b) noexcept;

/// Evaluates every bitstring directly. Reference for brute_force_scan.
[[nodiscard]] BruteForceResult brute_force_reference(const QuboProblem &q);

/// Gray-code enumeration with O(degree) incremental updates, split into
/// independent chunks over the high bits.
[[nodiscard]] BruteForceResult brute_force_scan(const QuboProblem &q, Exec exec = Exec::parallel);

// ---------------------------------------------------------------------------
// Shot sampling

/// Packed measurement record: one row of 64-bit words per shot.
class ShotBatch {
  public:
    ShotBatch() = default;
    ShotBatch(std::size_t shots, std::size_t num_vars);

    [[nodiscard]] std::size_t shots() const noexcept { return shots_; }
    [[nodiscard]] std::size_t num_vars() const noexcept { return num_vars_; }
    [[nodiscard]] std::size_t words() const noexcept { return words_; }

    [[nodiscard]] bool bit(std::size_t shot, std::size_t k) const noexcept {
        return (data_[shot * words_ + k / 64] >> (k % 64)) & 1U;
    }
    void set(std::size_t shot, std::size_t k) noexcept {
        data_[shot * words_ + k / 64] |= std::uint64_t{1} << (k % 64);
    }
    void clear(std::size_t shot, std::size_t k) noexcept {
        data_[shot * words_ + k / 64] &= ~(std::uint64_t{1} << (k % 64));
    }
    [[nodiscard]] std::span<const std::uint64_t> row(std::size_t shot) const noexcept {
        return {data_.data() + shot * words_, words_};
    }
    [[nodiscard]] Bitstring shot(std::size_t s) const;

    /// Per-qubit fraction of shots reading 1.
    [[nodiscard]] std::vector<double> column_means() const;

  private:
    std::size_t shots_ = 0;
    std::size_t num_vars_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> data_;
};

inline constexpr std::size_t kShotBlock = 256;

/// One independent Bernoulli draw per (shot, qubit), generated per qubit by
/// geometric skipping over blocks of kShotBlock shots. Each block has its
/// own stream, so the output does not depend on the thread count.
[[nodiscard]] ShotBatch sample_shots(std::span<const double> probs, std::size_t shots,
                                     std::uint64_t seed, Exec exec = Exec::parallel);

/// Naive per-shot, per-qubit Bernoulli draws. Same distribution as
/// sample_shots, different random stream.
[[nodiscard]] ShotBatch sample_shots_reference(std::span<const double> probs, std::size_t shots,
                                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Energies of many bitstrings

/// Dense symmetric copy of a QUBO for evaluating packed shots.
struct DenseQubo {
    explicit DenseQubo(const QuboProblem &q);

    std::size_t n;
    double offset;
    std::vector<double> linear;
    std::vector<double> coupling; ///< n x n, symmetric, zero diagonal
};

[[nodiscard]] std::vector<double> shot_energies(const DenseQubo &q, const ShotBatch &batch,
                                                Exec exec = Exec::parallel);

[[nodiscard]] std::vector<double> shot_energies_reference(const QuboProblem &q,
                                                          const ShotBatch &batch);

} // namespace fcesched
