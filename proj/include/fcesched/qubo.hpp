#pragma once

#include "fcesched/trace.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fcesched {

/// Binary assignment over the N x Z one-hot grid, flattened order-major.
struct Bitstring {
    std::vector<std::uint8_t> bits;

    Bitstring() = default;
    explicit Bitstring(std::size_t n) : bits(n, 0) {}
    explicit Bitstring(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

    [[nodiscard]] std::size_t size() const noexcept { return bits.size(); }
    std::uint8_t &operator[](std::size_t k) { return bits[k]; }
    std::uint8_t operator[](std::size_t k) const { return bits[k]; }
    friend bool operator==(const Bitstring &, const Bitstring &) = default;
};

/// One level index per order. Repeats are allowed.
struct Schedule {
    std::vector<std::size_t> levels;

    [[nodiscard]] std::size_t size() const noexcept { return levels.size(); }
    friend bool operator==(const Schedule &, const Schedule &) = default;
};

struct QuadTerm {
    std::size_t i = 0; ///< always i < j
    std::size_t j = 0;
    double coeff = 0.0;
};

struct Neighbor {
    std::size_t index = 0;
    double coeff = 0.0;
};

/// Expanded form of the schedule cost: offset + linear . x + sum over
/// pairs of coeff * x_i * x_j. Immutable once constructed.
class QuboProblem {
  public:
    QuboProblem(std::size_t n_orders, std::size_t z_levels, double a, double b, double offset,
                std::vector<double> linear, std::vector<QuadTerm> quadratic,
                std::optional<TransitionMatrix> transitions = std::nullopt);

    [[nodiscard]] std::size_t num_vars() const noexcept { return linear_.size(); }
    [[nodiscard]] std::size_t n_orders() const noexcept { return n_orders_; }
    [[nodiscard]] std::size_t z_levels() const noexcept { return z_levels_; }
    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] double offset() const noexcept { return offset_; }
    [[nodiscard]] const std::vector<double> &linear() const noexcept { return linear_; }
    [[nodiscard]] const std::vector<QuadTerm> &quadratic() const noexcept { return quadratic_; }

    /// The matrix the problem was built from, when known. Needed to report
    /// S_max for decoded schedules.
    [[nodiscard]] const std::optional<TransitionMatrix> &transitions() const noexcept {
        return transitions_;
    }

    /// All couplings touching variable k, in increasing index order.
    [[nodiscard]] std::span<const Neighbor> neighbors(std::size_t k) const {
        return {adjacency_.data() + row_start_[k], row_start_[k + 1] - row_start_[k]};
    }

  private:
    std::size_t n_orders_;
    std::size_t z_levels_;
    double a_;
    double b_;
    double offset_;
    std::vector<double> linear_;
    std::vector<QuadTerm> quadratic_;
    std::optional<TransitionMatrix> transitions_;
    std::vector<std::size_t> row_start_;
    std::vector<Neighbor> adjacency_;
};

inline constexpr double kDefaultPenalty = 1000.0;
inline constexpr double kDefaultReward = 7.0;

[[nodiscard]] std::size_t var_index(std::size_t n, std::size_t i, std::size_t n_orders,
                                    std::size_t z);

[[nodiscard]] QuboProblem build_qubo(const TransitionMatrix &w, std::size_t n_orders,
                                     double a = kDefaultPenalty, double b = kDefaultReward);

[[nodiscard]] double energy(const QuboProblem &q, const Bitstring &x);

/// Energy change from flipping bit k of x.
[[nodiscard]] double flip_delta(const QuboProblem &q, const Bitstring &x, std::size_t k);

[[nodiscard]] bool is_feasible(const Bitstring &x, std::size_t n_orders, std::size_t z_levels);

/// Throws InfeasibleError listing every order that is not one-hot.
[[nodiscard]] Schedule decode_schedule(const Bitstring &x, std::size_t n_orders,
                                       std::size_t z_levels);

[[nodiscard]] Bitstring encode_schedule(const Schedule &s, std::size_t z_levels);

[[nodiscard]] double s_max(const TransitionMatrix &w, const Schedule &s);

/// Percent labels for a schedule, e.g. [20, 60, 20, 60].
[[nodiscard]] std::vector<double> schedule_percent(const TransitionMatrix &w, const Schedule &s);

} // namespace fcesched
