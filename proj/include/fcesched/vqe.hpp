#pragma once

// Product-state VQE: one R_Y rotation per qubit acting on |0>, so qubit k
// reads 1 with probability sin^2(theta_k / 2) independently of the others.
// The QUBO Hamiltonian is diagonal, which makes the expectation a
// multilinear polynomial in those probabilities.

#include "fcesched/classical.hpp"
#include "fcesched/kernels.hpp"
#include "fcesched/qubo.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fcesched {

/// Per-qubit asymmetric readout channel.
struct NoiseModel {
    std::vector<double> eps01; ///< P(read 1 | true 0)
    std::vector<double> eps10; ///< P(read 0 | true 1)

    [[nodiscard]] static NoiseModel symmetric(std::size_t n, double eps);
    void validate(std::size_t n) const;
};

enum class NoiseProfile { none, brussels, nazca, symmetric, custom };

[[nodiscard]] std::string to_string(NoiseProfile p);
[[nodiscard]] NoiseProfile parse_noise_profile(const std::string &s);

/// Uniform per-qubit error-rate ranges for the device-like profiles.
struct ErrorRange {
    double lo;
    double hi;
};
inline constexpr ErrorRange kBrusselsRange{0.0028, 0.029};
inline constexpr ErrorRange kNazcaRange{0.0057, 0.049};

/// Symmetric per-qubit rates drawn uniformly from `range`.
[[nodiscard]] NoiseModel draw_noise(ErrorRange range, std::size_t n, std::uint64_t seed);

enum class EvaluatorKind { exact, sampled };

[[nodiscard]] std::string to_string(EvaluatorKind e);
[[nodiscard]] EvaluatorKind parse_evaluator(const std::string &s);

struct VqeConfig {
    std::size_t shots = 8192;
    std::size_t iterations = 1000; ///< parameter updates, not sweeps
    std::size_t trials = 5;
    EvaluatorKind evaluator = EvaluatorKind::exact;
    NoiseProfile noise = NoiseProfile::none;
    double noise_eps = 0.0;                 ///< used by NoiseProfile::symmetric
    std::optional<NoiseModel> custom_noise; ///< used by NoiseProfile::custom
    std::uint64_t seed = kDefaultSeed;

    void validate() const;
};

/// Resolves the configured noise for an n-qubit problem. Device profiles
/// draw their per-qubit rates from the config seed.
[[nodiscard]] std::optional<NoiseModel> resolve_noise(const VqeConfig &cfg, std::size_t n);

[[nodiscard]] double effective_prob(double theta, const NoiseModel *noise, std::size_t k);

[[nodiscard]] std::vector<double> effective_probs(std::span<const double> theta,
                                                  const NoiseModel *noise);

[[nodiscard]] double expectation_from_probs(const QuboProblem &q, std::span<const double> probs);

[[nodiscard]] double expectation_exact(const QuboProblem &q, std::span<const double> theta,
                                       const NoiseModel *noise = nullptr);

[[nodiscard]] std::vector<Bitstring> sample_bitstrings(std::span<const double> theta,
                                                       std::size_t shots,
                                                       const NoiseModel *noise,
                                                       std::uint64_t seed);

struct SampledEstimate {
    double mean = 0.0;
    double std_error = 0.0; ///< population std / sqrt(shots)
};

[[nodiscard]] SampledEstimate summarize_energies(std::span<const double> energies);

[[nodiscard]] SampledEstimate expectation_sampled(const QuboProblem &q,
                                                  std::span<const Bitstring> samples);

/// Objective seen by the optimizer: either the closed form or a fresh
/// batch of shots per call.
class Objective {
  public:
    Objective(const QuboProblem &q, EvaluatorKind kind, std::size_t shots,
              std::optional<NoiseModel> noise);

    /// `stream` selects the shot stream for sampled evaluation; ignored
    /// by the exact evaluator.
    [[nodiscard]] double operator()(std::span<const double> theta, std::uint64_t stream) const;

    [[nodiscard]] double exact(std::span<const double> theta) const;
    [[nodiscard]] ShotBatch shots(std::span<const double> theta, std::uint64_t stream) const;

    [[nodiscard]] const QuboProblem &problem() const noexcept { return *q_; }
    [[nodiscard]] const NoiseModel *noise() const noexcept {
        return noise_ ? &*noise_ : nullptr;
    }
    [[nodiscard]] EvaluatorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t shot_count() const noexcept { return shots_; }

  private:
    const QuboProblem *q_;
    EvaluatorKind kind_;
    std::size_t shots_;
    std::optional<NoiseModel> noise_;
    DenseQubo dense_;
};

/// E(phi) = c0 + c1 cos(phi) + c2 sin(phi) in absolute angle phi.
struct SinusoidFit {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    [[nodiscard]] double operator()(double phi) const;
    [[nodiscard]] bool degenerate() const noexcept;
    /// Angle in [0, 2pi) minimizing the fit.
    [[nodiscard]] double argmin() const;
};

inline constexpr double kProbeOffset = 2.0943951023931954923; // 2pi/3

/// Fits the sinusoid through values at theta, theta + 2pi/3, theta - 2pi/3.
[[nodiscard]] SinusoidFit fit_sinusoid(double theta, double e_here, double e_plus,
                                       double e_minus);

struct NftStep {
    SinusoidFit fit;
    double before = 0.0; ///< objective value at the current angle
    double after = 0.0;  ///< fitted value at the new angle
};

/// One sequential update of parameter k: probe, fit, jump to the fitted
/// minimum. Leaves theta_k alone when the fit is flat.
NftStep nft_step(std::vector<double> &theta, std::size_t k, const Objective &objective,
                 std::uint64_t stream);

struct TrajectoryPoint {
    std::size_t iteration = 0;
    double objective = 0.0;          ///< closed-form expectation, noise included
    double best_energy_so_far = 0.0; ///< best energy of the rounded state so far
};

struct VqeResult {
    SolverResult result;
    std::vector<std::vector<TrajectoryPoint>> trajectories; ///< one per trial
    std::size_t best_trial = 0;
};

/// Rounds each effective probability at 0.5 (ties to 0).
[[nodiscard]] Bitstring round_state(std::span<const double> probs);

/// Per-qubit majority over a batch (ties to 0).
[[nodiscard]] Bitstring majority_vote(const ShotBatch &batch);

[[nodiscard]] VqeResult vqe_solve(const QuboProblem &q, const VqeConfig &cfg,
                                  Exec exec = Exec::parallel);

} // namespace fcesched
