#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fcesched {

struct TraceSample {
    double t = 0.0; ///< seconds
    double v = 0.0; ///< volts
    double g = 0.0; ///< normalized conductance G/G0
};

/// A raw FCE record: samples, the sample indices at which feedback fired,
/// and the feedback level (percent) applied at each of those events.
struct ConductanceTrace {
    std::vector<TraceSample> samples;
    std::vector<std::size_t> fb_events;
    std::vector<double> vfb_labels;

    /// Throws DomainError if any structural invariant is broken.
    void validate() const;
};

/// Samples from one feedback event up to (not including) the next. Borrows
/// from the trace it was extracted from.
struct FeedbackCycle {
    double vfb = 0.0;
    std::span<const TraceSample> samples;
    double g_ref = 0.0;
};

struct CycleMetrics {
    double d = 0.0;       ///< drop during feedback control
    double f = 0.0;       ///< drop over the whole feedback cycle
    std::size_t l = 0;    ///< points in the post-feedback interval
    std::size_t p1 = 0;   ///< points within tolerance of g_ref
    double p2 = 0.0;      ///< g_max - g_min over the interval
};

struct GeneratorConfig {
    std::size_t n_cycles = 511;
    std::size_t z_levels = 9;
    double noise_amplitude = 0.05;
    std::uint64_t seed = 0;
};

/// One (previous level, next level, Score_trans) record.
struct ScoreObservation {
    double vfb_from = 0.0;
    double vfb_to = 0.0;
    double score = 0.0;
};

/// Z x Z matrix of rounded transition rewards, row = previous level,
/// column = next level. Entries are drawn from {0, 10, ..., 90, 99}.
class TransitionMatrix {
  public:
    TransitionMatrix() = default;
    TransitionMatrix(std::vector<double> levels, std::vector<int> entries);

    [[nodiscard]] std::size_t z() const noexcept { return levels_.size(); }
    [[nodiscard]] const std::vector<double> &levels() const noexcept { return levels_; }
    [[nodiscard]] int operator()(std::size_t i, std::size_t j) const {
        return w_[i * levels_.size() + j];
    }
    [[nodiscard]] const std::vector<int> &entries() const noexcept { return w_; }
    [[nodiscard]] int max_entry() const;

  private:
    std::vector<double> levels_;
    std::vector<int> w_;
};

[[nodiscard]] bool is_discrete_weight(int value) noexcept;

/// Default percent labels for Z levels: evenly spaced, 10..90 for Z = 9.
[[nodiscard]] std::vector<double> default_levels(std::size_t z);

/// Indices of the two levels the synthetic generator rewards when they
/// follow each other (the ones closest to 20% and 60%).
struct PlantedPair {
    std::size_t first;
    std::size_t second;
};
[[nodiscard]] PlantedPair planted_pair(std::span<const double> levels);

[[nodiscard]] ConductanceTrace generate_synthetic_trace(const GeneratorConfig &config);

[[nodiscard]] std::vector<FeedbackCycle> extract_cycles(const ConductanceTrace &trace);

[[nodiscard]] CycleMetrics cycle_metrics(const FeedbackCycle &cycle, double prev_cycle_end_g,
                                         double tolerance = 0.5);

inline constexpr double kScoreDenominatorFloor = 1e-6;

[[nodiscard]] double score_vfb(const CycleMetrics &m);

[[nodiscard]] double score_trans(double s_n, double s_next);

/// Snaps a score already rescaled to [0, 99] onto {0, 10, ..., 90, 99}.
[[nodiscard]] int snap_to_discrete(double rescaled);

/// Averages observations per (from, to) pair, rescales so the largest
/// average becomes 99 and snaps every entry. An empty `levels` means "use
/// the sorted distinct labels seen in the observations".
[[nodiscard]] TransitionMatrix build_transition_matrix(std::span<const ScoreObservation> db,
                                                       std::span<const double> levels = {});

/// Runs cycles -> metrics -> per-cycle scores -> consecutive-cycle
/// transition scores for one trace.
[[nodiscard]] std::vector<ScoreObservation> trace_observations(const ConductanceTrace &trace,
                                                               double tolerance = 0.5);

} // namespace fcesched
