#include "fcesched/trace.hpp"

#include "fcesched/errors.hpp"
#include "fcesched/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>

namespace fcesched {

void ConductanceTrace::validate() const {
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].t > samples[i - 1].t)) {
            throw DomainError("sample times must be strictly increasing (index " +
                              std::to_string(i) + ")");
        }
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].g >= 0.0)) {
            throw DomainError("negative conductance at sample " + std::to_string(i));
        }
    }
    for (std::size_t k = 0; k < fb_events.size(); ++k) {
        if (fb_events[k] >= samples.size()) {
            throw DomainError("feedback event index out of range");
        }
        if (k > 0 && fb_events[k] <= fb_events[k - 1]) {
            throw DomainError("feedback events must be strictly increasing");
        }
    }
    if (vfb_labels.size() != fb_events.size()) {
        throw DomainError("one feedback level is required per feedback event");
    }
}

TransitionMatrix::TransitionMatrix(std::vector<double> levels, std::vector<int> entries)
    : levels_(std::move(levels)), w_(std::move(entries)) {
    if (levels_.size() < 2) {
        throw DomainError("a transition matrix needs at least two levels");
    }
    if (w_.size() != levels_.size() * levels_.size()) {
        throw DimensionError("transition matrix must be Z x Z");
    }
    for (int v : w_) {
        if (!is_discrete_weight(v)) {
            throw DomainError("transition weight " + std::to_string(v) +
                              " is not in {0, 10, ..., 90, 99}");
        }
    }
}

int TransitionMatrix::max_entry() const {
    return w_.empty() ? 0 : *std::max_element(w_.begin(), w_.end());
}

bool is_discrete_weight(int value) noexcept {
    return value == 99 || (value >= 0 && value <= 90 && value % 10 == 0);
}

std::vector<double> default_levels(std::size_t z) {
    std::vector<double> out(z);
    for (std::size_t i = 0; i < z; ++i) {
        out[i] = std::round(100.0 * static_cast<double>(i + 1) / static_cast<double>(z + 1));
    }
    return out;
}

PlantedPair planted_pair(std::span<const double> levels) {
    if (levels.size() < 2) {
        throw DomainError("need at least two levels to plant a pair");
    }
    auto closest = [&](double target, std::size_t skip) {
        std::size_t best = levels.size();
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const double gap = std::abs(levels[i] - target);
            if (i != skip && gap < best_gap) {
                best = i;
                best_gap = gap;
            }
        }
        return best;
    };
    const std::size_t a = closest(20.0, levels.size());
    const std::size_t b = closest(60.0, a);
    return {a, b};
}

namespace {

// Cycle quality in [0, 1]: 1 for the planted transition in either
// direction, 0.6 for landing on a planted level from elsewhere, 0 otherwise.
double cycle_quality(std::size_t prev, std::size_t cur, bool has_prev, PlantedPair pair) {
    const bool cur_good = cur == pair.first || cur == pair.second;
    if (has_prev && prev != cur &&
        ((prev == pair.first && cur == pair.second) ||
         (prev == pair.second && cur == pair.first))) {
        return 1.0;
    }
    return cur_good ? 0.6 : 0.0;
}

constexpr std::size_t kLeadIn = 20;
constexpr std::size_t kMinPlateau = 150;
constexpr std::size_t kMaxPlateau = 300;
constexpr double kDt = 1e-3;
constexpr double kVoltageStart = 0.1;
constexpr double kVoltageStep = 1e-4;

} // namespace

ConductanceTrace generate_synthetic_trace(const GeneratorConfig &config) {
    if (config.n_cycles == 0) {
        throw ConfigError("n_cycles must be at least 1");
    }
    if (config.z_levels < 2) {
        throw ConfigError("z_levels must be at least 2");
    }
    if (!(config.noise_amplitude >= 0.0)) {
        throw ConfigError("noise_amplitude must be non-negative");
    }

    Rng rng(derive_seed(config.seed, {0x7472616365ULL}));
    const std::vector<double> levels = default_levels(config.z_levels);
    const PlantedPair pair = planted_pair(levels);
    std::uniform_int_distribution<std::size_t> pick_level(0, config.z_levels - 1);
    std::uniform_int_distribution<std::size_t> pick_length(kMinPlateau, kMaxPlateau);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Draw the per-cycle plan first so the starting plateau can be placed
    // high enough for every drop to land at g >= 1.
    struct Plan {
        std::size_t level;
        std::size_t length;
        double drop;
        double sigma;
    };
    std::vector<Plan> plan(config.n_cycles);
    double total_drop = 0.0;
    for (std::size_t k = 0; k < config.n_cycles; ++k) {
        Plan &p = plan[k];
        p.level = pick_level(rng);
        p.length = pick_length(rng);
        const double q = cycle_quality(k > 0 ? plan[k - 1].level : 0, p.level, k > 0, pair);
        // Weak feedback lets too many atoms migrate; strong feedback too few.
        const double miss = levels[p.level] < 50.0 ? 1.0 : -0.6;
        p.drop = 1.0 + (1.0 - q) * miss;
        p.sigma = config.noise_amplitude * (1.0 + 3.0 * (1.0 - q));
        total_drop += p.drop;
    }

    ConductanceTrace trace;
    std::size_t total = kLeadIn;
    for (const Plan &p : plan) {
        total += p.length;
    }
    trace.samples.reserve(total);
    trace.fb_events.reserve(config.n_cycles);
    trace.vfb_labels.reserve(config.n_cycles);

    auto emit = [&](double plateau, double sigma, double v) {
        const double t = static_cast<double>(trace.samples.size()) * kDt;
        const double g = std::max(0.0, plateau + sigma * gauss(rng));
        trace.samples.push_back({t, v, g});
    };

    double plateau = std::ceil(total_drop) + 2.0;
    double v = kVoltageStart;
    for (std::size_t i = 0; i < kLeadIn; ++i) {
        emit(plateau, config.noise_amplitude, v);
        v += kVoltageStep;
    }
    for (const Plan &p : plan) {
        plateau -= p.drop;
        v *= 1.0 - levels[p.level] / 100.0;
        trace.fb_events.push_back(trace.samples.size());
        trace.vfb_labels.push_back(levels[p.level]);
        for (std::size_t i = 0; i < p.length; ++i) {
            emit(plateau, p.sigma, v);
            v += kVoltageStep;
        }
    }
    return trace;
}

std::vector<FeedbackCycle> extract_cycles(const ConductanceTrace &trace) {
    if (trace.fb_events.empty()) {
        throw EmptyInputError("trace has no feedback events");
    }
    trace.validate();
    const std::span<const TraceSample> all(trace.samples);
    std::vector<FeedbackCycle> cycles;
    cycles.reserve(trace.fb_events.size());
    for (std::size_t k = 0; k < trace.fb_events.size(); ++k) {
        const std::size_t begin = trace.fb_events[k];
        const std::size_t end =
            k + 1 < trace.fb_events.size() ? trace.fb_events[k + 1] : all.size();
        const auto slice = all.subspan(begin, end - begin);
        cycles.push_back({trace.vfb_labels[k], slice, slice.front().g});
    }
    return cycles;
}

CycleMetrics cycle_metrics(const FeedbackCycle &cycle, double prev_cycle_end_g, double tolerance) {
    if (cycle.samples.empty()) {
        throw DomainError("feedback cycle has no samples");
    }
    if (!(tolerance > 0.0)) {
        throw DomainError("tolerance must be positive");
    }
    CycleMetrics m;
    m.d = prev_cycle_end_g - cycle.g_ref;
    m.f = prev_cycle_end_g - cycle.samples.back().g;
    m.l = cycle.samples.size();
    double g_min = cycle.samples.front().g;
    double g_max = g_min;
    for (const TraceSample &s : cycle.samples) {
        if (std::abs(s.g - cycle.g_ref) <= tolerance) {
            ++m.p1;
        }
        g_min = std::min(g_min, s.g);
        g_max = std::max(g_max, s.g);
    }
    m.p2 = g_max - g_min;
    return m;
}

double score_vfb(const CycleMetrics &m) {
    if (m.p1 == 0 || m.l == 0) {
        return 0.0;
    }
    const double stability = static_cast<double>(m.p1) / static_cast<double>(m.l);
    const double deviation = std::abs(m.d - 1.0) + std::abs(m.f - 1.0) + std::abs(m.p2);
    return stability / std::max(deviation, kScoreDenominatorFloor);
}

double score_trans(double s_n, double s_next) {
    return 0.5 * (s_n + s_next);
}

int snap_to_discrete(double rescaled) {
    if (rescaled >= 95.0) {
        return 99;
    }
    if (rescaled <= 0.0) {
        return 0;
    }
    return static_cast<int>(std::floor(rescaled / 10.0 + 0.5)) * 10;
}

TransitionMatrix build_transition_matrix(std::span<const ScoreObservation> db,
                                         std::span<const double> levels) {
    if (db.empty()) {
        throw EmptyInputError("transition database is empty");
    }
    std::vector<double> lv(levels.begin(), levels.end());
    if (lv.empty()) {
        for (const ScoreObservation &o : db) {
            lv.push_back(o.vfb_from);
            lv.push_back(o.vfb_to);
        }
        std::sort(lv.begin(), lv.end());
        lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    }
    const std::size_t z = lv.size();
    if (z < 2) {
        throw DomainError("transition matrix needs at least two levels");
    }
    auto index_of = [&](double label) {
        const auto it = std::find(lv.begin(), lv.end(), label);
        if (it == lv.end()) {
            throw DomainError("feedback level " + std::to_string(label) +
                              " is not one of the configured levels");
        }
        return static_cast<std::size_t>(it - lv.begin());
    };

    std::vector<double> sum(z * z, 0.0);
    std::vector<std::size_t> count(z * z, 0);
    for (const ScoreObservation &o : db) {
        const std::size_t cell = index_of(o.vfb_from) * z + index_of(o.vfb_to);
        sum[cell] += o.score;
        ++count[cell];
    }
    double top = 0.0;
    for (std::size_t c = 0; c < z * z; ++c) {
        if (count[c] > 0) {
            sum[c] /= static_cast<double>(count[c]);
            top = std::max(top, sum[c]);
        }
    }
    std::vector<int> w(z * z, 0);
    if (top > 0.0) {
        for (std::size_t c = 0; c < z * z; ++c) {
            if (count[c] > 0) {
                w[c] = snap_to_discrete(99.0 * sum[c] / top);
            }
        }
    }
    return TransitionMatrix(std::move(lv), std::move(w));
}

std::vector<ScoreObservation> trace_observations(const ConductanceTrace &trace, double tolerance) {
    const std::vector<FeedbackCycle> cycles = extract_cycles(trace);
    std::vector<double> scores(cycles.size());
    double prev_end = trace.samples.front().g;
    for (std::size_t k = 0; k < cycles.size(); ++k) {
        scores[k] = score_vfb(cycle_metrics(cycles[k], prev_end, tolerance));
        prev_end = cycles[k].samples.back().g;
    }
    std::vector<ScoreObservation> db;
    db.reserve(cycles.size());
    for (std::size_t k = 0; k + 1 < cycles.size(); ++k) {
        db.push_back({cycles[k].vfb, cycles[k + 1].vfb, score_trans(scores[k], scores[k + 1])});
    }
    return db;
}

} // namespace fcesched
