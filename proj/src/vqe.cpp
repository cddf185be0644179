#include "fcesched/vqe.hpp"

#include "fcesched/errors.hpp"
#include "fcesched/rng.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace fcesched {

NoiseModel NoiseModel::symmetric(std::size_t n, double eps) {
    NoiseModel m{std::vector<double>(n, eps), std::vector<double>(n, eps)};
    m.validate(n);
    return m;
}

void NoiseModel::validate(std::size_t n) const {
    if (eps01.size() != n || eps10.size() != n) {
        throw DimensionError("noise model needs one rate per qubit and direction");
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!(eps01[k] >= 0.0 && eps01[k] < 0.5 && eps10[k] >= 0.0 && eps10[k] < 0.5)) {
            throw ConfigError("readout error rates must lie in [0, 0.5)");
        }
    }
}

std::string to_string(NoiseProfile p) {
    switch (p) {
    case NoiseProfile::none: return "none";
    case NoiseProfile::brussels: return "brussels";
    case NoiseProfile::nazca: return "nazca";
    case NoiseProfile::symmetric: return "symmetric";
    case NoiseProfile::custom: return "custom";
    }
    return "none";
}

NoiseProfile parse_noise_profile(const std::string &s) {
    if (s == "none") return NoiseProfile::none;
    if (s == "brussels") return NoiseProfile::brussels;
    if (s == "nazca") return NoiseProfile::nazca;
    if (s == "symmetric") return NoiseProfile::symmetric;
    if (s == "custom") return NoiseProfile::custom;
    throw ConfigError("unknown noise profile '" + s + "'");
}

std::string to_string(EvaluatorKind e) {
    return e == EvaluatorKind::exact ? "exact" : "sampled";
}

EvaluatorKind parse_evaluator(const std::string &s) {
    if (s == "exact") return EvaluatorKind::exact;
    if (s == "sampled") return EvaluatorKind::sampled;
    throw ConfigError("unknown evaluator '" + s + "'");
}

NoiseModel draw_noise(ErrorRange range, std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed, {0x6e6f697365ULL});
    NoiseModel m;
    m.eps01.resize(n);
    for (double &e : m.eps01) {
        e = range.lo + (range.hi - range.lo) * uniform01(rng);
    }
    m.eps10 = m.eps01;
    m.validate(n);
    return m;
}

void VqeConfig::validate() const {
    if (shots < 1) {
        throw ConfigError("shots must be at least 1");
    }
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (noise == NoiseProfile::symmetric && !(noise_eps >= 0.0 && noise_eps < 0.5)) {
        throw ConfigError("symmetric readout error must lie in [0, 0.5)");
    }
    if (noise == NoiseProfile::custom && !custom_noise) {
        throw ConfigError("custom noise profile needs explicit per-qubit rates");
    }
}

std::optional<NoiseModel> resolve_noise(const VqeConfig &cfg, std::size_t n) {
    switch (cfg.noise) {
    case NoiseProfile::none: return std::nullopt;
    case NoiseProfile::brussels: return draw_noise(kBrusselsRange, n, cfg.seed);
    case NoiseProfile::nazca: return draw_noise(kNazcaRange, n, cfg.seed);
    case NoiseProfile::symmetric: return NoiseModel::symmetric(n, cfg.noise_eps);
    case NoiseProfile::custom:
        if (!cfg.custom_noise) {
            throw ConfigError("custom noise profile needs explicit per-qubit rates");
        }
        cfg.custom_noise->validate(n);
        return cfg.custom_noise;
    }
    return std::nullopt;
}

double effective_prob(double theta, const NoiseModel *noise, std::size_t k) {
    const double s = std::sin(0.5 * theta);
    const double p = s * s;
    if (noise == nullptr) {
        return p;
    }
    return p * (1.0 - noise->eps10[k]) + (1.0 - p) * noise->eps01[k];
}

std::vector<double> effective_probs(std::span<const double> theta, const NoiseModel *noise) {
    std::vector<double> p(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        p[k] = effective_prob(theta[k], noise, k);
    }
    return p;
}

double expectation_from_probs(const QuboProblem &q, std::span<const double> probs) {
    if (probs.size() != q.num_vars()) {
        throw DimensionError("expected one probability per variable");
    }
    double e = q.offset();
    const auto &lin = q.linear();
    for (std::size_t k = 0; k < lin.size(); ++k) {
        e += lin[k] * probs[k];
    }
    for (const QuadTerm &t : q.quadratic()) {
        e += t.coeff * probs[t.i] * probs[t.j];
    }
    return e;
}

double expectation_exact(const QuboProblem &q, std::span<const double> theta,
                         const NoiseModel *noise) {
    if (theta.size() != q.num_vars()) {
        throw DimensionError("expected one angle per variable");
    }
    return expectation_from_probs(q, effective_probs(theta, noise));
}

std::vector<Bitstring> sample_bitstrings(std::span<const double> theta, std::size_t shots,
                                         const NoiseModel *noise, std::uint64_t seed) {
    const ShotBatch batch = sample_shots(effective_probs(theta, noise), shots, seed);
    std::vector<Bitstring> out;
    out.reserve(shots);
    for (std::size_t s = 0; s < shots; ++s) {
        out.push_back(batch.shot(s));
    }
    return out;
}

SampledEstimate summarize_energies(std::span<const double> energies) {
    if (energies.empty()) {
        throw EmptyInputError("no samples to average");
    }
    const auto n = static_cast<double>(energies.size());
    double mean = 0.0;
    for (double e : energies) {
        mean += e;
    }
    mean /= n;
    double var = 0.0;
    for (double e : energies) {
        var += (e - mean) * (e - mean);
    }
    var /= n;
    return {mean, std::sqrt(var) / std::sqrt(n)};
}

SampledEstimate expectation_sampled(const QuboProblem &q, std::span<const Bitstring> samples) {
    if (samples.empty()) {
        throw EmptyInputError("no samples to average");
    }
    std::vector<double> energies;
    energies.reserve(samples.size());
    for (const Bitstring &x : samples) {
        energies.push_back(energy(q, x));
    }
    return summarize_energies(energies);
}

Objective::Objective(const QuboProblem &q, EvaluatorKind kind, std::size_t shots,
                     std::optional<NoiseModel> noise)
    : q_(&q), kind_(kind), shots_(shots), noise_(std::move(noise)), dense_(q) {
    if (noise_) {
        noise_->validate(q.num_vars());
    }
}

double Objective::exact(std::span<const double> theta) const {
    return expectation_exact(*q_, theta, noise());
}

ShotBatch Objective::shots(std::span<const double> theta, std::uint64_t stream) const {
    return sample_shots(effective_probs(theta, noise()), shots_, stream);
}

double Objective::operator()(std::span<const double> theta, std::uint64_t stream) const {
    if (kind_ == EvaluatorKind::exact) {
        return exact(theta);
    }
    const std::vector<double> energies = shot_energies(dense_, shots(theta, stream));
    return summarize_energies(energies).mean;
}

double SinusoidFit::operator()(double phi) const {
    return c0 + c1 * std::cos(phi) + c2 * std::sin(phi);
}

bool SinusoidFit::degenerate() const noexcept {
    const double scale = 1e-12 * std::max(1.0, std::abs(c0));
    return std::abs(c1) <= scale && std::abs(c2) <= scale;
}

double SinusoidFit::argmin() const {
    double phi = std::atan2(-c2, -c1);
    if (phi < 0.0) {
        phi += 2.0 * std::numbers::pi;
    }
    return phi;
}

SinusoidFit fit_sinusoid(double theta, double e_here, double e_plus, double e_minus) {
    // Relative to theta: E(theta + d) = c0 + A cos d + B sin d.
    const double c0 = (e_here + e_plus + e_minus) / 3.0;
    const double a = (2.0 * e_here - e_plus - e_minus) / 3.0;
    const double b = (e_plus - e_minus) / std::sqrt(3.0);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c0, a * c - b * s, a * s + b * c};
}

namespace {

double wrap_angle(double phi) {
    phi = std::fmod(phi, 2.0 * std::numbers::pi);
    return phi < 0.0 ? phi + 2.0 * std::numbers::pi : phi;
}

} // namespace

NftStep nft_step(std::vector<double> &theta, std::size_t k, const Objective &objective,
                 std::uint64_t stream) {
    if (k >= theta.size()) {
        throw IndexError("parameter index " + std::to_string(k) + " out of range");
    }
    const double here = theta[k];
    NftStep step;
    step.before = objective(theta, derive_seed(stream, {0}));
    theta[k] = wrap_angle(here + kProbeOffset);
    const double plus = objective(theta, derive_seed(stream, {1}));
    theta[k] = wrap_angle(here - kProbeOffset);
    const double minus = objective(theta, derive_seed(stream, {2}));
    step.fit = fit_sinusoid(here, step.before, plus, minus);
    if (step.fit.degenerate()) {
        theta[k] = here;
        step.after = step.before;
    } else {
        theta[k] = step.fit.argmin();
        step.after = step.fit(theta[k]);
    }
    return step;
}

Bitstring round_state(std::span<const double> probs) {
    Bitstring x(probs.size());
    for (std::size_t k = 0; k < probs.size(); ++k) {
        x[k] = probs[k] > 0.5 ? 1 : 0;
    }
    return x;
}

Bitstring majority_vote(const ShotBatch &batch) {
    Bitstring x(batch.num_vars());
    std::vector<std::size_t> ones(batch.num_vars(), 0);
    for (std::size_t s = 0; s < batch.shots(); ++s) {
        for (std::size_t k = 0; k < batch.num_vars(); ++k) {
            ones[k] += batch.bit(s, k) ? 1 : 0;
        }
    }
    for (std::size_t k = 0; k < batch.num_vars(); ++k) {
        x[k] = 2 * ones[k] > batch.shots() ? 1 : 0;
    }
    return x;
}

namespace {

constexpr std::uint64_t kFinalStream = 0xf1a1ULL;

struct TrialOutcome {
    TrialRecord record;
    std::vector<TrajectoryPoint> trajectory;
};

TrialOutcome run_trial(const QuboProblem &q, const VqeConfig &cfg, const Objective &objective,
                       std::uint64_t trial) {
    const std::size_t n = q.num_vars();
    const std::uint64_t trial_seed = derive_seed(cfg.seed, {0x565145ULL, trial});
    Rng rng = make_rng(trial_seed, {0});
    std::vector<double> theta(n);
    for (double &t : theta) {
        t = 2.0 * std::numbers::pi * uniform01(rng);
    }

    TrialOutcome out;
    out.trajectory.reserve(cfg.iterations + 1);
    auto record = [&](std::size_t it) {
        const std::vector<double> probs = effective_probs(theta, objective.noise());
        const double rounded = energy(q, round_state(probs));
        const double best =
            out.trajectory.empty() ? rounded
                                   : std::min(rounded, out.trajectory.back().best_energy_so_far);
        out.trajectory.push_back({it, expectation_from_probs(q, probs), best});
    };
    record(0);
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        nft_step(theta, it % n, objective, derive_seed(trial_seed, {1, it}));
        record(it + 1);
    }

    Bitstring bits = objective.kind() == EvaluatorKind::exact
                         ? round_state(effective_probs(theta, objective.noise()))
                         : majority_vote(objective.shots(theta, derive_seed(trial_seed,
                                                                            {kFinalStream})));
    out.record = make_trial(q, std::move(bits));
    return out;
}

} // namespace

VqeResult vqe_solve(const QuboProblem &q, const VqeConfig &cfg, Exec exec) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const Objective objective(q, cfg.evaluator, cfg.shots, resolve_noise(cfg, q.num_vars()));

    std::vector<TrialOutcome> outcomes(cfg.trials);
    const auto trials = static_cast<std::int64_t>(cfg.trials);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (std::int64_t t = 0; t < trials; ++t) {
        outcomes[static_cast<std::size_t>(t)] =
            run_trial(q, cfg, objective, static_cast<std::uint64_t>(t));
    }

    std::vector<TrialRecord> records;
    VqeResult out;
    records.reserve(outcomes.size());
    out.trajectories.reserve(outcomes.size());
    for (TrialOutcome &o : outcomes) {
        records.push_back(std::move(o.record));
        out.trajectories.push_back(std::move(o.trajectory));
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    out.result = collect_trials(std::move(records), elapsed.count());
    for (std::size_t t = 0; t < out.result.per_trial.size(); ++t) {
        if (out.result.per_trial[t].energy == out.result.best_energy) {
            out.best_trial = t;
            break;
        }
    }
    return out;
}

} // namespace fcesched
