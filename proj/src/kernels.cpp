#include "fcesched/kernels.hpp"

#include "fcesched/errors.hpp"
#include "fcesched/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace fcesched {

bool wins_tie(std::uint64_t a, std::uint64_t b) noexcept {
    const std::uint64_t diff = a ^ b;
    return diff != 0 && (a & (diff & (~diff + 1))) != 0;
}

namespace {

void check_brute_force_size(const QuboProblem &q) {
    if (q.num_vars() > kBruteForceMaxVars) {
        throw SizeError("brute force is capped at " + std::to_string(kBruteForceMaxVars) +
                        " variables, problem has " + std::to_string(q.num_vars()));
    }
}

Bitstring bits_of(std::uint64_t mask, std::size_t n) {
    Bitstring x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = static_cast<std::uint8_t>((mask >> k) & 1U);
    }
    return x;
}

struct Candidate {
    std::uint64_t mask = 0;
    double energy = 0.0;
    bool valid = false;

    void offer(std::uint64_t m, double e) {
        if (!valid || e < energy || (e == energy && wins_tie(m, mask))) {
            mask = m;
            energy = e;
            valid = true;
        }
    }
};

} // namespace

BruteForceResult brute_force_reference(const QuboProblem &q) {
    check_brute_force_size(q);
    const std::size_t n = q.num_vars();
    Candidate best;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t m = 0; m < total; ++m) {
        best.offer(m, energy(q, bits_of(m, n)));
    }
    return {bits_of(best.mask, n), best.energy};
}

BruteForceResult brute_force_scan(const QuboProblem &q, Exec exec) {
    check_brute_force_size(q);
    const std::size_t n = q.num_vars();
    const std::size_t chunk_bits = n >= 12 ? 8 : 0;
    const std::size_t low_bits = n - chunk_bits;
    const std::int64_t chunks = std::int64_t{1} << chunk_bits;
    std::vector<Candidate> per_chunk(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (std::int64_t c = 0; c < chunks; ++c) {
        std::uint64_t mask = static_cast<std::uint64_t>(c) << low_bits;
        Bitstring x = bits_of(mask, n);
        double e = energy(q, x);
        Candidate best;
        best.offer(mask, e);
        const std::uint64_t steps = std::uint64_t{1} << low_bits;
        for (std::uint64_t i = 1; i < steps; ++i) {
            const auto k = static_cast<std::size_t>(std::countr_zero(i));
            e += flip_delta(q, x, k);
            x[k] ^= 1U;
            mask ^= std::uint64_t{1} << k;
            // The running sum can drift; settle near-ties on exact energies.
            if (e <= best.energy + 1e-6 * (1.0 + std::abs(best.energy))) {
                best.offer(mask, energy(q, x));
            }
        }
        per_chunk[static_cast<std::size_t>(c)] = best;
    }

    Candidate best;
    for (const Candidate &c : per_chunk) {
        best.offer(c.mask, c.energy);
    }
    return {bits_of(best.mask, n), best.energy};
}

ShotBatch::ShotBatch(std::size_t shots, std::size_t num_vars)
    : shots_(shots), num_vars_(num_vars), words_((num_vars + 63) / 64),
      data_(shots * words_, 0) {}

Bitstring ShotBatch::shot(std::size_t s) const {
    Bitstring x(num_vars_);
    for (std::size_t k = 0; k < num_vars_; ++k) {
        x[k] = bit(s, k) ? 1 : 0;
    }
    return x;
}

std::vector<double> ShotBatch::column_means() const {
    std::vector<double> out(num_vars_, 0.0);
    if (shots_ == 0) {
        return out;
    }
    for (std::size_t s = 0; s < shots_; ++s) {
        for (std::size_t k = 0; k < num_vars_; ++k) {
            out[k] += bit(s, k) ? 1.0 : 0.0;
        }
    }
    for (double &v : out) {
        v /= static_cast<double>(shots_);
    }
    return out;
}

namespace {

// Marks the successes of `len` Bernoulli(p) trials starting at shot
// `first`, p in (0, 1). Gaps between successes are geometric.
template <typename Mark>
void geometric_positions(Rng &rng, double p, std::size_t len, Mark &&mark) {
    const double log_miss = std::log1p(-p);
    double pos = -1.0;
    const auto limit = static_cast<double>(len);
    while (true) {
        const double u = 1.0 - uniform01(rng); // (0, 1]
        pos += std::floor(std::log(u) / log_miss) + 1.0;
        if (!(pos < limit)) {
            return;
        }
        mark(static_cast<std::size_t>(pos));
    }
}

} // namespace

ShotBatch sample_shots(std::span<const double> probs, std::size_t shots, std::uint64_t seed,
                       Exec exec) {
    const std::size_t n = probs.size();
    ShotBatch batch(shots, n);
    const auto blocks = static_cast<std::int64_t>((shots + kShotBlock - 1) / kShotBlock);

#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (std::int64_t blk = 0; blk < blocks; ++blk) {
        Rng rng = make_rng(seed, {static_cast<std::uint64_t>(blk)});
        const std::size_t first = static_cast<std::size_t>(blk) * kShotBlock;
        const std::size_t len = std::min(kShotBlock, shots - first);
        for (std::size_t k = 0; k < n; ++k) {
            const double p = probs[k];
            if (p <= 0.0) {
                continue;
            }
            if (p >= 1.0) {
                for (std::size_t s = 0; s < len; ++s) {
                    batch.set(first + s, k);
                }
            } else if (p <= 0.5) {
                geometric_positions(rng, p, len, [&](std::size_t s) { batch.set(first + s, k); });
            } else {
                for (std::size_t s = 0; s < len; ++s) {
                    batch.set(first + s, k);
                }
                geometric_positions(rng, 1.0 - p, len,
                                    [&](std::size_t s) { batch.clear(first + s, k); });
            }
        }
    }
    return batch;
}

ShotBatch sample_shots_reference(std::span<const double> probs, std::size_t shots,
                                 std::uint64_t seed) {
    const std::size_t n = probs.size();
    ShotBatch batch(shots, n);
    Rng rng = make_rng(seed, {0x726566ULL});
    for (std::size_t s = 0; s < shots; ++s) {
        for (std::size_t k = 0; k < n; ++k) {
            if (uniform01(rng) < probs[k]) {
                batch.set(s, k);
            }
        }
    }
    return batch;
}

DenseQubo::DenseQubo(const QuboProblem &q)
    : n(q.num_vars()), offset(q.offset()), linear(q.linear()), coupling(n * n, 0.0) {
    for (const QuadTerm &t : q.quadratic()) {
        coupling[t.i * n + t.j] += t.coeff;
        coupling[t.j * n + t.i] += t.coeff;
    }
}

std::vector<double> shot_energies(const DenseQubo &q, const ShotBatch &batch, Exec exec) {
    if (batch.num_vars() != q.n) {
        throw DimensionError("shot width does not match the problem size");
    }
    const auto shots = static_cast<std::int64_t>(batch.shots());
    std::vector<double> out(batch.shots());

#pragma omp parallel if (exec == Exec::parallel)
    {
        std::vector<std::size_t> set_bits;
        set_bits.reserve(q.n);
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < shots; ++s) {
            set_bits.clear();
            const auto row = batch.row(static_cast<std::size_t>(s));
            for (std::size_t w = 0; w < row.size(); ++w) {
                std::uint64_t word = row[w];
                while (word != 0) {
                    set_bits.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
                    word &= word - 1;
                }
            }
            double e = q.offset;
            for (std::size_t a = 0; a < set_bits.size(); ++a) {
                const std::size_t k = set_bits[a];
                e += q.linear[k];
                const double *coupling_row = q.coupling.data() + k * q.n;
                for (std::size_t b = 0; b < a; ++b) {
                    e += coupling_row[set_bits[b]];
                }
            }
            out[static_cast<std::size_t>(s)] = e;
        }
    }
    return out;
}

std::vector<double> shot_energies_reference(const QuboProblem &q, const ShotBatch &batch) {
    std::vector<double> out(batch.shots());
    for (std::size_t s = 0; s < batch.shots(); ++s) {
        out[s] = energy(q, batch.shot(s));
    }
    return out;
}

} // namespace fcesched
