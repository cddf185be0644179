#include "fcesched/qubo.hpp"

#include "fcesched/errors.hpp"

#include <algorithm>
#include <string>

namespace fcesched {

QuboProblem::QuboProblem(std::size_t n_orders, std::size_t z_levels, double a, double b,
                         double offset, std::vector<double> linear,
                         std::vector<QuadTerm> quadratic,
                         std::optional<TransitionMatrix> transitions)
    : n_orders_(n_orders), z_levels_(z_levels), a_(a), b_(b), offset_(offset),
      linear_(std::move(linear)), quadratic_(std::move(quadratic)),
      transitions_(std::move(transitions)) {
    if (transitions_ && transitions_->z() != z_levels_) {
        throw DimensionError("transition matrix size does not match z_levels");
    }
    const std::size_t n = linear_.size();
    if (n != n_orders_ * z_levels_) {
        throw DimensionError("num_vars (" + std::to_string(n) + ") != n_orders * z_levels");
    }
    for (QuadTerm &t : quadratic_) {
        if (t.i > t.j) {
            std::swap(t.i, t.j);
        }
        if (t.i == t.j || t.j >= n) {
            throw IndexError("quadratic term (" + std::to_string(t.i) + ", " +
                             std::to_string(t.j) + ") is not a pair of distinct variables");
        }
    }
    std::sort(quadratic_.begin(), quadratic_.end(), [](const QuadTerm &l, const QuadTerm &r) {
        return l.i != r.i ? l.i < r.i : l.j < r.j;
    });
    // Merge duplicate keys so every unordered pair appears once.
    std::vector<QuadTerm> merged;
    merged.reserve(quadratic_.size());
    for (const QuadTerm &t : quadratic_) {
        if (!merged.empty() && merged.back().i == t.i && merged.back().j == t.j) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    quadratic_ = std::move(merged);

    std::vector<std::size_t> degree(n, 0);
    for (const QuadTerm &t : quadratic_) {
        ++degree[t.i];
        ++degree[t.j];
    }
    row_start_.assign(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k) {
        row_start_[k + 1] = row_start_[k] + degree[k];
    }
    adjacency_.resize(row_start_[n]);
    std::vector<std::size_t> fill(row_start_.begin(), row_start_.end() - 1);
    for (const QuadTerm &t : quadratic_) {
        adjacency_[fill[t.i]++] = {t.j, t.coeff};
        adjacency_[fill[t.j]++] = {t.i, t.coeff};
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(row_start_[k]),
                  adjacency_.begin() + static_cast<std::ptrdiff_t>(row_start_[k + 1]),
                  [](const Neighbor &l, const Neighbor &r) { return l.index < r.index; });
    }
}

std::size_t var_index(std::size_t n, std::size_t i, std::size_t n_orders, std::size_t z) {
    if (n >= n_orders || i >= z) {
        throw IndexError("grid position (" + std::to_string(n) + ", " + std::to_string(i) +
                         ") outside " + std::to_string(n_orders) + " x " + std::to_string(z));
    }
    return n * z + i;
}

QuboProblem build_qubo(const TransitionMatrix &w, std::size_t n_orders, double a, double b) {
    if (n_orders < 2) {
        throw DomainError("at least two orders are needed for a transition");
    }
    if (!(a > 0.0)) {
        throw DomainError("penalty weight a must be positive");
    }
    if (!(b >= 0.0)) {
        throw DomainError("reward weight b must be non-negative");
    }
    const std::size_t z = w.z();
    const std::size_t n = n_orders * z;

    // a * (sum_i x_i - 1)^2 = a - a * sum_i x_i + 2a * sum_{i<j} x_i x_j  (x^2 = x)
    std::vector<double> linear(n, -a);
    std::vector<QuadTerm> quad;
    quad.reserve(n_orders * z * (z - 1) / 2 + (n_orders - 1) * z * z);
    for (std::size_t o = 0; o < n_orders; ++o) {
        for (std::size_t i = 0; i < z; ++i) {
            for (std::size_t j = i + 1; j < z; ++j) {
                quad.push_back({o * z + i, o * z + j, 2.0 * a});
            }
        }
    }
    for (std::size_t o = 0; o + 1 < n_orders; ++o) {
        for (std::size_t i = 0; i < z; ++i) {
            for (std::size_t j = 0; j < z; ++j) {
                if (w(i, j) != 0) {
                    quad.push_back({o * z + i, (o + 1) * z + j, -b * w(i, j)});
                }
            }
        }
    }
    return QuboProblem(n_orders, z, a, b, a * static_cast<double>(n_orders), std::move(linear),
                       std::move(quad), w);
}

double energy(const QuboProblem &q, const Bitstring &x) {
    if (x.size() != q.num_vars()) {
        throw DimensionError("bitstring has " + std::to_string(x.size()) + " bits, problem has " +
                             std::to_string(q.num_vars()) + " variables");
    }
    double e = q.offset();
    const auto &lin = q.linear();
    for (std::size_t k = 0; k < lin.size(); ++k) {
        if (x[k]) {
            e += lin[k];
        }
    }
    for (const QuadTerm &t : q.quadratic()) {
        if (x[t.i] && x[t.j]) {
            e += t.coeff;
        }
    }
    return e;
}

double flip_delta(const QuboProblem &q, const Bitstring &x, std::size_t k) {
    double field = q.linear()[k];
    for (const Neighbor &nb : q.neighbors(k)) {
        if (x[nb.index]) {
            field += nb.coeff;
        }
    }
    return x[k] ? -field : field;
}

bool is_feasible(const Bitstring &x, std::size_t n_orders, std::size_t z_levels) {
    if (x.size() != n_orders * z_levels) {
        throw DimensionError("bitstring length does not match the grid");
    }
    for (std::size_t o = 0; o < n_orders; ++o) {
        std::size_t set = 0;
        for (std::size_t i = 0; i < z_levels; ++i) {
            set += x[o * z_levels + i];
        }
        if (set != 1) {
            return false;
        }
    }
    return true;
}

Schedule decode_schedule(const Bitstring &x, std::size_t n_orders, std::size_t z_levels) {
    if (x.size() != n_orders * z_levels) {
        throw DimensionError("bitstring length does not match the grid");
    }
    Schedule s;
    s.levels.resize(n_orders);
    std::vector<std::size_t> bad;
    for (std::size_t o = 0; o < n_orders; ++o) {
        std::size_t set = 0;
        for (std::size_t i = 0; i < z_levels; ++i) {
            if (x[o * z_levels + i]) {
                ++set;
                s.levels[o] = i;
            }
        }
        if (set != 1) {
            bad.push_back(o);
        }
    }
    if (!bad.empty()) {
        throw InfeasibleError(std::move(bad));
    }
    return s;
}

Bitstring encode_schedule(const Schedule &s, std::size_t z_levels) {
    Bitstring x(s.size() * z_levels);
    for (std::size_t o = 0; o < s.size(); ++o) {
        x[var_index(o, s.levels[o], s.size(), z_levels)] = 1;
    }
    return x;
}

double s_max(const TransitionMatrix &w, const Schedule &s) {
    double total = 0.0;
    for (std::size_t o = 0; o + 1 < s.size(); ++o) {
        if (s.levels[o] >= w.z() || s.levels[o + 1] >= w.z()) {
            throw IndexError("schedule level outside the transition matrix");
        }
        total += w(s.levels[o], s.levels[o + 1]);
    }
    return total;
}

std::vector<double> schedule_percent(const TransitionMatrix &w, const Schedule &s) {
    std::vector<double> out;
    out.reserve(s.size());
    for (std::size_t level : s.levels) {
        out.push_back(w.levels().at(level));
    }
    return out;
}

} // namespace fcesched
