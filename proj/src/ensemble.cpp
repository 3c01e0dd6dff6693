#include "smdagg/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace smdagg {

namespace {

// Linear interpolation between order statistics, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q) {
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct StumpKey {
    std::size_t dim;
    std::uint64_t threshold_bits;
    int polarity;
    bool operator==(const StumpKey&) const = default;
};

struct StumpKeyHash {
    std::size_t operator()(const StumpKey& k) const {
        std::size_t h = std::hash<std::size_t>{}(k.dim);
        h ^= std::hash<std::uint64_t>{}(k.threshold_bits) + 0x9E3779B9u + (h << 6) + (h >> 2);
        h ^= std::hash<int>{}(k.polarity) + 0x9E3779B9u + (h << 6) + (h >> 2);
        return h;
    }
};

StumpKey key_of(const Stump& s) {
    std::uint64_t bits;
    std::memcpy(&bits, &s.threshold, sizeof(bits));
    return {s.dim, bits, s.polarity};
}

}  // namespace

int stump_predict(const Stump& s, std::span<const double> x) {
    if (s.dim >= x.size())
        throw std::invalid_argument("stump_predict: dimension " + std::to_string(s.dim) +
                                    " out of range for input of length " +
                                    std::to_string(x.size()));
    return x[s.dim] > s.threshold ? s.polarity : -s.polarity;
}

Ensemble build_stump_grid(std::span<const Example> train, std::size_t stumps_per_dim) {
    if (train.empty()) throw std::invalid_argument("build_stump_grid: empty training set");
    if (stumps_per_dim < 1)
        throw std::invalid_argument("build_stump_grid: stumps_per_dim must be >= 1");

    const std::size_t d = train.front().x.size();
    if (d == 0) throw std::invalid_argument("build_stump_grid: examples have no features");
    std::vector<Stump> grid;
    grid.reserve(2 * d * stumps_per_dim);

    std::vector<double> column(train.size());
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < train.size(); ++i) {
            if (train[i].x.size() != d)
                throw std::invalid_argument("build_stump_grid: ragged feature vectors");
            column[i] = train[i].x[j];
        }
        std::sort(column.begin(), column.end());
        for (std::size_t k = 1; k <= stumps_per_dim; ++k) {
            double q = static_cast<double>(k) / static_cast<double>(stumps_per_dim + 1);
            grid.push_back({j, quantile_sorted(column, q), +1});
        }
    }

    // Symmetric closure: append the negated copy of every stump.
    const std::size_t base = grid.size();
    for (std::size_t i = 0; i < base; ++i)
        grid.push_back({grid[i].dim, grid[i].threshold, -grid[i].polarity});

    // Drop exact duplicates, keeping first occurrences. Duplicates arise
    // in pairs (their negations coincide too), so the closure survives.
    std::vector<Stump> models;
    models.reserve(grid.size());
    std::unordered_set<StumpKey, StumpKeyHash> seen;
    for (const Stump& s : grid)
        if (seen.insert(key_of(s)).second) models.push_back(s);

    return Ensemble{std::move(models), d};
}

PredictionVector predict_vector(const Ensemble& e, std::span<const double> x) {
    if (x.size() != e.dim)
        throw std::invalid_argument("predict_vector: expected " + std::to_string(e.dim) +
                                    " features, got " + std::to_string(x.size()));
    PredictionVector values(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
        const Stump& s = e.models[j];
        values[j] = x[s.dim] > s.threshold ? static_cast<std::int8_t>(s.polarity)
                                           : static_cast<std::int8_t>(-s.polarity);
    }
    return values;
}

double dot_score(std::span<const double> theta, const PredictionVector& b) {
    if (theta.size() != b.size())
        throw std::invalid_argument("dot_score: length mismatch");
    double z = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) z += theta[j] * static_cast<double>(b[j]);
    return z;
}

double aggregate_score(const Ensemble& e, std::span<const double> theta,
                       std::span<const double> x) {
    if (theta.size() != e.size())
        throw std::invalid_argument("aggregate_score: weight length mismatch");
    double sum = 0.0;
    for (double w : theta) {
        if (!(w >= -1e-9))
            throw std::invalid_argument("aggregate_score: negative simplex weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("aggregate_score: weights sum to " + std::to_string(sum));
    return dot_score(theta, predict_vector(e, x));
}

}  // namespace smdagg
