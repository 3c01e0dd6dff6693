#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smdagg/types.hpp"

namespace smdagg {

// One-dimensional threshold classifier: polarity if x[dim] > threshold,
// otherwise -polarity. Equality goes to -polarity.
struct Stump {
    std::size_t dim = 0;
    double threshold = 0.0;
    int polarity = +1;
};

// Ordered base-model collection. Symmetric by construction: for every
// stump its negation (same dim/threshold, flipped polarity) is present,
// so the collection size is even.
struct Ensemble {
    std::vector<Stump> models;
    std::size_t dim = 0;  // ambient feature dimension

    std::size_t size() const { return models.size(); }
};

// Per-point base-model outputs, entries in {-1, +1}.
using PredictionVector = std::vector<std::int8_t>;

int stump_predict(const Stump& s, std::span<const double> x);

// Quantile-threshold stumps: for each dimension, stumps_per_dim thresholds
// at the k/(stumps_per_dim+1) empirical quantiles of the training features,
// polarity +1, then the negated copies, then exact duplicates removed.
Ensemble build_stump_grid(std::span<const Example> train, std::size_t stumps_per_dim);

PredictionVector predict_vector(const Ensemble& e, std::span<const double> x);

// <theta, b(x)> for theta already materialized as a prediction vector.
double dot_score(std::span<const double> theta, const PredictionVector& b);

// Convex-aggregate score <theta, b(x)> in [-1, 1]. Validates that theta
// lies on the simplex (entries >= 0, sum 1 within tolerance).
double aggregate_score(const Ensemble& e, std::span<const double> theta,
                       std::span<const double> x);

}  // namespace smdagg
