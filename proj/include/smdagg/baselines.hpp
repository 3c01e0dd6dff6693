#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "smdagg/active.hpp"
#include "smdagg/ensemble.hpp"
#include "smdagg/loss.hpp"
#include "smdagg/types.hpp"

namespace smdagg {

// Weighted vote over ensemble members: h(x) = sum alpha_j * b_j(x),
// all alpha > 0 and indices valid in the ensemble.
struct BoostedModel {
    std::vector<std::pair<std::size_t, double>> weights;
    std::size_t rounds = 0;
};

struct QbbConfig {
    std::size_t budget = 1;          // total labels, seed set included
    std::size_t candidate_size = 100;
    std::size_t boost_rounds = 50;
    std::uint64_t seed = 0;
    std::size_t seed_set_size = 10;  // uniformly sampled initial labels
};

// Discrete AdaBoost over the ensemble's stump set: each round picks the
// stump with minimum weighted 0-1 error, weights it by half the log-odds,
// and reweights the sample. Stops early when no stump beats 1/2 or when a
// stump is perfect (its weight capped at half log((1-delta)/delta),
// delta = 1e-6).
BoostedModel adaboost_fit(const Ensemble& e, std::span<const Example> labeled,
                          std::size_t rounds);

double boosted_score(const BoostedModel& m, const Ensemble& e, std::span<const double> x);

// |h(x)|: small means the committee is torn on x.
double boosted_margin(const BoostedModel& m, const Ensemble& e, std::span<const double> x);

struct QbbRecord {
    std::size_t queries = 0;
    double test_error = 0.0;
    double test_loss = 0.0;  // margin loss of the vote normalized by sum(alpha)
};

struct QbbResult {
    double final_error = 0.0;
    std::vector<QbbRecord> history;          // one entry per refit
    std::vector<std::size_t> queried_indices;  // pool indices, query order
};

// Pool-based query-by-boosting: label a small uniform seed set, then
// repeatedly boost on the labeled set, draw candidate_size unqueried
// points at random, and query the one with the smallest committee margin,
// until the budget is spent.
QbbResult run_qbb(const Ensemble& e, std::span<const Example> pool, const LabelOracle& oracle,
                  std::span<const Example> test, const QbbConfig& cfg, const LossSpec& loss);

}  // namespace smdagg
