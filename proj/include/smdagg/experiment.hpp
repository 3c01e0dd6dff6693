#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smdagg/baselines.hpp"
#include "smdagg/dataset.hpp"
#include "smdagg/loss.hpp"

namespace smdagg {

enum class Algo { smd_ama, smd_pma, qbb };

Algo algo_from_name(const std::string& name);  // "smd-ama" | "smd-pma" | "qbb"
std::string algo_name(Algo algo);

struct ExperimentConfig {
    Algo algo = Algo::smd_ama;
    double mu = 0.3;
    std::optional<double> beta0;      // empty = compute_beta0 for this loss/M/mu
    std::size_t stumps_per_dim = 80;
    LossKind loss = LossKind::squared;
    std::size_t replicates = 10;
    std::uint64_t seed_base = 42;
    double split_fraction = 0.7;
    std::int64_t eval_every = 0;      // 0 = auto: max(1, stream length / 200)
    bool avg_shift = false;
    bool prompt_oracle = false;       // ask a human for labels instead of the dataset

    // qbb only; budget 0 = auto (10% of the pool, at least 10)
    std::size_t qbb_budget = 0;
    std::size_t qbb_candidate_size = 100;
    std::size_t qbb_boost_rounds = 50;
};

// One evaluation point of one replicate. For the streaming algorithms t is
// the round index and p_mean the running mean of the query probability;
// for qbb t counts labels and p_mean is not meaningful (kept at 0).
struct ReplicateMetrics {
    std::size_t replicate = 0;
    std::int64_t t = 0;
    double queries = 0.0;
    double err = 0.0;
    double loss = 0.0;
    double p_mean = 0.0;
    bool final_row = false;
};

struct MetricsRecord {
    std::int64_t t = 0;
    double err_mean = 0.0, err_std = 0.0;
    double loss_mean = 0.0, loss_std = 0.0;
    double queries_mean = 0.0;
    double query_frac = 0.0;  // queries_mean / stream length
    bool final_row = false;
};

struct ExperimentResult {
    std::string algo;
    std::string dataset;
    std::size_t stream_length = 0;
    std::vector<ReplicateMetrics> per_replicate;
    std::vector<MetricsRecord> aggregated;
    std::vector<double> final_errors;   // one per replicate
    std::vector<double> final_losses;
    std::vector<double> final_queries;
};

// Per replicate: split, build the stump grid on the train side only, run
// the configured algorithm, and evaluate the current averaged iterate (or
// boosted committee) on the test side every eval_every rounds and at the
// end. Aggregates mean/std across replicates per evaluation point.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const Dataset& ds);

struct MuSweepRow {
    double mu = 0.0;
    double err_mean = 0.0, err_std = 0.0;
    double queries_mean = 0.0, queries_std = 0.0;
};

// One smd-ama experiment per mu under shared base seeds; reports the
// final-round trade-off.
std::vector<MuSweepRow> sweep_mu(const ExperimentConfig& cfg, const Dataset& ds,
                                 const std::vector<double>& mus);

struct QbbComparison {
    std::string dataset;
    std::size_t budget = 0;
    double ama_error_mean = 0.0, ama_error_std = 0.0;
    double qbb_error_mean = 0.0, qbb_error_std = 0.0;
    ExperimentResult ama;
    ExperimentResult qbb;
};

// Runs smd-ama, takes its mean realized query count as the qbb budget, and
// runs qbb on the pooled train split with that budget.
QbbComparison match_budget_qbb(const ExperimentConfig& cfg, const Dataset& ds);

// Serialization (deterministic: same result, same bytes).
std::vector<std::string> to_jsonl(const ExperimentResult& result);
std::string to_csv(const ExperimentResult& result);
std::string sweep_to_csv(const std::vector<MuSweepRow>& rows);
std::string comparison_to_csv(const QbbComparison& cmp);

}  // namespace smdagg
