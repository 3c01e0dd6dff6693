#include "smdagg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "smdagg/rng.hpp"

namespace smdagg {

namespace {

constexpr double kPerfectStumpDelta = 1e-6;

// Row-major stump predictions: pred[j * points + i] = b_j(x_i).
struct PredictionMatrix {
    std::vector<std::int8_t> data;
    std::size_t models = 0;
    std::size_t points = 0;

    std::int8_t at(std::size_t j, std::size_t i) const { return data[j * points + i]; }
};

PredictionMatrix predict_all(const Ensemble& e, std::span<const Example> points) {
    PredictionMatrix m;
    m.models = e.size();
    m.points = points.size();
    m.data.resize(m.models * m.points);
    for (std::size_t i = 0; i < points.size(); ++i) {
        PredictionVector b = predict_vector(e, points[i].x);
        for (std::size_t j = 0; j < b.size(); ++j) m.data[j * m.points + i] = b[j];
    }
    return m;
}

// Labeled subset in query order, laid out for sequential scans during
// boosting: pred[j * capacity + k] is model j on the k-th labeled point.
// qbb refits after every query, so this layout is the hot path.
struct LabeledMatrix {
    std::vector<std::int8_t> pred;
    std::vector<std::int8_t> labels;
    std::size_t models = 0;
    std::size_t capacity = 0;
    std::size_t count = 0;

    LabeledMatrix(std::size_t m, std::size_t cap)
        : pred(m * cap), labels(cap), models(m), capacity(cap) {}

    void append(const PredictionMatrix& source, std::size_t point, int label) {
        for (std::size_t j = 0; j < models; ++j)
            pred[j * capacity + count] = source.at(j, point);
        labels[count] = static_cast<std::int8_t>(label);
        ++count;
    }

    const std::int8_t* row(std::size_t j) const { return pred.data() + j * capacity; }
};

BoostedModel fit_boosted(const LabeledMatrix& data, std::size_t rounds) {
    const std::size_t n = data.count;
    if (n == 0) throw std::invalid_argument("adaboost_fit: empty training set");
    if (rounds < 1) throw std::invalid_argument("adaboost_fit: rounds must be >= 1");

    // signed weights w_k * y_k; with +-1 predictions the weighted error of
    // stump j is 0.5 * (1 - <row_j, wy>)
    std::vector<double> wy(n);
    for (std::size_t k = 0; k < n; ++k)
        wy[k] = static_cast<double>(data.labels[k]) / static_cast<double>(n);

    BoostedModel model;
    for (std::size_t r = 0; r < rounds; ++r) {
        std::size_t best_j = 0;
        double best_dot = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < data.models; ++j) {
            const std::int8_t* row = data.row(j);
            double dot = 0.0;
            for (std::size_t k = 0; k < n; ++k) dot += wy[k] * static_cast<double>(row[k]);
            if (dot > best_dot) {
                best_dot = dot;
                best_j = j;
            }
        }
        const double best_err = 0.5 * (1.0 - best_dot);

        if (best_err >= 0.5) break;  // no weak learner left

        if (best_err <= 0.0) {
            double alpha = 0.5 * std::log((1.0 - kPerfectStumpDelta) / kPerfectStumpDelta);
            model.weights.emplace_back(best_j, alpha);
            model.rounds = r + 1;
            break;  // perfect stump; nothing left to reweight
        }

        const double alpha = 0.5 * std::log((1.0 - best_err) / best_err);
        model.weights.emplace_back(best_j, alpha);
        model.rounds = r + 1;

        const std::int8_t* row = data.row(best_j);
        double wsum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            // wy carries the label's sign, so the multiplicative update is
            // the same expression for both label values
            wy[k] *= std::exp(-alpha * static_cast<double>(row[k]) *
                              static_cast<double>(data.labels[k]));
            wsum += std::abs(wy[k]);
        }
        for (double& v : wy) v /= wsum;
    }
    return model;
}

double score_from_matrix(const BoostedModel& m, const PredictionMatrix& pred, std::size_t i) {
    double s = 0.0;
    for (const auto& [j, alpha] : m.weights) s += alpha * static_cast<int>(pred.at(j, i));
    return s;
}

double alpha_sum(const BoostedModel& m) {
    double s = 0.0;
    for (const auto& [j, alpha] : m.weights) s += alpha;
    return s;
}

QbbRecord eval_on_matrix(const BoostedModel& m, const PredictionMatrix& pred,
                         std::span<const Example> test, const LossSpec& loss,
                         std::size_t queries) {
    const double norm = alpha_sum(m);
    std::size_t errors = 0;
    double loss_sum = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const double s = score_from_matrix(m, pred, i);
        const int y = *test[i].y;
        if ((s >= 0.0 ? +1 : -1) != y) ++errors;
        // Normalizing by sum(alpha) puts the vote back in [-1,1], making the
        // margin loss comparable with the convex-aggregation runs.
        const double z = norm > 0.0 ? s / norm : 0.0;
        loss_sum += loss.value(static_cast<double>(y) * z);
    }
    const double n = static_cast<double>(test.size());
    return {queries, static_cast<double>(errors) / n, loss_sum / n};
}

}  // namespace

BoostedModel adaboost_fit(const Ensemble& e, std::span<const Example> labeled,
                          std::size_t rounds) {
    if (labeled.empty()) throw std::invalid_argument("adaboost_fit: empty training set");
    PredictionMatrix pred = predict_all(e, labeled);
    LabeledMatrix data(e.size(), labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        if (!labeled[i].y.has_value())
            throw std::invalid_argument("adaboost_fit: unlabeled example");
        data.append(pred, i, *labeled[i].y);
    }
    return fit_boosted(data, rounds);
}

double boosted_score(const BoostedModel& m, const Ensemble& e, std::span<const double> x) {
    double s = 0.0;
    for (const auto& [j, alpha] : m.weights) {
        if (j >= e.size()) throw std::invalid_argument("boosted_score: model index out of range");
        s += alpha * static_cast<double>(stump_predict(e.models[j], x));
    }
    return s;
}

double boosted_margin(const BoostedModel& m, const Ensemble& e, std::span<const double> x) {
    return std::abs(boosted_score(m, e, x));
}

QbbResult run_qbb(const Ensemble& e, std::span<const Example> pool, const LabelOracle& oracle,
                  std::span<const Example> test, const QbbConfig& cfg, const LossSpec& loss) {
    if (cfg.budget < 1) throw std::invalid_argument("run_qbb: budget must be >= 1");
    if (cfg.candidate_size < 1)
        throw std::invalid_argument("run_qbb: candidate size must be >= 1");
    if (pool.size() < cfg.budget)
        throw std::invalid_argument("run_qbb: budget " + std::to_string(cfg.budget) +
                                    " exceeds pool size " + std::to_string(pool.size()));
    if (test.empty()) throw std::invalid_argument("run_qbb: empty test set");
    for (const Example& ex : test)
        if (!ex.y.has_value()) throw std::invalid_argument("run_qbb: unlabeled test example");

    const PredictionMatrix pool_pred = predict_all(e, pool);
    const PredictionMatrix test_pred = predict_all(e, test);
    CounterRng rng(cfg.seed);

    LabeledMatrix labeled(e.size(), cfg.budget);
    std::vector<std::size_t> queried;
    std::vector<bool> is_queried(pool.size(), false);
    auto query = [&](std::size_t idx) {
        labeled.append(pool_pred, idx, oracle(idx, pool[idx]));
        is_queried[idx] = true;
        queried.push_back(idx);
    };

    const std::size_t seed_count = std::min(cfg.seed_set_size, cfg.budget);
    for (std::size_t idx : sample_without_replacement(pool.size(), seed_count, rng)) query(idx);

    QbbResult result;
    BoostedModel model = fit_boosted(labeled, cfg.boost_rounds);
    result.history.push_back(eval_on_matrix(model, test_pred, test, loss, queried.size()));

    std::vector<std::size_t> unqueried;
    while (queried.size() < cfg.budget) {
        unqueried.clear();
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (!is_queried[i]) unqueried.push_back(i);
        if (unqueried.empty()) break;

        const std::size_t take = std::min(cfg.candidate_size, unqueried.size());
        std::size_t best_idx = unqueried[0];
        double best_margin = std::numeric_limits<double>::infinity();
        for (std::size_t pick : sample_without_replacement(unqueried.size(), take, rng)) {
            const std::size_t idx = unqueried[pick];
            const double margin = std::abs(score_from_matrix(model, pool_pred, idx));
            if (margin < best_margin || (margin == best_margin && idx < best_idx)) {
                best_margin = margin;
                best_idx = idx;
            }
        }
        query(best_idx);
        model = fit_boosted(labeled, cfg.boost_rounds);
        result.history.push_back(eval_on_matrix(model, test_pred, test, loss, queried.size()));
    }

    result.final_error = result.history.back().test_error;
    result.queried_indices = std::move(queried);
    return result;
}

}  // namespace smdagg
