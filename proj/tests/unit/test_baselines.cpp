#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "common/synthetic.hpp"
#include "smdagg/baselines.hpp"
#include "smdagg/rng.hpp"

using namespace smdagg;

namespace {

// Straight-line reference AdaBoost, kept independent of the library path.
// Returns the per-round weighted errors alongside the model.
struct ReferenceBoost {
    std::vector<std::pair<std::size_t, double>> weights;
    std::vector<double> round_errors;
};

ReferenceBoost reference_adaboost(const Ensemble& e, const std::vector<Example>& data,
                                  std::size_t rounds) {
    const std::size_t n = data.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    ReferenceBoost out;
    for (std::size_t r = 0; r < rounds; ++r) {
        std::size_t best_j = 0;
        double best_err = 1e30;
        for (std::size_t j = 0; j < e.size(); ++j) {
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (stump_predict(e.models[j], data[i].x) != *data[i].y) err += w[i];
            if (err < best_err) {
                best_err = err;
                best_j = j;
            }
        }
        if (best_err >= 0.5) break;
        out.round_errors.push_back(best_err);
        if (best_err <= 0.0) {
            out.weights.emplace_back(best_j, 0.5 * std::log((1.0 - 1e-6) / 1e-6));
            break;
        }
        double alpha = 0.5 * std::log((1.0 - best_err) / best_err);
        out.weights.emplace_back(best_j, alpha);
        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] *= std::exp(-alpha * (*data[i].y) *
                             stump_predict(e.models[best_j], data[i].x));
            wsum += w[i];
        }
        for (double& v : w) v /= wsum;
    }
    return out;
}

double training_error(const BoostedModel& m, const Ensemble& e,
                      const std::vector<Example>& data) {
    std::size_t errors = 0;
    for (const Example& ex : data) {
        double s = boosted_score(m, e, ex.x);
        if ((s >= 0.0 ? +1 : -1) != *ex.y) ++errors;
    }
    return static_cast<double>(errors) / static_cast<double>(data.size());
}

std::vector<Example> quartet(std::vector<int> labels) {
    std::vector<Example> data;
    double xs[] = {1.0, 2.0, 3.0, 4.0};
    for (int i = 0; i < 4; ++i) data.push_back({{xs[i]}, labels[i]});
    return data;
}

}  // namespace

TEST_CASE("one boosting round at weighted error 1/4") {
    // thresholds at 1.75, 2.5, 3.25; alternating labels force the best
    // stump (threshold 1.75) to err on exactly one of the four points
    std::vector<Example> data = quartet({-1, +1, -1, +1});
    Ensemble e = build_stump_grid(data, 3);
    BoostedModel m = adaboost_fit(e, data, 1);
    REQUIRE(m.weights.size() == 1);
    CHECK(m.weights[0].second == doctest::Approx(0.5493061443340549).epsilon(1e-12));
    CHECK(e.models[m.weights[0].first].threshold == doctest::Approx(1.75));
}

TEST_CASE("a separating stump finishes in one round") {
    std::vector<Example> data = quartet({-1, -1, +1, +1});
    Ensemble e = build_stump_grid(data, 3);
    BoostedModel m = adaboost_fit(e, data, 10);
    CHECK(m.rounds == 1);
    CHECK(training_error(m, e, data) == 0.0);
    // perfect stump gets the capped weight
    CHECK(m.weights[0].second == doctest::Approx(0.5 * std::log((1.0 - 1e-6) / 1e-6)));
}

TEST_CASE("constant labels are fitted by one capped stump") {
    std::vector<Example> grid_data = quartet({-1, -1, +1, +1});
    Ensemble e = build_stump_grid(grid_data, 3);
    // both points sit above every threshold, so a +1 stump is perfect
    std::vector<Example> data = {{{5.0}, +1}, {{6.0}, +1}};
    BoostedModel m = adaboost_fit(e, data, 10);
    REQUIRE(m.weights.size() == 1);
    CHECK(m.rounds == 1);
    CHECK(m.weights[0].second == doctest::Approx(0.5 * std::log((1.0 - 1e-6) / 1e-6)));
    CHECK(training_error(m, e, data) == 0.0);
}

TEST_CASE("adaboost input errors") {
    std::vector<Example> data = quartet({-1, -1, +1, +1});
    Ensemble e = build_stump_grid(data, 3);
    CHECK_THROWS_AS(adaboost_fit(e, std::vector<Example>{}, 5), std::invalid_argument);
    CHECK_THROWS_AS(adaboost_fit(e, data, 0), std::invalid_argument);
}

TEST_CASE("adaboost agrees with the reference implementation") {
    auto data = testsupport::stump_rule_stream(120, 2, 0.2, 301);
    Ensemble e = build_stump_grid(data, 4);
    for (std::size_t rounds : {1u, 5u, 20u}) {
        BoostedModel m = adaboost_fit(e, data, rounds);
        ReferenceBoost ref = reference_adaboost(e, data, rounds);
        REQUIRE(m.weights.size() == ref.weights.size());
        for (std::size_t k = 0; k < m.weights.size(); ++k) {
            CHECK(m.weights[k].first == ref.weights[k].first);
            CHECK(m.weights[k].second == doctest::Approx(ref.weights[k].second).epsilon(1e-10));
            CHECK(m.weights[k].second > 0.0);
        }
    }
}

TEST_CASE("training error obeys the per-round product bound") {
    auto data = testsupport::stump_rule_stream(150, 2, 0.25, 311);
    Ensemble e = build_stump_grid(data, 4);
    double product = 1.0;
    for (std::size_t rounds = 1; rounds <= 12; ++rounds) {
        BoostedModel m = adaboost_fit(e, data, rounds);
        ReferenceBoost ref = reference_adaboost(e, data, rounds);
        if (ref.round_errors.size() < rounds) break;  // boosting stopped early
        double eps = ref.round_errors[rounds - 1];
        product *= 2.0 * std::sqrt(eps * (1.0 - eps));
        CHECK(training_error(m, e, data) <= product + 1e-9);
    }
}

TEST_CASE("boosted margin") {
    std::vector<Example> data = quartet({-1, -1, +1, +1});
    Ensemble e = build_stump_grid(data, 3);

    BoostedModel single{{{0, 1.0}}, 1};
    CHECK(boosted_margin(single, e, std::vector<double>{9.0}) == 1.0);
    CHECK(boosted_margin(single, e, std::vector<double>{-9.0}) == 1.0);

    // stump 0 and its negation cancel at equal weight
    std::size_t neg = 0;
    for (std::size_t j = 1; j < e.size(); ++j)
        if (e.models[j].threshold == e.models[0].threshold && e.models[j].polarity == -1 &&
            e.models[j].dim == e.models[0].dim)
            neg = j;
    REQUIRE(neg != 0);
    BoostedModel canceling{{{0, 1.0}, {neg, 1.0}}, 2};
    CHECK(boosted_margin(canceling, e, std::vector<double>{2.0}) == 0.0);

    BoostedModel weighted{{{0, 0.5493061443340549}}, 1};
    CHECK(boosted_margin(weighted, e, std::vector<double>{1.0}) ==
          doctest::Approx(0.5493061443340549));
}

TEST_CASE("qbb with an exhaustive budget reduces to adaboost on the pool") {
    auto pool = testsupport::stump_rule_stream(60, 1, 0.1, 321);
    auto test = testsupport::stump_rule_stream(200, 1, 0.1, 322);
    Ensemble e = build_stump_grid(pool, 4);
    LossSpec loss = make_loss(LossKind::squared);

    QbbConfig cfg;
    cfg.budget = pool.size();
    cfg.candidate_size = pool.size();
    cfg.boost_rounds = 15;
    cfg.seed = 5;
    QbbResult res = run_qbb(e, pool, dataset_oracle(), test, cfg, loss);

    CHECK(res.queried_indices.size() == pool.size());
    std::set<std::size_t> unique(res.queried_indices.begin(), res.queried_indices.end());
    CHECK(unique.size() == res.queried_indices.size());

    BoostedModel full = adaboost_fit(e, pool, 15);
    std::size_t errors = 0;
    for (const Example& ex : test)
        if ((boosted_score(full, e, ex.x) >= 0.0 ? +1 : -1) != *ex.y) ++errors;
    CHECK(res.final_error == doctest::Approx(static_cast<double>(errors) / test.size()));
}

TEST_CASE("qbb respects the budget and never requeries") {
    auto pool = testsupport::stump_rule_stream(80, 2, 0.15, 331);
    auto test = testsupport::stump_rule_stream(100, 2, 0.15, 332);
    Ensemble e = build_stump_grid(pool, 3);
    LossSpec loss = make_loss(LossKind::squared);

    QbbConfig cfg;
    cfg.budget = 25;
    cfg.candidate_size = 10;
    cfg.boost_rounds = 10;
    cfg.seed = 6;
    QbbResult res = run_qbb(e, pool, dataset_oracle(), test, cfg, loss);

    CHECK(res.queried_indices.size() == 25);
    std::set<std::size_t> unique(res.queried_indices.begin(), res.queried_indices.end());
    CHECK(unique.size() == 25);
    CHECK(res.history.front().queries == 10);  // seed set
    CHECK(res.history.back().queries == 25);

    QbbResult again = run_qbb(e, pool, dataset_oracle(), test, cfg, loss);
    CHECK(again.queried_indices == res.queried_indices);
    CHECK(again.final_error == res.final_error);

    QbbConfig r1 = cfg;
    r1.candidate_size = 1;  // degenerate candidate set: uniform sampling
    QbbResult uniform = run_qbb(e, pool, dataset_oracle(), test, r1, loss);
    CHECK(uniform.queried_indices.size() == 25);

    QbbConfig too_big = cfg;
    too_big.budget = pool.size() + 1;
    CHECK_THROWS_AS(run_qbb(e, pool, dataset_oracle(), test, too_big, loss),
                    std::invalid_argument);
}
