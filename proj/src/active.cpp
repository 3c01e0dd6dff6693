#include "smdagg/active.hpp"

#include <cmath>
#include <string>

#include "smdagg/md_core.hpp"
#include "smdagg/rng.hpp"

namespace smdagg {

double epsilon_schedule(double mu, std::int64_t t) {
    if (t < 1) throw std::invalid_argument("epsilon_schedule: t must be >= 1");
    return std::pow(static_cast<double>(t), -mu);
}

double query_probability(double p_plus, double epsilon) {
    return 4.0 * p_plus * (1.0 - p_plus) * (1.0 - epsilon) + epsilon;
}

std::vector<double> iw_gradient(const LossSpec& loss, std::span<const double> theta_prev,
                                const PredictionVector& b, std::optional<int> y,
                                bool queried, double p_query) {
    if (theta_prev.size() != b.size())
        throw std::invalid_argument("iw_gradient: theta/prediction length mismatch");
    if (!queried) return std::vector<double>(b.size(), 0.0);
    if (!y.has_value())
        throw std::logic_error("iw_gradient: queried round without a label");
    if (!(p_query > 0.0))
        throw std::invalid_argument("iw_gradient: query probability must be > 0");

    const double yv = static_cast<double>(*y);
    const double margin = yv * dot_score(theta_prev, b);
    const double scale = loss.derivative(margin) * yv / p_query;
    std::vector<double> g(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) g[j] = scale * static_cast<double>(b[j]);
    return g;
}

double compute_beta0(const LossSpec& loss, std::size_t M, double mu) {
    if (M < 2) throw std::invalid_argument("compute_beta0: M must be >= 2");
    if (!(mu >= 0.0 && mu < 1.0))
        throw std::invalid_argument("compute_beta0: mu must be in [0,1)");
    const double lphi = loss.lipschitz_bound();
    const double denom =
        2.0 * std::log(static_cast<double>(M)) * std::sqrt(std::pow(2.0, mu + 1.0)) * (1.0 + mu);
    return std::sqrt(lphi * lphi / denom);
}

namespace {

int checked_label(const LabelOracle& oracle, std::size_t index, const Example& ex) {
    int y = oracle(index, ex);
    if (y != -1 && y != +1)
        throw OracleError("oracle returned label " + std::to_string(y) +
                          " (expected -1 or +1) at stream index " + std::to_string(index));
    return y;
}

RunResult drive(const Ensemble& e, const LossSpec& loss, std::span<const Example> stream,
                const LabelOracle& oracle, double mu, std::uint64_t seed,
                const RunOptions& opts) {
    if (stream.empty()) throw std::invalid_argument("run: empty stream");

    const std::size_t M = e.size();
    const double beta0 = opts.beta0 ? *opts.beta0 : compute_beta0(loss, M, mu);
    AggregatorState state = init_state(M, beta0, mu);
    CounterRng rng(seed);

    std::vector<RoundTrace> traces;
    traces.reserve(stream.size());
    std::size_t next_eval = 0;

    for (std::size_t i = 0; i < stream.size(); ++i) {
        const std::int64_t t = static_cast<std::int64_t>(i) + 1;
        const Example& ex = stream[i];

        PredictionVector b = predict_vector(e, ex.x);
        const double z = dot_score(state.theta, b);
        const double p_plus = loss.prob_from_score(z);
        const double eps = epsilon_schedule(mu, t);
        const double p = query_probability(p_plus, eps);
        const bool queried = rng.bernoulli(p);

        std::optional<int> y;
        if (queried) {
            try {
                y = checked_label(oracle, i, ex);
            } catch (const std::exception& err) {
                throw RunAborted("oracle failed at round " + std::to_string(t) + ": " +
                                     err.what(),
                                 std::move(traces));
            }
        }

        std::vector<double> g = iw_gradient(loss, state.theta, b, y, queried, p);
        accumulate(state, g);

        traces.push_back({t, eps, p_plus, p, queried, y,
                          queried ? static_cast<double>(*y) * z : 0.0});

        if (opts.on_eval && next_eval < opts.eval_rounds.size() &&
            opts.eval_rounds[next_eval] == t) {
            std::vector<double> avg = averaged_iterate(state, opts.avg_shift);
            opts.on_eval(t, avg);
            ++next_eval;
        }
    }

    return RunResult{averaged_iterate(state, opts.avg_shift), std::move(traces)};
}

}  // namespace

RunResult run_smd_ama(const Ensemble& e, const LossSpec& loss,
                      std::span<const Example> stream, const LabelOracle& oracle,
                      const QueryPolicyParams& params, const RunOptions& opts) {
    if (!(params.mu >= 0.0 && params.mu < 1.0))
        throw std::invalid_argument("run_smd_ama: mu must be in [0,1)");
    return drive(e, loss, stream, oracle, params.mu, params.seed, opts);
}

RunResult run_smd_pma(const Ensemble& e, const LossSpec& loss,
                      std::span<const Example> stream, std::uint64_t seed,
                      const RunOptions& opts) {
    for (std::size_t i = 0; i < stream.size(); ++i)
        if (!stream[i].y.has_value())
            throw std::invalid_argument("run_smd_pma: stream element " + std::to_string(i) +
                                        " has no label");
    // mu = 0 forces eps = 1, hence p = 1 and weight 1 on every round.
    return drive(e, loss, stream, dataset_oracle(), 0.0, seed, opts);
}

Evaluation evaluate(const Ensemble& e, std::span<const double> theta, const LossSpec& loss,
                    std::span<const Example> test) {
    if (test.empty()) throw std::invalid_argument("evaluate: empty test set");
    std::size_t errors = 0;
    double loss_sum = 0.0;
    for (const Example& ex : test) {
        if (!ex.y.has_value()) throw std::invalid_argument("evaluate: unlabeled test example");
        const double z = dot_score(theta, predict_vector(e, ex.x));
        const int pred = z >= 0.0 ? +1 : -1;
        if (pred != *ex.y) ++errors;
        loss_sum += loss.value(static_cast<double>(*ex.y) * z);
    }
    const double n = static_cast<double>(test.size());
    return {static_cast<double>(errors) / n, loss_sum / n};
}

LabelOracle dataset_oracle() {
    return [](std::size_t index, const Example& ex) -> int {
        if (!ex.y.has_value())
            throw OracleError("dataset oracle: no stored label at stream index " +
                              std::to_string(index));
        return *ex.y;
    };
}

}  // namespace smdagg
