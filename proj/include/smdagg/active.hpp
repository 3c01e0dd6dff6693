#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "smdagg/ensemble.hpp"
#include "smdagg/loss.hpp"
#include "smdagg/types.hpp"

namespace smdagg {

struct QueryPolicyParams {
    double mu = 0.3;
    std::uint64_t seed = 0;
};

// Everything observable about one stream round. label is present iff the
// round was queried; margin is label * score then, 0 otherwise.
struct RoundTrace {
    std::int64_t t = 0;
    double epsilon = 0.0;
    double p_plus = 0.0;
    double p_query = 0.0;
    bool queried = false;
    std::optional<int> label;
    double margin = 0.0;
};

// Answers a label in {-1,+1} for the stream element at the given index.
using LabelOracle = std::function<int(std::size_t index, const Example& ex)>;

class OracleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Thrown when the oracle fails mid-run; carries the rounds completed so far.
class RunAborted : public std::runtime_error {
  public:
    RunAborted(const std::string& what, std::vector<RoundTrace> partial)
        : std::runtime_error(what), traces(std::move(partial)) {}
    std::vector<RoundTrace> traces;
};

struct RunResult {
    std::vector<double> theta_hat;
    std::vector<RoundTrace> traces;
};

// Optional knobs shared by both drivers.
struct RunOptions {
    std::optional<double> beta0;      // empty = compute_beta0 for this loss/M/mu
    bool avg_shift = false;           // average theta_0..theta_{T-1} instead
    std::vector<std::int64_t> eval_rounds;  // sorted; on_eval fires at each
    std::function<void(std::int64_t t, std::span<const double> theta_hat)> on_eval;
};

// Exploration floor t^(-mu); requires t >= 1.
double epsilon_schedule(double mu, std::int64_t t);

// 4 p(1-p) (1-eps) + eps, always in [eps, 1]: peaked where the current
// aggregate is most uncertain, floored at the exploration rate.
double query_probability(double p_plus, double epsilon);

// Importance-weighted stochastic subgradient: zero when not queried,
// otherwise (1/p) L'(y <theta,b>) y b. Entrywise magnitude <= L_phi / p.
std::vector<double> iw_gradient(const LossSpec& loss, std::span<const double> theta_prev,
                                const PredictionVector& b, std::optional<int> y,
                                bool queried, double p_query);

// Temperature constant sqrt(L_phi^2 / (2 log(M) sqrt(2^(mu+1)) (1+mu))),
// the setting under which the excess-risk guarantee holds.
double compute_beta0(const LossSpec& loss, std::size_t M, double mu);

// Streaming active run: per round score the point with the previous
// iterate, turn the score into a label probability, decide the query by a
// Bernoulli draw, fetch the label through the oracle when queried, and feed
// the importance-weighted subgradient to the aggregator (every round, so
// the temperature keeps advancing on unqueried rounds too).
RunResult run_smd_ama(const Ensemble& e, const LossSpec& loss,
                      std::span<const Example> stream, const LabelOracle& oracle,
                      const QueryPolicyParams& params, const RunOptions& opts = {});

// Passive counterpart: every round queried with probability 1 and weight 1.
// Identical to run_smd_ama with mu = 0 under a shared seed. Requires every
// stream element to carry a label.
RunResult run_smd_pma(const Ensemble& e, const LossSpec& loss,
                      std::span<const Example> stream, std::uint64_t seed = 0,
                      const RunOptions& opts = {});

struct Evaluation {
    double error_rate = 0.0;
    double mean_loss = 0.0;
};

// Test error (sign of the aggregate score, sign(0) counts as +1) and mean
// margin loss over a labeled set.
Evaluation evaluate(const Ensemble& e, std::span<const double> theta,
                    const LossSpec& loss, std::span<const Example> test);

// Oracle backed by the stored labels of the stream itself.
LabelOracle dataset_oracle();

}  // namespace smdagg
