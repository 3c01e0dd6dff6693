#include "smdagg/md_core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace smdagg {

AggregatorState init_state(std::size_t M, double beta0, double mu) {
    if (M < 1) throw std::invalid_argument("init_state: M must be >= 1");
    if (!(beta0 > 0.0)) throw std::invalid_argument("init_state: beta0 must be > 0");
    if (!(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("init_state: mu must be in [0,1)");

    AggregatorState s;
    s.xi.assign(M, 0.0);
    s.theta.assign(M, 1.0 / static_cast<double>(M));
    s.theta_sum.assign(M, 0.0);
    s.theta_prev_sum.assign(M, 0.0);
    s.t = 0;
    s.beta0 = beta0;
    s.mu = mu;
    return s;
}

double beta_schedule(double beta0, double mu, std::int64_t t) {
    return beta0 * std::pow(static_cast<double>(t + 1), 0.5 * (1.0 + mu));
}

// Both functions shift by min(xi) before dividing by beta: exponents stay
// <= 0 for stability, and adding a constant to every xi cancels exactly.
double dual_value(std::span<const double> xi, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("dual_value: beta must be > 0");
    const std::size_t m = xi.size();
    double xmin = std::numeric_limits<double>::infinity();
    for (double v : xi) xmin = std::min(xmin, v);
    double acc = 0.0;
    for (double v : xi) acc += std::exp(-(v - xmin) / beta);
    return -xmin + beta * (std::log(acc) - std::log(static_cast<double>(m)));
}

std::vector<double> primal_map(std::span<const double> xi, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("primal_map: beta must be > 0");
    const std::size_t m = xi.size();
    std::vector<double> theta(m);
    double xmin = std::numeric_limits<double>::infinity();
    for (double v : xi) xmin = std::min(xmin, v);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        theta[j] = std::exp(-(xi[j] - xmin) / beta);
        acc += theta[j];
    }
    for (std::size_t j = 0; j < m; ++j) theta[j] /= acc;
    return theta;
}

void accumulate(AggregatorState& state, std::span<const double> g) {
    const std::size_t m = state.size();
    if (g.size() != m)
        throw std::invalid_argument("accumulate: gradient length " + std::to_string(g.size()) +
                                    " != state size " + std::to_string(m));
    for (std::size_t j = 0; j < m; ++j) state.theta_prev_sum[j] += state.theta[j];
    for (std::size_t j = 0; j < m; ++j) state.xi[j] += g[j];
    state.t += 1;
    state.theta = primal_map(state.xi, beta_schedule(state.beta0, state.mu, state.t));
    for (std::size_t j = 0; j < m; ++j) state.theta_sum[j] += state.theta[j];
}

std::vector<double> averaged_iterate(const AggregatorState& state, bool pre_update_shift) {
    if (state.t < 1)
        throw std::logic_error("averaged_iterate: no rounds accumulated yet");
    const std::vector<double>& sum = pre_update_shift ? state.theta_prev_sum : state.theta_sum;
    std::vector<double> avg(state.size());
    double total = 0.0;
    for (std::size_t j = 0; j < avg.size(); ++j) {
        avg[j] = sum[j] / static_cast<double>(state.t);
        total += avg[j];
    }
    // Averages of softmax outputs sit on the simplex up to rounding;
    // renormalize once so downstream simplex checks hold.
    for (double& v : avg) v /= total;
    return avg;
}

}  // namespace smdagg
