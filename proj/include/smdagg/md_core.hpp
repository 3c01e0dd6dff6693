#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace smdagg {

// Entropy-regularized dual-averaging state on the probability simplex.
// xi accumulates subgradients; theta is the current primal iterate
// softmax(-xi / beta_t) with beta_t growing per beta_schedule. Two running
// sums support both averaging conventions (post-update iterates theta_1..t
// and pre-update iterates theta_0..t-1).
struct AggregatorState {
    std::vector<double> xi;
    std::vector<double> theta;
    std::vector<double> theta_sum;       // theta_1 + ... + theta_t
    std::vector<double> theta_prev_sum;  // theta_0 + ... + theta_{t-1}
    std::int64_t t = 0;
    double beta0 = 1.0;
    double mu = 0.0;

    std::size_t size() const { return xi.size(); }
};

// Uniform theta, zero duals, round counter 0.
AggregatorState init_state(std::size_t M, double beta0, double mu);

// beta0 * (t+1)^((1+mu)/2); strictly increasing in t.
double beta_schedule(double beta0, double mu, std::int64_t t);

// Fenchel dual of the normalized entropy at temperature beta:
//   beta * log((1/M) * sum_j exp(-xi_j / beta)).
// Nonincreasing in beta; computed with a max shift.
double dual_value(std::span<const double> xi, double beta);

// Negative gradient of dual_value: theta_j proportional to exp(-xi_j / beta),
// normalized onto the simplex. Max-shifted, so entries of magnitude 1e4+
// stay finite.
std::vector<double> primal_map(std::span<const double> xi, double beta);

// One round: xi += g, t += 1, theta recomputed at the new temperature,
// both running sums advanced. Applied every round; g is the zero vector
// on rounds without a label, and theta still moves because beta grew.
void accumulate(AggregatorState& state, std::span<const double> g);

// Average of the iterates seen so far. pre_update_shift selects the
// theta_0..theta_{t-1} convention instead of theta_1..theta_t.
std::vector<double> averaged_iterate(const AggregatorState& state,
                                     bool pre_update_shift = false);

}  // namespace smdagg
