#pragma once

#include <string_view>

namespace smdagg {

enum class LossKind { squared };

// Margin-based convex loss together with the pieces the aggregation driver
// needs: the subderivative, a Lipschitz bound over feasible margins, and
// the link that turns an aggregate score into a probability estimate.
//
// Aggregate scores live in [-1, 1], so margins y * score do too; the
// Lipschitz bound is taken over that range.
struct LossSpec {
    LossKind kind = LossKind::squared;

    double value(double margin) const;
    double derivative(double margin) const;

    // sup of |derivative| over margins in [-1, 1].
    double lipschitz_bound() const;

    // Estimate of P[y = +1] given an aggregate score z in [-1, 1].
    // Clamped to [0, 1] for any real input.
    double prob_from_score(double z) const;
};

LossSpec make_loss(LossKind kind);

// Accepts the CLI spelling ("squared"); throws on unknown names.
LossSpec loss_from_name(std::string_view name);

}  // namespace smdagg
