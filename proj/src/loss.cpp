#include "smdagg/loss.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace smdagg {

double LossSpec::value(double margin) const {
    switch (kind) {
        case LossKind::squared: {
            double r = 1.0 - margin;
            return r * r;
        }
    }
    throw std::logic_error("LossSpec: unknown kind");
}

double LossSpec::derivative(double margin) const {
    switch (kind) {
        case LossKind::squared:
            return -2.0 * (1.0 - margin);
    }
    throw std::logic_error("LossSpec: unknown kind");
}

double LossSpec::lipschitz_bound() const {
    switch (kind) {
        case LossKind::squared:
            // |L'(m)| = 2(1 - m) on [-1, 1], maximal at m = -1.
            return 4.0;
    }
    throw std::logic_error("LossSpec: unknown kind");
}

double LossSpec::prob_from_score(double z) const {
    switch (kind) {
        case LossKind::squared:
            return std::clamp(0.5 * (1.0 + z), 0.0, 1.0);
    }
    throw std::logic_error("LossSpec: unknown kind");
}

LossSpec make_loss(LossKind kind) { return LossSpec{kind}; }

LossSpec loss_from_name(std::string_view name) {
    if (name == "squared") return make_loss(LossKind::squared);
    throw std::invalid_argument("unknown loss '" + std::string(name) +
                                "' (supported: squared)");
}

}  // namespace smdagg
