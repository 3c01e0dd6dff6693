#pragma once

#include <optional>
#include <vector>

namespace smdagg {

// One stream element: a feature vector with an optional {-1,+1} label.
// Active runs never read the label directly; they go through the oracle.
struct Example {
    std::vector<double> x;
    std::optional<int> y;
};

}  // namespace smdagg
