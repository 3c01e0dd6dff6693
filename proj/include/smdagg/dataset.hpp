#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smdagg/types.hpp"

namespace smdagg {

struct Dataset {
    std::vector<Example> examples;
    std::size_t dim = 0;
    std::string name;
};

// Numeric CSV, one row per example. The label column may hold any two
// distinct values (numeric or not); they map to -1/+1 by sorted order
// (numeric order when both parse as numbers, lexicographic otherwise).
// Malformed rows fail the load with their line number.
Dataset load_csv(const std::string& path, std::size_t label_column, bool has_header,
                 std::string name = "");

struct SplitResult {
    std::vector<Example> train;  // stream order = shuffled order
    std::vector<Example> test;
};

// Seeded shuffle, then a split_fraction / remainder cut. Both sides must be
// nonempty.
SplitResult split_and_stream(const Dataset& ds, double split_fraction, std::uint64_t seed);

}  // namespace smdagg
