#include "smdagg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "smdagg/rng.hpp"

namespace smdagg {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && !s.empty();
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

}  // namespace

Dataset load_csv(const std::string& path, std::size_t label_column, bool has_header,
                 std::string name) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    Dataset ds;
    ds.name = name.empty() ? std::filesystem::path(path).stem().string() : std::move(name);

    std::vector<std::string> raw_labels;
    std::string line;
    std::size_t line_no = 0;
    bool skipped_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (has_header && !skipped_header) {
            skipped_header = true;
            continue;
        }
        std::string_view view = trim(line);
        if (view.empty()) continue;

        std::vector<std::string_view> fields = split_fields(view);
        if (label_column >= fields.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": label column " + std::to_string(label_column) +
                                     " out of range (row has " +
                                     std::to_string(fields.size()) + " fields)");

        Example ex;
        ex.x.reserve(fields.size() - 1);
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (j == label_column) continue;
            double v = 0.0;
            if (!parse_double(fields[j], v))
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": non-numeric feature in column " +
                                         std::to_string(j) + " ('" + std::string(fields[j]) +
                                         "')");
            ex.x.push_back(v);
        }

        if (ds.examples.empty()) {
            ds.dim = ex.x.size();
        } else if (ex.x.size() != ds.dim) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(ds.dim) + " features, got " +
                                     std::to_string(ex.x.size()));
        }

        raw_labels.emplace_back(fields[label_column]);
        ds.examples.push_back(std::move(ex));
    }

    if (ds.examples.empty()) throw std::runtime_error(path + ": no data rows");

    std::vector<std::string> classes = raw_labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (classes.size() != 2)
        throw std::invalid_argument(path + ": expected exactly 2 label values, found " +
                                    std::to_string(classes.size()));

    // Sorted order decides the -1/+1 mapping: numeric when both values
    // parse as numbers, lexicographic otherwise.
    double c0 = 0.0, c1 = 0.0;
    if (parse_double(classes[0], c0) && parse_double(classes[1], c1) && c0 != c1) {
        if (c0 > c1) std::swap(classes[0], classes[1]);
    }
    for (std::size_t i = 0; i < raw_labels.size(); ++i)
        ds.examples[i].y = (raw_labels[i] == classes[0]) ? -1 : +1;

    return ds;
}

SplitResult split_and_stream(const Dataset& ds, double split_fraction, std::uint64_t seed) {
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw std::invalid_argument("split_and_stream: split fraction must be in (0,1)");
    const std::size_t n = ds.examples.size();
    const std::size_t train_n =
        static_cast<std::size_t>(std::llround(split_fraction * static_cast<double>(n)));
    if (train_n == 0 || train_n == n)
        throw std::invalid_argument("split_and_stream: split leaves an empty side (n=" +
                                    std::to_string(n) + ")");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    CounterRng rng(seed);
    fisher_yates_shuffle(order, rng);

    SplitResult out;
    out.train.reserve(train_n);
    out.test.reserve(n - train_n);
    for (std::size_t i = 0; i < n; ++i)
        (i < train_n ? out.train : out.test).push_back(ds.examples[order[i]]);
    return out;
}

}  // namespace smdagg
