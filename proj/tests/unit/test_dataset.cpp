#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <string>

#include "smdagg/dataset.hpp"

using namespace smdagg;

namespace {

std::filesystem::path write_temp_csv(const std::string& name, const std::string& content) {
    std::filesystem::path path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("string labels map to -1/+1 by sorted order") {
    auto path = write_temp_csv("smdagg_ab.csv", "0.1,A\n0.2,B\n");
    Dataset ds = load_csv(path.string(), 1, false);
    REQUIRE(ds.examples.size() == 2);
    CHECK(ds.dim == 1);
    CHECK(*ds.examples[0].y == -1);
    CHECK(*ds.examples[1].y == +1);
    CHECK(ds.examples[0].x[0] == doctest::Approx(0.1));
}

TEST_CASE("numeric labels sort numerically") {
    auto path = write_temp_csv("smdagg_numlab.csv", "0.5,10\n0.6,2\n0.7,10\n");
    Dataset ds = load_csv(path.string(), 1, false);
    CHECK(*ds.examples[0].y == +1);  // 10 > 2 numerically even though "10" < "2"
    CHECK(*ds.examples[1].y == -1);
    CHECK(*ds.examples[2].y == +1);
}

TEST_CASE("header rows are skipped") {
    auto path = write_temp_csv("smdagg_header.csv", "f,label\n1.0,0\n2.0,1\n");
    Dataset ds = load_csv(path.string(), 1, true);
    CHECK(ds.examples.size() == 2);
}

TEST_CASE("load errors carry locations") {
    CHECK_THROWS_WITH_AS(load_csv("/no/such/file.csv", 0, false),
                         doctest::Contains("/no/such/file.csv"), std::runtime_error);

    auto bad = write_temp_csv("smdagg_bad.csv", "0.1,1\nxyz,0\n");
    CHECK_THROWS_WITH_AS(load_csv(bad.string(), 1, false), doctest::Contains(":2"),
                         std::runtime_error);

    auto three = write_temp_csv("smdagg_three.csv", "0.1,a\n0.2,b\n0.3,c\n");
    CHECK_THROWS_AS(load_csv(three.string(), 1, false), std::invalid_argument);

    auto short_row = write_temp_csv("smdagg_short.csv", "0.1,1\n0.2\n");
    CHECK_THROWS_WITH_AS(load_csv(short_row.string(), 1, false), doctest::Contains(":2"),
                         std::runtime_error);
}

TEST_CASE("label column can sit anywhere") {
    auto path = write_temp_csv("smdagg_mid.csv", "0.1,pos,7.0\n0.2,neg,8.0\n");
    Dataset ds = load_csv(path.string(), 1, false);
    CHECK(ds.dim == 2);
    CHECK(*ds.examples[0].y == +1);  // "pos" > "neg"
    CHECK(ds.examples[0].x == std::vector<double>{0.1, 7.0});
}

TEST_CASE("split sizes follow the fraction") {
    Dataset ds;
    ds.dim = 1;
    ds.name = "ten";
    for (int i = 0; i < 10; ++i) ds.examples.push_back({{static_cast<double>(i)}, i % 2 ? 1 : -1});

    SplitResult s = split_and_stream(ds, 0.5, 3);
    CHECK(s.train.size() == 5);
    CHECK(s.test.size() == 5);

    CHECK_THROWS_AS(split_and_stream(ds, 0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(split_and_stream(ds, 1.0, 3), std::invalid_argument);

    Dataset tiny;
    tiny.dim = 1;
    tiny.examples.push_back({{1.0}, +1});
    CHECK_THROWS_AS(split_and_stream(tiny, 0.7, 3), std::invalid_argument);
}

TEST_CASE("splits are seeded") {
    Dataset ds;
    ds.dim = 1;
    for (int i = 0; i < 50; ++i) ds.examples.push_back({{static_cast<double>(i)}, i % 2 ? 1 : -1});

    SplitResult a = split_and_stream(ds, 0.6, 11);
    SplitResult b = split_and_stream(ds, 0.6, 11);
    SplitResult c = split_and_stream(ds, 0.6, 12);

    auto features = [](const std::vector<Example>& v) {
        std::vector<double> out;
        for (const Example& ex : v) out.push_back(ex.x[0]);
        return out;
    };
    CHECK(features(a.train) == features(b.train));
    CHECK(features(a.test) == features(b.test));
    CHECK(features(a.train) != features(c.train));
}
