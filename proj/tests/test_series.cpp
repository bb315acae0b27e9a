#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "flowcast/csv.hpp"
#include "flowcast/rng.hpp"
#include "flowcast/series.hpp"

using namespace flowcast;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("load_csv parses a single-column file with header") {
    const std::string path = write_temp("fc_single.csv", "t\n1\n2\n3\n");
    const Dataset d = load_csv(path, true);
    CHECK(d.n() == 3);
    CHECK(d.m() == 1);
    CHECK(d.features[0].name == "t");
    CHECK(d.features[0].values == std::vector<double>{1, 2, 3});
}

TEST_CASE("load_csv parses two columns and synthesizes names without header") {
    const std::string path = write_temp("fc_two.csv", "1,10\n2,20\n3,30\n4,40\n");
    const Dataset d = load_csv(path, false);
    CHECK(d.n() == 4);
    CHECK(d.m() == 2);
    CHECK(d.features[0].name == "col0");
    CHECK(d.features[1].name == "col1");
}

TEST_CASE("load_csv rejects ragged rows") {
    const std::string path = write_temp("fc_ragged.csv", "1,2\n1,2,3\n");
    CHECK_THROWS_WITH_AS(load_csv(path, false), doctest::Contains("ragged"), DataError);
}

TEST_CASE("load_csv rejects non-numeric cells and empty files") {
    const std::string bad = write_temp("fc_bad.csv", "a\nfoo\n");
    CHECK_THROWS_AS(load_csv(bad, true), DataError);
    const std::string empty = write_temp("fc_empty.csv", "header\n");
    CHECK_THROWS_AS(load_csv(empty, true), DataError);
    CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv", true), DataError);
}

TEST_CASE("load_csv records missing markers") {
    const std::string path = write_temp("fc_missing.csv", "v\n1\n\nNA\nna\n4\n");
    const Dataset d = load_csv(path, true);
    CHECK(d.n() == 4);  // the fully blank line is skipped, NA rows kept
    CHECK(is_missing(d.features[0].values[1]));
    CHECK(is_missing(d.features[0].values[2]));
    CHECK(d.features[0].values[3] == 4.0);
}

TEST_CASE("csv round-trip is exact on values") {
    Rng rng(77);
    Dataset d;
    d.features.emplace_back("a", std::vector<double>{});
    d.features.emplace_back("b", std::vector<double>{});
    for (int i = 0; i < 64; ++i) {
        d.features[0].values.push_back(rng.normal() * 1e3);
        d.features[1].values.push_back(rng.uniform(-1e-6, 1e-6));
    }
    const std::string path = write_temp("fc_roundtrip.csv", "");
    save_csv(d, path);
    const Dataset back = load_csv(path, true);
    REQUIRE(back.n() == d.n());
    REQUIRE(back.m() == d.m());
    for (std::size_t c = 0; c < d.m(); ++c)
        for (std::size_t r = 0; r < d.n(); ++r)
            CHECK(back.features[c].values[r] == d.features[c].values[r]);

    // Twice more: serialize-load is idempotent byte-wise on values.
    const std::string path2 = write_temp("fc_roundtrip2.csv", "");
    save_csv(back, path2);
    const Dataset back2 = load_csv(path2, true);
    for (std::size_t c = 0; c < d.m(); ++c)
        CHECK(back2.features[c].values == back.features[c].values);
}

TEST_CASE("assemble_parallel accepts matching dims and reports mismatches") {
    auto mk = [](std::size_t n, std::size_t m) {
        Dataset d;
        for (std::size_t c = 0; c < m; ++c) {
            std::vector<double> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i + c);
            d.features.emplace_back("f" + std::to_string(c), std::move(v));
        }
        return d;
    };

    const ParallelDataset ok = assemble_parallel({mk(10, 2), mk(10, 2)});
    CHECK(ok.z() == 2);
    CHECK(ok.n() == 10);

    const ParallelDataset single = assemble_parallel({mk(5, 1)});
    CHECK(single.z() == 1);
    CHECK(single.members[0].features[0].values[3] == 3.0);

    CHECK_THROWS_WITH_AS(assemble_parallel({mk(10, 2), mk(9, 2)}),
                         doctest::Contains("dimension mismatch"), DataError);
    CHECK_THROWS_AS(assemble_parallel({}), DataError);
}

TEST_CASE("interpolate_missing fills interior gaps linearly") {
    Series s("x", {1.0, missing_value(), 3.0});
    const Series out = interpolate_missing(s);
    CHECK(out.values == std::vector<double>{1, 2, 3});

    Series gap2("x", {1.0, missing_value(), missing_value(), 4.0});
    CHECK(interpolate_missing(gap2).values == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("interpolate_missing extends flat at the boundaries") {
    Series lead("x", {missing_value(), 2.0, 4.0});
    CHECK(interpolate_missing(lead).values == std::vector<double>{2, 2, 4});

    Series trail("x", {1.0, 5.0, missing_value(), missing_value()});
    CHECK(interpolate_missing(trail).values == std::vector<double>{1, 5, 5, 5});
}

TEST_CASE("interpolate_missing rejects unusable series") {
    Series all("x", {missing_value(), missing_value()});
    CHECK_THROWS_AS(interpolate_missing(all), DataError);
    Series one("x", {missing_value(), 7.0});
    CHECK_THROWS_AS(interpolate_missing(one), DataError);
}

TEST_CASE("series timestamps must be strictly increasing and aligned") {
    Series ok("x", {1.0, 2.0, 3.0});
    ok.timestamps = {0.0, 1.5, 4.0};
    CHECK_NOTHROW(ok.validate());

    Series misaligned("x", {1.0, 2.0, 3.0});
    misaligned.timestamps = {0.0, 1.0};
    CHECK_THROWS_AS(misaligned.validate(), DataError);

    Series backwards("x", {1.0, 2.0, 3.0});
    backwards.timestamps = {0.0, 2.0, 2.0};
    CHECK_THROWS_WITH_AS(backwards.validate(), doctest::Contains("strictly increasing"), DataError);
}

TEST_CASE("interpolate_missing is idempotent") {
    Rng rng(123);
    for (int rep = 0; rep < 50; ++rep) {
        Series s("x", {});
        for (int i = 0; i < 40; ++i)
            s.values.push_back(rng.uniform() < 0.3 ? missing_value() : rng.normal());
        // Guarantee two known values.
        s.values[3] = 1.5;
        s.values[20] = -2.5;
        const Series once = interpolate_missing(s);
        const Series twice = interpolate_missing(once);
        CHECK(once.values == twice.values);
        CHECK_FALSE(once.has_missing());
        // Known samples unchanged.
        for (std::size_t i = 0; i < s.values.size(); ++i)
            if (!is_missing(s.values[i])) CHECK(once.values[i] == s.values[i]);
    }
}
