#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flowcast/acf.hpp"
#include "flowcast/adf.hpp"
#include "flowcast/lag_select.hpp"
#include "flowcast/rng.hpp"
#include "flowcast/transforms.hpp"
#include "oracles.hpp"

using namespace flowcast;

namespace {

std::vector<double> white_noise(std::uint64_t seed, int n, double sigma = 1.0) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal(0.0, sigma);
    return v;
}

std::vector<double> random_walk(std::uint64_t seed, int n) {
    std::vector<double> v = white_noise(seed, n);
    for (int i = 1; i < n; ++i) v[i] += v[i - 1];
    return v;
}

}  // namespace

TEST_CASE("log_transform picks the right branch") {
    const double e = std::exp(1.0);
    const LogTransformResult pure = log_transform(Series("x", {1.0, e, e * e}));
    CHECK(pure.series.values[0] == doctest::Approx(0.0));
    CHECK(pure.series.values[1] == doctest::Approx(1.0));
    CHECK(pure.series.values[2] == doctest::Approx(2.0));
    CHECK_FALSE(pure.used_log1p);

    const LogTransformResult zeros = log_transform(Series("x", {0.0, e - 1.0}));
    CHECK(zeros.used_log1p);
    CHECK(zeros.series.values[0] == doctest::Approx(0.0));
    CHECK(zeros.series.values[1] == doctest::Approx(1.0));

    const LogTransformResult neg = log_transform(Series("x", {-1.0, 2.0, 3.0}));
    CHECK(neg.skipped_negative);
    CHECK(neg.series.values == std::vector<double>{-1, 2, 3});
}

TEST_CASE("difference computes iterated deltas") {
    CHECK(difference(Series("x", {1, 4, 9, 16}), 1).values == std::vector<double>{3, 5, 7});
    CHECK(difference(Series("x", {5, 5, 5}), 1).values == std::vector<double>{0, 0});
    CHECK(difference(Series("x", {1, 4, 9, 16}), 2).values == std::vector<double>{2, 2});
    CHECK_THROWS_AS(difference(Series("x", {1, 2}), 2), DataError);
}

TEST_CASE("adf_test marks seeded white noise stationary") {
    const Series s("wn", white_noise(42, 500));
    const AdfResult r = adf_test(s, 0.05);
    CHECK(r.p_value <= 0.05);
    CHECK(r.is_stationary);
    CHECK(r.used_lag_order == 7);  // floor(499^(1/3))
    CHECK(r.n_effective == 492);
    CHECK(r.statistic == doctest::Approx(oracles::reference_adf_statistic(s.values)).epsilon(1e-9));
}

TEST_CASE("adf_test keeps the unit root on a seeded random walk") {
    const Series s("rw", random_walk(42, 500));
    const AdfResult r = adf_test(s, 0.05);
    CHECK(r.p_value >= 0.10);
    CHECK_FALSE(r.is_stationary);
    CHECK(r.statistic == doctest::Approx(oracles::reference_adf_statistic(s.values)).epsilon(1e-9));
}

TEST_CASE("adf_test rejects degenerate inputs") {
    CHECK_THROWS_WITH_AS(adf_test(Series("c", std::vector<double>(50, 5.0))),
                         doctest::Contains("degenerate"), DataError);
    CHECK_THROWS_AS(adf_test(Series("short", {1, 2, 3, 4, 5})), DataError);
}

TEST_CASE("adf statistic is invariant under affine scaling") {
    const std::vector<double> base = white_noise(7, 300);
    const AdfResult r0 = adf_test(Series("a", base));
    std::vector<double> scaled(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) scaled[i] = 2.5 * base[i] + 10.0;
    const AdfResult r1 = adf_test(Series("b", scaled));
    CHECK(std::fabs(r0.statistic - r1.statistic) < 1e-9);
}

TEST_CASE("acf matches the hand computation on [1,2,3,4]") {
    const AcfResult r = acf(Series("x", {1, 2, 3, 4}), 1);
    CHECK(r.coefficients[0] == 1.0);
    CHECK(r.coefficients[1] == doctest::Approx(0.25));
}

TEST_CASE("acf properties: r0 == 1, |rk| bounded, matches the definition") {
    Rng rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> y(60);
        for (double& v : y) v = rng.normal();
        const AcfResult r = acf(Series("x", y), 20);
        CHECK(r.coefficients[0] == 1.0);
        for (std::size_t k = 0; k <= 20; ++k) {
            CHECK(std::fabs(r.coefficients[k]) <= 1.0 + 1e-12);
            CHECK(r.coefficients[k] == doctest::Approx(oracles::reference_acf(y, k)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_WITH_AS(acf(Series("c", std::vector<double>(10, 3.0)), 2),
                         doctest::Contains("zero variance"), DataError);
    CHECK_THROWS_AS(acf(Series("x", {1, 2, 3}), 3), DataError);
}

TEST_CASE("acf of a pure cosine peaks at the period") {
    const std::size_t period = 24;
    std::vector<double> y(240);
    for (std::size_t t = 0; t < y.size(); ++t)
        y[t] = std::cos(2.0 * M_PI * static_cast<double>(t) / period);
    const AcfResult r = acf(Series("cos", y), 60);
    // Local maximum at k = period.
    CHECK(r.coefficients[period] > r.coefficients[period - 1]);
    CHECK(r.coefficients[period] > r.coefficients[period + 1]);
}

TEST_CASE("find_peaks basics") {
    CHECK(find_peaks({0, 1, 0, 2, 0}, 1) == std::vector<std::size_t>{1, 3});
    CHECK(find_peaks({1, 2, 3, 4}, 1).empty());
    CHECK(find_peaks({0, 3, 0, 2, 0, 1}, 2) == std::vector<std::size_t>{1});
}

TEST_CASE("find_peaks equals the brute-force window scan") {
    Rng rng(2024);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 3 + rng.uniform_int(0, 40);
        const std::size_t sens = 1 + rng.uniform_int(0, 4);
        std::vector<double> v(n);
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
        CHECK(find_peaks(v, sens) == oracles::brute_force_peaks(v, sens));
    }
}

TEST_CASE("majority_vote picks the most frequent, smallest on ties") {
    CHECK(majority_vote({5, 5, 7}) == 5);
    CHECK(majority_vote({5, 7}) == 5);
    CHECK(majority_vote({9}) == 9);
    CHECK(majority_vote({12, 24, 12}) == 12);
    CHECK_THROWS_AS(majority_vote({}), DataError);
}

TEST_CASE("majority_vote is permutation invariant") {
    Rng rng(5);
    std::vector<std::size_t> v = {3, 3, 8, 8, 2, 3, 8, 8, 1};
    const std::size_t expected = majority_vote(v);
    for (int rep = 0; rep < 30; ++rep) {
        for (std::size_t i = v.size() - 1; i > 0; --i)
            std::swap(v[i], v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
        CHECK(majority_vote(v) == expected);
    }
}

TEST_CASE("log-diff of exponential growth is stationary") {
    // a*b^t with small noise: log then diff leaves log(b) + noise.
    Rng rng(11);
    std::vector<double> y(200);
    for (std::size_t t = 0; t < y.size(); ++t)
        y[t] = 2.0 * std::pow(1.01, static_cast<double>(t)) + rng.normal(0.0, 1e-3);
    const Series logged = log_transform(Series("g", y)).series;
    const Series diffed = difference(logged, 1);
    const AdfResult r = adf_test(diffed, 0.05);
    CHECK(r.is_stationary);
}

TEST_CASE("recommend_lags finds the period of a noisy sine") {
    Rng rng(42);
    std::vector<double> y(1000);
    for (std::size_t t = 0; t < y.size(); ++t)
        y[t] = 10.0 * std::sin(2.0 * M_PI * static_cast<double>(t) / 24.0) + rng.normal(0.0, 0.5);
    const LagRecommendation rec = recommend_lags({Series("sine", y)});
    CHECK(rec.lags >= 23);
    CHECK(rec.lags <= 25);
    CHECK_FALSE(rec.used_default);
    CHECK(rec.note.find("recommendation") != std::string::npos);
    REQUIRE(rec.per_sequence.size() == 1);
    CHECK(rec.per_sequence[0].stationary);
}

TEST_CASE("recommend_lags falls back to the default on a non-stationary target") {
    // Transforms disabled so the Dickey-Fuller test sees the raw random walk.
    LagSelectionConfig cfg;
    cfg.apply_log = false;
    cfg.apply_diff = false;
    const LagRecommendation rec = recommend_lags({Series("rw", random_walk(42, 500))}, cfg);
    CHECK(rec.lags == 5);
    CHECK(rec.used_default);
    CHECK(rec.note.find("recommendation") != std::string::npos);
    CHECK_FALSE(rec.per_sequence[0].stationary);
}

TEST_CASE("recommend_lags majority vote across targets") {
    // Three clean sines with periods 12, 12, 24.
    auto sine = [](std::size_t period, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<double> y(600);
        for (std::size_t t = 0; t < y.size(); ++t)
            y[t] = 5.0 * std::sin(2.0 * M_PI * static_cast<double>(t) / period) +
                   rng.normal(0.0, 0.1);
        return Series("p" + std::to_string(period), y);
    };
    const LagRecommendation rec =
        recommend_lags({sine(12, 1), sine(12, 2), sine(24, 3)});
    CHECK(rec.lags == 12);
    CHECK_FALSE(rec.used_default);
    CHECK(rec.per_sequence.size() == 3);
}

TEST_CASE("recommend_lags never returns lags below one and rejects empty input") {
    CHECK_THROWS_AS(recommend_lags({}), DataError);
    LagSelectionConfig cfg;
    cfg.apply_log = false;
    cfg.apply_diff = false;
    cfg.default_lags = 3;
    const LagRecommendation rec = recommend_lags({Series("rw", random_walk(9, 400))}, cfg);
    CHECK(rec.lags == 3);
    CHECK(rec.lags >= 1);
}
