// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "gsd/error.hpp"
#include "gsd/schedule.hpp"

using namespace gsd;

TEST_CASE("linear schedule values") {
    const auto s = NoiseSchedule::linear(1000);
    CHECK(s.steps() == 1000);
    CHECK(s.alpha(1) == doctest::Approx(0.99998).epsilon(1e-14));
    CHECK(s.alpha_bar(2) == doctest::Approx(0.99998 * 0.99996).epsilon(1e-14));

    // Independent route: exp of a sum of logs.
    double log_sum = 0.0;
    for (int t = 1; t <= 1000; ++t) log_sum += std::log1p(-2e-5 * t);
    CHECK(s.alpha_bar(1000) == doctest::Approx(std::exp(log_sum)).epsilon(1e-9));
    CHECK(s.alpha_bar(1000) == doctest::Approx(4.2016723968e-5).epsilon(1e-9));
    // First-order estimate exp(-2e-5 * sum t) agrees to within 10%.
    CHECK(s.alpha_bar(1000) == doctest::Approx(std::exp(-2e-5 * 500500.0)).epsilon(0.1));
    CHECK(s.alpha_bar(0) == 1.0);
}

TEST_CASE("schedule invariants") {
    for (int T : {1, 10, 1000}) {
        const auto s = NoiseSchedule::linear(T);
        for (int t = 1; t <= T; ++t) {
            CHECK(s.alpha(t) > 0.0);
            CHECK(s.alpha(t) < 1.0);
            CHECK(s.alpha_bar(t) < s.alpha_bar(t - 1));
            CHECK(s.alpha_bar(t) > 0.0);
            CHECK(s.alpha_bar(t) / s.alpha_bar(t - 1) == doctest::Approx(s.alpha(t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("schedule rejects bad input") {
    CHECK_THROWS_AS(NoiseSchedule::linear(0), UsageError);
    CHECK_THROWS_AS(NoiseSchedule({0.5, 1.0}), UsageError);
    const auto s = NoiseSchedule::linear(10);
    CHECK_THROWS_AS(s.alpha(0), UsageError);
    CHECK_THROWS_AS(s.alpha_bar(11), UsageError);
}

TEST_CASE("sigma") {
    // alpha_bar_1 = 0.64, alpha_bar_2 = 0.25
    const NoiseSchedule s({0.64, 0.25 / 0.64});
    CHECK(s.sigma(1, 2, 0.0) == 0.0);
    const double full = s.sigma(1, 2, 1.0);
    CHECK(full == doctest::Approx(0.5408326913195984).epsilon(1e-12));
    CHECK(s.sigma(1, 2, 0.5) == doctest::Approx(full / 2).epsilon(1e-14));

    const auto lin = NoiseSchedule::linear(1000);
    for (int t : {2, 10, 500, 1000}) CHECK(lin.sigma(t - 1, t, 0.0) == 0.0);
    CHECK_THROWS_AS(s.sigma(2, 1, 1.0), UsageError);
    CHECK_THROWS_AS(s.sigma(1, 3, 1.0), UsageError);
    CHECK_THROWS_AS(s.sigma(1, 2, 1.5), UsageError);
}

TEST_CASE("schedule csv dump") {
    const auto csv = NoiseSchedule::linear(2).to_csv();
    CHECK(csv.rfind("t,alpha,alpha_bar\n1,0.98999999999999999,0.98999999999999999\n", 0) == 0);
    CHECK(csv.find("\n2,0.97999999999999998,") != std::string::npos);
}

TEST_CASE("uniform sampling plan") {
    const auto p = SamplingPlan::uniform(1000, 100);
    REQUIRE(p.size() == 100);
    for (int i = 0; i < 100; ++i) CHECK(p.tau()[static_cast<std::size_t>(i)] == 10 * (i + 1));

    const auto id = SamplingPlan::uniform(1000, 1000);
    for (int i = 0; i < 1000; ++i) CHECK(id.tau()[static_cast<std::size_t>(i)] == i + 1);

    CHECK_THROWS_AS(SamplingPlan::uniform(1000, 3), UsageError);
    CHECK_THROWS_AS(SamplingPlan::uniform(1000, 0), UsageError);
    CHECK_THROWS_AS(SamplingPlan::uniform(10, 20), UsageError);
}

TEST_CASE("custom sampling plan validation") {
    CHECK_NOTHROW(SamplingPlan({1, 3}, 3));
    CHECK_THROWS_AS(SamplingPlan({3, 1}, 3), UsageError);
    CHECK_THROWS_AS(SamplingPlan({0, 1}, 3), UsageError);
    CHECK_THROWS_AS(SamplingPlan({1, 4}, 3), UsageError);
    CHECK_THROWS_AS(SamplingPlan({}, 3), UsageError);
    CHECK_THROWS_AS(SamplingPlan({1, 2}, 3, -0.1), UsageError);
}
