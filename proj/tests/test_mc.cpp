#include "doctest.h"

#include <cmath>
#include <vector>

#include "orthoplanar/mc.hpp"

using namespace orthoplanar;

namespace {
ModelParams default_params() { return validate_params(1.0, 1.0, 0.3, 0.4); }
}  // namespace

TEST_CASE("compensated sum") {
    CompensatedSum sum;
    sum.add(1.0);
    for (int i = 0; i < 1000; ++i) sum.add(1e-16);
    sum.add(-1.0);
    CHECK(sum.value() == doctest::Approx(1e-13).epsilon(1e-6));

    CompensatedSum a;
    CompensatedSum b;
    a.add(1e16);
    b.add(1.0);
    b.add(-1e16);
    a.add(b);
    CHECK(a.value() == 1.0);
}

TEST_CASE("chunking covers every replication once") {
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, kChunkSize, kChunkSize * 3 + 17}) {
        std::vector<int> hits(n, 0);
        for_each_chunk(n, 4, [&](std::size_t, std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) ++hits[i];
        });
        for (int h : hits) REQUIRE(h == 1);
    }
    CHECK(chunk_count(0) == 0);
    CHECK(chunk_count(kChunkSize + 1) == 2);
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("trivial events") {
    const auto params = default_params();
    const auto always = estimate_event(params, 1.0, 10000, 1, [](const SimOutcome&) { return true; });
    CHECK(always.mean == 1.0);
    CHECK(always.std_error == 0.0);
    CHECK(always.n == 10000);

    const auto none = estimate_event(params, 1.0, 0, 1, [](const SimOutcome&) { return true; });
    CHECK(none.n == 0);
    CHECK(none.mean == 0.0);

    const auto [re, im] = empirical_charfn(params, 1.0, 5000, 2, [](const SimOutcome&) {
        return PhaseSample{0.0, true};
    });
    CHECK(re.mean == 1.0);
    CHECK(im.mean == 0.0);
}

TEST_CASE("no events before t") {
    const auto params = default_params();
    const auto est = estimate_event(params, 1.0, 1000000, 3, [](const SimOutcome& o) {
        return o.final.n_events == 0;
    });
    CHECK(std::abs(est.mean - std::exp(-1.0)) <= 4.0 * est.std_error);
    const double bernoulli = std::sqrt(std::exp(-1.0) * (1.0 - std::exp(-1.0)) / 1e6);
    CHECK(est.std_error == doctest::Approx(bernoulli).epsilon(0.01));
}

TEST_CASE("results do not depend on the thread count") {
    const auto params = default_params();
    const std::size_t n = kChunkSize * 7 + 123;
    const auto fn = [](const SimOutcome& o, std::span<double> acc) {
        acc[0] += o.final.x;
        acc[1] += o.final.x * o.final.y;
        acc[2] += o.t_vertical;
    };
    const auto one = accumulate(params, 1.3, McRun{n, 99, 1}, 3, fn);
    const auto four = accumulate(params, 1.3, McRun{n, 99, 4}, 3, fn);
    const auto seven = accumulate(params, 1.3, McRun{n, 99, 7}, 3, fn);
    CHECK(one == four);
    CHECK(one == seven);

    const auto phase = [](const SimOutcome& o) { return PhaseSample{o.final.x - 2.0 * o.final.y, true}; };
    const auto a = empirical_charfn(params, 1.0, n, 5, phase, 1);
    const auto b = empirical_charfn(params, 1.0, n, 5, phase, 4);
    CHECK(a.first.mean == b.first.mean);
    CHECK(a.second.std_error == b.second.std_error);

    const auto other = accumulate(params, 1.3, McRun{n, 100, 1}, 3, fn);
    CHECK(other != one);
}

TEST_CASE("moment estimate") {
    const auto est = moment_estimate(10.0, 30.0, 5);
    CHECK(est.mean == 2.0);
    // sample variance (30 - 5*4) / 4 = 2.5
    CHECK(est.std_error == doctest::Approx(std::sqrt(2.5 / 5.0)));
}

TEST_CASE("histograms") {
    const std::vector<double> samples{0.05, 0.15, 0.15, 0.95, 1.0, -0.1, 0.5};
    const auto hist = density_histogram(samples, 0.0, 1.0, 10);
    CHECK(hist.bins() == 10);
    CHECK(hist.n == samples.size());
    CHECK(hist.counts[0] == 1);
    CHECK(hist.counts[1] == 2);
    CHECK(hist.counts[9] == 1);
    CHECK(hist.inside() == 5);
    CHECK(hist.edge(10) == 1.0);
    CHECK_FALSE(hist.bin_of(1.0).has_value());
    CHECK(density_histogram(samples, 0.0, 1.0, 10, 100).n == 100);
    CHECK_THROWS_AS(density_histogram(samples, 0.0, 1.0, 9), std::invalid_argument);

    // Uniform draws against the uniform density.
    std::vector<double> u;
    RandomStream rng(7);
    for (int i = 0; i < 200000; ++i) u.push_back(rng.uniform());
    const auto uh = density_histogram(u, 0.0, 1.0, 20);
    const auto cmp = compare_histogram(uh, [](double) { return 1.0; });
    CHECK(cmp.expected_mass[3] == doctest::Approx(0.05));
    CHECK(cmp.max_abs_z < 5.0);
    const auto wrong = compare_histogram(uh, [](double x) { return 2.0 * x; });
    CHECK(wrong.max_abs_z > 50.0);
}
