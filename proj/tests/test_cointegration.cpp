#include "test_util.hpp"

#include "volspill/cointegration.hpp"
#include "volspill/errors.hpp"
#include "volspill/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace volspill;

namespace {

AlignedPanel random_walk_pair(std::size_t T, std::uint64_t seed) {
    AlignedPanel p;
    p.dates = testutil::business_days(T);
    p.br = testutil::random_walk(T, 2 * seed + 1);
    p.us = testutil::random_walk(T, 2 * seed + 2);
    return p;
}

AlignedPanel noisy_copy_pair(std::size_t T, std::uint64_t seed) {
    AlignedPanel p;
    p.dates = testutil::business_days(T);
    p.us = testutil::random_walk(T, seed);
    std::mt19937_64 rng(seed + 1000);
    std::normal_distribution<double> z(0.0, 1.0);
    p.br.resize(T);
    for (std::size_t t = 0; t < T; ++t) p.br[t] = p.us[t] + z(rng);
    return p;
}

RegimeSpec vecm_regime() {
    RegimeSpec r;
    r.cointegrated = true;
    r.beta = {1.0, -1.07, 0.68};
    r.alpha = {-0.05, 0.03};
    r.bekk.c11 = 0.01;
    r.bekk.c21 = 0.002;
    r.bekk.c22 = 0.01;
    return r;
}

} // namespace

TEST_CASE("critical values match the lookup table") {
    const auto r1 = critical_values(RankHypothesis::AtMost1);
    CHECK(r1.pct10 == 7.52);
    CHECK(r1.pct5 == 9.24);
    CHECK(r1.pct1 == 12.97);
    const auto r0 = critical_values(RankHypothesis::R0);
    CHECK(r0.pct10 == 17.85);
    CHECK(r0.pct5 == 19.96);
    CHECK(r0.pct1 == 24.60);
    for (const auto& cv : {r0, r1}) {
        CHECK(cv.pct10 < cv.pct5);
        CHECK(cv.pct5 < cv.pct1);
    }
}

TEST_CASE("sequential rank decision on reported statistics") {
    CHECK(decide_rank(22.65, 2.14, Level::Pct5) == 1);
    CHECK(decide_rank(22.65, 2.14, Level::Pct1) == 0);
    CHECK(decide_rank(15.0, 2.14, Level::Pct5) == 0);
    CHECK(decide_rank(40.0, 10.0, Level::Pct5) == 2);
}

TEST_CASE("johansen result invariants") {
    const auto p = noisy_copy_pair(500, 3);
    const auto r = johansen_test(p, 2);
    CHECK(r.eigenvalues[0] >= r.eigenvalues[1]);
    CHECK(r.eigenvalues[1] >= 0.0);
    CHECK(r.eigenvalues[0] < 1.0);
    CHECK(r.trace_r0 >= r.trace_r1);
    CHECK(r.trace_r1 >= 0.0);
    CHECK(r.beta.br == 1.0);
    CHECK(r.rank == decide_rank(r.trace_r0, r.trace_r1, Level::Pct5));
    CHECK(r.nobs == 498);
    // true relation br - us = noise
    CHECK(r.beta.us == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("beta normalization preserves the cointegrating span") {
    const auto r = johansen_test(noisy_copy_pair(400, 8), 3);
    const Eigen::Vector3d beta(r.beta.br, r.beta.us, r.beta.constant);
    const Eigen::Vector3d v = r.eigenvector * -3.7;
    const Eigen::Vector3d u = v.normalized();
    const Eigen::Vector3d resid = beta - u * u.dot(beta);
    CHECK(resid.norm() < 1e-10);
}

TEST_CASE("rank decision is invariant to adding constants") {
    auto p = noisy_copy_pair(500, 21);
    const auto a = johansen_test(p, 2);
    for (auto& v : p.br) v += 5.0;
    for (auto& v : p.us) v -= 2.0;
    const auto b = johansen_test(p, 2);
    CHECK(a.rank == b.rank);
    CHECK(a.trace_r0 == doctest::Approx(b.trace_r0).epsilon(1e-8));
    CHECK(a.trace_r1 == doctest::Approx(b.trace_r1).epsilon(1e-8));
    CHECK(a.beta.us == doctest::Approx(b.beta.us).epsilon(1e-8));
}

TEST_CASE("size: independent random walks mostly give rank 0") {
    int rank0 = 0;
    const int reps = 100;
    for (int i = 0; i < reps; ++i) {
        if (johansen_test(random_walk_pair(500, static_cast<std::uint64_t>(i)), 2).rank == 0) ++rank0;
    }
    CHECK(rank0 >= 90);
}

TEST_CASE("power: a noisy copy gives rank 1") {
    int rank1 = 0;
    const int reps = 100;
    for (int i = 0; i < reps; ++i) {
        if (johansen_test(noisy_copy_pair(500, 500 + static_cast<std::uint64_t>(i)), 2).rank == 1) ++rank1;
    }
    CHECK(rank1 >= 95);
}

TEST_CASE("long-run slope recovered from a simulated VECM") {
    const auto dates = weekdays(Date{2000, 1, 3}, Date{2011, 7, 1});
    REQUIRE(dates.size() >= 3000);
    const std::vector<Date> sample(dates.begin(), dates.begin() + 3000);
    int within = 0;
    const int reps = 20;
    for (int i = 0; i < reps; ++i) {
        const auto sim = simulate_log_prices(sample, Eigen::Vector2d(1.0, 0.3), vecm_regime(), 77 + i);
        const auto r = johansen_test(sim.panel, 2);
        if (std::abs(r.beta.us + 1.07) <= 0.05) ++within;
    }
    CHECK(within >= 18);
}

TEST_CASE("johansen errors") {
    CHECK_THROWS_AS(johansen_test(random_walk_pair(30, 1), 5), InputError);
    auto p = random_walk_pair(200, 2);
    p.us.assign(p.us.size(), 1.0);
    CHECK_THROWS_AS(johansen_test(p, 2), InputError);
    auto q = random_walk_pair(200, 3);
    q.us = q.br;
    CHECK_THROWS_AS(johansen_test(q, 2), EstimationError);
}
