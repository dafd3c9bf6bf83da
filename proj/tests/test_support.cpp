#include "test_util.hpp"

#include "volspill/config.hpp"
#include "volspill/date.hpp"
#include "volspill/errors.hpp"
#include "volspill/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace volspill;

TEST_CASE("dates") {
    const auto d = Date::parse("2016-02-29");
    CHECK(d.iso() == "2016-02-29");
    CHECK(d.year() == 2016);
    CHECK(d.month() == 2);
    CHECK(d.plus_days(1).iso() == "2016-03-01");
    CHECK(Date::parse("2016-03-01").days_since(d) == 1);
    CHECK_FALSE(Date(2020, 1, 4).is_weekday());
    CHECK(Date(2020, 1, 6).is_weekday());
    CHECK_THROWS_AS(Date::parse("2015-02-29"), std::invalid_argument);
    CHECK_THROWS_AS(Date::parse("2015-2-1"), std::invalid_argument);
    CHECK(Date(2010, 1, 1) < Date(2010, 1, 2));
}

TEST_CASE("summary statistics") {
    const std::vector<double> x{1, 2, 3, 4, 10};
    const auto s = summary_stats("x", x);
    CHECK(s.mean == doctest::Approx(4.0));
    CHECK(s.median == doctest::Approx(3.0));
    CHECK(s.n == 5);
    const double sd = std::sqrt((9 + 4 + 1 + 0 + 36) / 4.0);
    CHECK(s.std_error == doctest::Approx(sd / std::sqrt(5.0)));
    REQUIRE(s.skewness.has_value());
    CHECK(*s.skewness > 0.0);

    const std::vector<double> flat(50, 2.5);
    const auto f = summary_stats("flat", flat);
    CHECK_FALSE(f.skewness.has_value());
    CHECK_FALSE(f.excess_kurtosis.has_value());
    CHECK(f.std_error == 0.0);

    std::mt19937_64 rng(2019);
    std::normal_distribution<double> z;
    std::vector<double> g(100000);
    for (auto& v : g) v = z(rng);
    const auto n = summary_stats("normal", g);
    CHECK(std::abs(*n.skewness) < 0.05);
    CHECK(std::abs(*n.excess_kurtosis) < 0.1);
}

TEST_CASE("key-value config") {
    const auto cfg = KeyValueConfig::parse("# comment\n\na = 1\nb.c = hello world \nlist = x, y ,z\n", "t");
    CHECK(cfg.get("a") == "1");
    CHECK(cfg.get_or("b.c", "") == "hello world");
    CHECK(cfg.get_int("a", 0) == 1);
    CHECK(cfg.get_double("missing", 2.5) == 2.5);
    CHECK(split_list(*cfg.get("list")) == std::vector<std::string>{"x", "y", "z"});
    CHECK_THROWS_AS((void)cfg.require("nope"), InputError);
    CHECK_THROWS_AS((void)cfg.get_int("b.c", 0), InputError);
    CHECK_THROWS_AS(KeyValueConfig::parse("a = 1\na = 2\n"), InputError);
    CHECK_THROWS_AS(KeyValueConfig::parse("no equals sign\n"), InputError);
    const auto again = KeyValueConfig::parse(cfg.serialize());
    CHECK(again == cfg);
}
