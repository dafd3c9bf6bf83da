#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "volspill/bekk.hpp"

#include <cmath>

using namespace volspill;

TEST_CASE("fit_mle: data without ARCH or GARCH effects") {
    BekkParams flat;
    flat.c11 = 0.01;
    flat.c21 = 0.002;
    flat.c22 = 0.008;
    const auto e = simulate(flat, 2000, 8);
    const auto fit = fit_mle(e);
    REQUIRE(fit.standard_errors.has_value());
    const Vector13d v = fit.params.to_vector();
    for (int i = 5; i < 13; ++i) {
        INFO(BekkParams::kNames[static_cast<std::size_t>(i)], " = ", v(i), ", se = ", (*fit.standard_errors)(i));
        CHECK(std::abs(v(i)) <= 2.0 * (*fit.standard_errors)(i));
    }
}
