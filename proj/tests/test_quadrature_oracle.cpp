#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pigeonhole/errors.hpp"
#include "pigeonhole/observables.hpp"
#include "pigeonhole/quadrature_oracle.hpp"

using namespace pigeonhole;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double integrate(const QuadratureSpec& spec, double (*f)(double)) {
    const auto w = spec.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < spec.points; ++i) s += w[i] * f(spec.node(i));
    return s * spec.step();
}

double quartic(double x) { return x * x * x * x; }
double cubic(double x) { return x * x * x + x * x; }

}  // namespace

TEST_CASE("composite rules have their expected order") {
    QuadratureSpec s{QuadratureRule::simpson, 0.0, 1.0, 33, Precision::double_precision};
    CHECK(integrate(s, cubic) == doctest::Approx(0.25 + 1.0 / 3.0).epsilon(1e-14));
    const double e1 = std::abs(integrate(s, quartic) - 0.2);
    s.points = 65;
    const double e2 = std::abs(integrate(s, quartic) - 0.2);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.02));

    QuadratureSpec t{QuadratureRule::trapezoid, 0.0, 1.0, 33, Precision::double_precision};
    const double t1 = std::abs(integrate(t, quartic) - 0.2);
    t.points = 65;
    const double t2 = std::abs(integrate(t, quartic) - 0.2);
    CHECK(t1 / t2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("numeric overlaps match the closed form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const QuadratureSpec spec{QuadratureRule::simpson, -12.0, 12.0, 193, Precision::double_precision};
    for (int i = 0; i < 40; ++i) {
        const GaussianMode a{{u(rng), u(rng)}, {u(rng), u(rng)}, u(rng)};
        const GaussianMode b{{u(rng), u(rng)}, {u(rng), u(rng)}, u(rng)};
        const auto exact = overlap(a, b);
        if (std::abs(exact) < 1e-6) continue;
        CHECK(std::abs(numeric_overlap(a, b, spec) - exact) / std::abs(exact) < 1e-10);
    }
}

TEST_CASE("extended precision resolves tiny overlaps") {
    const GaussianMode a{{0.0, 0.0}, {4.0, 0.0}, 0.0};
    const GaussianMode b{{0.0, 0.0}, {-4.0, 1.0}, 0.2};
    const auto exact = overlap(a, b);
    REQUIRE(std::abs(exact) < 1e-12);
    const QuadratureSpec ext{QuadratureRule::simpson, -18.0, 18.0, 321, Precision::extended};
    CHECK(std::abs(numeric_overlap(a, b, ext) - exact) / std::abs(exact) < 1e-8);
    QuadratureSpec autos = ext;
    autos.precision = Precision::automatic;
    CHECK(numeric_overlap(a, b, autos) == numeric_overlap(a, b, ext));
}

TEST_CASE("two-particle marginals from the explicit amplitude") {
    const QuadratureSpec spec{QuadratureRule::simpson, -10.0, 10.0, 65, Precision::double_precision};
    for (double d : {0.25, 1.0, 3.0}) {
        const InteractionConfig c{d, 0.0, PhaseModel::none, false};
        const auto aa = numeric_marginal_two_particle(DetectorPattern::parse("AA"), kHalfPi, c, spec, 2);
        CHECK(norm(numeric_expectation(aa)) < 1e-6);
        const auto ab = numeric_marginal_two_particle(DetectorPattern::parse("AB"), kHalfPi, c, spec, 2);
        CHECK(norm(numeric_expectation(ab) - Vec2{0.0, d}) < 1e-6);
    }
}

TEST_CASE("two-particle marginal agrees with the composed density") {
    const QuadratureSpec spec{QuadratureRule::simpson, -10.0, 10.0, 65, Precision::double_precision};
    const InteractionConfig c{0.7, 5.0, PhaseModel::geometric_plus_interaction, false};
    const auto pattern = DetectorPattern::parse("AB");
    const auto marginal = numeric_marginal_two_particle(pattern, 0.9, c, spec, 1);
    const auto composed = analytic_expectation(expand_postselected(2, pattern, 0.9), c, 0);
    CHECK(norm(numeric_expectation(marginal) - composed) < 1e-6);
}

TEST_CASE("moments of a grid") {
    const auto s = expand_postselected(3, DetectorPattern::parse("AAA"), kHalfPi);
    const InteractionConfig c{0.4, 5.0, PhaseModel::geometric_plus_interaction, false};
    const auto terms = build_terms(s, c, 0);
    const auto grid = probability_density(terms, covering_grid(terms, 129));
    CHECK(norm(numeric_expectation(grid) - analytic_expectation(terms)) < 1e-6);
    CHECK(norm(numeric_expectation(grid, QuadratureRule::trapezoid) - analytic_expectation(terms)) < 1e-6);
}

TEST_CASE("invalid quadrature setups") {
    CHECK_THROWS_AS((QuadratureSpec{QuadratureRule::simpson, -10.0, 10.0, 64}.validate()), InvalidInput);
    CHECK_THROWS_AS((QuadratureSpec{QuadratureRule::trapezoid, -10.0, 10.0, 16}.validate()), InvalidInput);
    CHECK_THROWS_AS((QuadratureSpec{QuadratureRule::simpson, 1.0, -1.0, 65}.validate()), InvalidInput);
    const GaussianMode far{{7.0, 0.0}, {0.0, 0.0}, 0.0};
    CHECK_THROWS_AS(numeric_overlap(far, far, QuadratureSpec{}), InvalidInput);
    CHECK_THROWS_AS(numeric_marginal_two_particle(DetectorPattern::parse("AAA"), kHalfPi, {}), UnsupportedCase);
}
