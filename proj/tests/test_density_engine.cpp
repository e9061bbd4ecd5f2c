#include <cmath>
#include <cstring>
#include <numbers>

#include "doctest.h"
#include "pigeonhole/density_engine.hpp"
#include "pigeonhole/errors.hpp"
#include "pigeonhole/observables.hpp"

using namespace pigeonhole;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

PostSelectedState state(const char* pattern) {
    const auto p = DetectorPattern::parse(pattern);
    return expand_postselected(p.size(), p, kHalfPi);
}

double grid_sum(const DensityGrid& g) {
    double s = 0.0;
    for (double v : g.values) s += v;
    return s * g.spec.cell_area();
}

}  // namespace

TEST_CASE("densities are normalized and non-negative") {
    for (double d : {0.0, 0.25, 1.0, 3.0}) {
        for (auto model : {PhaseModel::none, PhaseModel::geometric_plus_interaction}) {
            const auto terms = build_terms(state("AAA"), {d, 5.0, model, false}, 0);
            const auto g = probability_density(terms, covering_grid(terms, 129));
            CHECK(grid_sum(g) == doctest::Approx(1.0).epsilon(1e-12));
            for (double v : g.values) CHECK(v >= 0.0);
            CHECK_FALSE(g.mass_warning);
        }
    }
}

TEST_CASE("d = 0 gives the centered Gaussian") {
    const auto terms = build_terms(state("AAA"), {0.0, 5.0, PhaseModel::none, false}, 0);
    const auto g = probability_density(terms, GridSpec::square(8.0, 129));
    const std::size_t mid = 64;
    CHECK(g.at(mid, mid) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-9));
    CHECK(g.at(mid + 8, mid) == doctest::Approx(std::exp(-0.5) / (2.0 * std::numbers::pi)).epsilon(1e-9));
}

TEST_CASE("incoherent density at d = 3 peaks at the four group centers") {
    const auto terms = build_terms(state("AAA"), {3.0, 5.0, PhaseModel::none, false}, 0);
    REQUIRE(terms.diagonal.size() == 4);
    const double between = density_at(terms, {0.0, -2.0}, false);
    for (const auto& t : terms.diagonal) CHECK(density_at(terms, t.mode.center, false) > 5.0 * between);
}

TEST_CASE("AAA densities are identical for every particle in its own frame") {
    const auto s = state("AAA");
    const InteractionConfig c{0.6, 5.0, PhaseModel::geometric_plus_interaction, false};
    const auto t0 = build_terms(s, c, 0);
    for (std::size_t p = 1; p < 3; ++p) {
        const auto tp = build_terms(s, c, p);
        for (double x = -3.0; x <= 3.0; x += 0.75) {
            for (double y = -2.0; y <= 4.0; y += 0.75) {
                CHECK(density_at(tp, {x, y}) == doctest::Approx(density_at(t0, {x, y})).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("particle 1 density is mirror symmetric in x") {
    for (const char* pattern : {"AAA", "ABB"}) {
        const auto terms = build_terms(state(pattern), {0.8, 5.0, PhaseModel::geometric_plus_interaction, false}, 0);
        for (double x = 0.25; x <= 3.0; x += 0.5) {
            for (double y = -2.0; y <= 4.0; y += 0.5) {
                CHECK(density_at(terms, {x, y}) == doctest::Approx(density_at(terms, {-x, y})).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("ensemble spread only damps cross terms") {
    const auto s = state("AAA");
    for (double d : {0.1, 0.5, 2.0}) {
        const auto sharp = build_terms(s, {d, 5.0, PhaseModel::geometric_plus_interaction, false}, 0);
        const auto spread = build_terms(s, {d, 5.0, PhaseModel::geometric_plus_interaction, true}, 0);
        REQUIRE(sharp.cross.size() == spread.cross.size());
        for (std::size_t i = 0; i < sharp.cross.size(); ++i) {
            CHECK(std::abs(spread.cross[i].prefactor) <= std::abs(sharp.cross[i].prefactor) + 1e-15);
            const double theta = sharp.cross[i].interaction_phase;
            const double sigma = std::sqrt(2.0) * theta / 5.0;
            CHECK(std::abs(spread.cross[i].prefactor) ==
                  doctest::Approx(std::abs(sharp.cross[i].prefactor) * std::exp(-sigma * sigma / 2.0)));
        }
        for (std::size_t i = 0; i < sharp.diagonal.size(); ++i) {
            CHECK(spread.diagonal[i].weight == sharp.diagonal[i].weight);
        }
    }
}

TEST_CASE("prefactors are Hermitian") {
    const auto terms = build_terms(state("AAA"), {0.4, 5.0, PhaseModel::geometric_plus_interaction, false}, 1);
    for (const auto& c : terms.cross) {
        CHECK(std::abs(terms.prefactor(c.second, c.first) - std::conj(terms.prefactor(c.first, c.second))) < 1e-15);
    }
}

TEST_CASE("zero-coefficient groups carry no weight") {
    const auto terms = build_terms(state("AA"), {1.0, 0.0, PhaseModel::none, false}, 0);
    REQUIRE(terms.diagonal.size() == 2);
    CHECK(terms.diagonal[0].weight == 0.0);
    CHECK(terms.diagonal[1].weight == 4.0);
    CHECK(terms.cross[0].prefactor == std::complex<double>{0.0, 0.0});
    CHECK(norm(analytic_expectation(terms)) < 1e-15);
}

TEST_CASE("closed-form reference agrees pointwise up to normalization") {
    const auto s = state("AAA");
    for (auto model : {PhaseModel::none, PhaseModel::geometric, PhaseModel::geometric_plus_interaction}) {
        const InteractionConfig c{0.25, model == PhaseModel::geometric ? 0.0 : 5.0, model, false};
        const auto terms = build_terms(s, c, 0);
        const double ratio = density_at(terms, {0.1, 0.2}) / closed_form_reference(s.pattern, 0, 0.1, 0.2, c);
        for (double x = -3.0; x <= 3.0; x += 0.5) {
            for (double y = -3.0; y <= 3.0; y += 0.5) {
                CHECK(density_at(terms, {x, y}) ==
                      doctest::Approx(ratio * closed_form_reference(s.pattern, 0, x, y, c)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("grids are identical across thread counts") {
    const auto terms = build_terms(state("ABB"), {0.3, 5.0, PhaseModel::geometric_plus_interaction, false}, 0);
    const auto grid = covering_grid(terms, 101);
    const auto one = probability_density(terms, grid, 1);
    for (unsigned t : {2u, 3u, 8u}) {
        const auto many = probability_density(terms, grid, t);
        CHECK(std::memcmp(one.values.data(), many.values.data(), one.values.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("covering grid keeps a margin around every center") {
    for (double d : {0.0, 3.0, 10.0}) {
        const auto terms = build_terms(state("AAA"), {d, 5.0, PhaseModel::none, false}, 0);
        const auto g = covering_grid(terms, 65);
        CHECK(g.x_max >= 8.0);
        for (const auto& t : terms.diagonal) CHECK(g.contains(t.mode.center, 6.0));
    }
}

TEST_CASE("errors") {
    const auto terms = build_terms(state("AAA"), {3.0, 5.0, PhaseModel::none, false}, 0);
    CHECK_THROWS_AS(probability_density(terms, GridSpec::square(3.0, 65)), InvalidInput);
    CHECK_THROWS_AS(GridSpec::square(8.0, 8).validate(), InvalidInput);
    CHECK_THROWS_AS(build_terms(state("AAA"), {0.1, 5.0, PhaseModel::none, false}, 3), InvalidInput);
    CHECK_THROWS_AS(closed_form_reference(DetectorPattern::parse("ABB"), 0, 0.0, 0.0, {}), UnsupportedCase);
    CHECK_THROWS_AS(closed_form_reference(DetectorPattern::parse("AAA"), 1, 0.0, 0.0, {}), UnsupportedCase);
}
