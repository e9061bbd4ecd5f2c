#pragma once

// Brute-force numerical counterparts of the closed forms: tensor-product
// Newton-Cotes quadrature of overlaps and moments, and a direct 4-D
// marginalization of the two-particle joint density. Nothing here calls the
// analytic overlap.

#include <complex>
#include <cstddef>
#include <vector>

#include "pigeonhole/branch_algebra.hpp"
#include "pigeonhole/density_engine.hpp"
#include "pigeonhole/gaussian_modes.hpp"

namespace pigeonhole {

enum class QuadratureRule { trapezoid, simpson };

enum class Precision {
    double_precision,
    extended,   ///< __float128 integrand and accumulation
    automatic,  ///< double, retried in extended precision when |result| < 1e-6
};

struct QuadratureSpec {
    QuadratureRule rule = QuadratureRule::simpson;
    double lo = -10.0;  ///< same range on both axes, units of sigma
    double hi = 10.0;
    std::size_t points = 129;  ///< per axis
    Precision precision = Precision::automatic;

    double step() const { return (hi - lo) / static_cast<double>(points - 1); }
    double node(std::size_t i) const { return lo + static_cast<double>(i) * step(); }
    /// Composite-rule weights in units of the step.
    std::vector<double> weights() const;
    void validate() const;
    /// Throws unless `center` sits at least 6 sigma inside the range.
    void require_inside(const Vec2& center) const;
};

std::complex<double> numeric_overlap(const GaussianMode& a, const GaussianMode& b,
                                     const QuadratureSpec& spec = {});

/// Marginal density of particle 1 from the explicit two-particle amplitude,
/// integrated over particle 2 on the spec's grid. The result is sampled on
/// that same grid and normalized like every DensityGrid.
DensityGrid numeric_marginal_two_particle(const DetectorPattern& pattern, double chi,
                                          const InteractionConfig& config,
                                          const QuadratureSpec& spec = {},
                                          unsigned threads = 0);

/// First moments of a grid using the composite rule's weights.
Vec2 numeric_expectation(const DensityGrid& grid,
                         QuadratureRule rule = QuadratureRule::simpson);

}  // namespace pigeonhole
