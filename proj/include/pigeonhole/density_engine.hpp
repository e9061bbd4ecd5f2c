#pragma once

// Single-particle marginal density of a post-selected state.
//
// With the joint amplitude Phi = sum_g c_g prod_j phi_{g,j}(r_j), integrating
// |Phi|^2 over every particle except `particle` leaves
//
//     P(r) = sum_{g,h} c_g* c_h phi_g*(r) phi_h(r) prod_{j != particle} S_j(g, h)
//
// where S_j(g, h) = <phi_{g,j}|phi_{h,j}>. The g == h terms are the incoherent
// diagonal; each unordered g < h pair contributes 2 Re(prefactor phi_g* phi_h).

#include <complex>
#include <cstddef>
#include <vector>

#include "pigeonhole/branch_algebra.hpp"
#include "pigeonhole/gaussian_modes.hpp"
#include "pigeonhole/vec2.hpp"

namespace pigeonhole {

/// Rectangular sampling grid, inclusive of both end points.
struct GridSpec {
    double x_min = -8.0;
    double x_max = 8.0;
    double y_min = -8.0;
    double y_max = 8.0;
    std::size_t resolution = 257;  ///< points per axis

    static GridSpec square(double half_width, std::size_t resolution);

    double dx() const { return (x_max - x_min) / static_cast<double>(resolution - 1); }
    double dy() const { return (y_max - y_min) / static_cast<double>(resolution - 1); }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
    double y(std::size_t j) const { return y_min + static_cast<double>(j) * dy(); }
    double cell_area() const { return dx() * dy(); }
    bool contains(const Vec2& p, double margin) const;
    void validate() const;
};

/// Normalized so that sum(values) * cell_area == 1. Row-major: index
/// j * resolution + i holds the point (x(i), y(j)).
struct DensityGrid {
    GridSpec spec;
    std::vector<double> values;
    /// Fraction of the full-plane mass that fell on the grid before normalization.
    double captured_mass = 1.0;
    /// Set when captured_mass < 1 - 1e-6.
    bool mass_warning = false;

    double at(std::size_t i, std::size_t j) const { return values[j * spec.resolution + i]; }
};

struct DiagonalTerm {
    CompanionStructure structure;
    GaussianMode mode;
    double weight;  ///< |c_g|^2
};

struct CrossTerm {
    std::size_t first;   ///< index into DensityTerms::diagonal
    std::size_t second;  ///< > first
    std::complex<double> prefactor;
    /// Net interaction phase between the two groups, summed over all particles.
    double interaction_phase;
};

struct DensityTerms {
    std::size_t particle = 0;
    std::vector<DiagonalTerm> diagonal;
    std::vector<CrossTerm> cross;

    /// Weight multiplying phi_g* phi_h; (h, g) is the conjugate of (g, h).
    std::complex<double> prefactor(std::size_t g, std::size_t h) const;
    /// Integral of the unnormalized density over the whole plane.
    double total_mass(bool coherent = true) const;
    /// Largest |center| among groups with nonzero weight.
    double max_center_extent() const;
};

DensityTerms build_terms(const PostSelectedState& state, const InteractionConfig& config,
                         std::size_t particle);

/// Unnormalized density at one point.
double density_at(const DensityTerms& terms, const Vec2& r, bool coherent = true);

/// Smallest square grid (half-width at least 8) covering every peak with a
/// 6 sigma margin.
GridSpec covering_grid(const DensityTerms& terms, std::size_t resolution = 257);

DensityGrid probability_density(const DensityTerms& terms, const GridSpec& grid,
                                unsigned threads = 0);
DensityGrid incoherent_density(const DensityTerms& terms, const GridSpec& grid,
                               unsigned threads = 0);

/// Literal evaluation of the printed three-particle, all-at-D_A density of
/// particle 1 (unnormalized). PhaseModel::geometric is the full-phase form
/// with k = 0. Any other pattern or particle throws UnsupportedCase.
double closed_form_reference(const DetectorPattern& pattern, std::size_t particle, double x,
                             double y, const InteractionConfig& config);

}  // namespace pigeonhole
