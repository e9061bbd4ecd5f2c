#pragma once

#include <cstddef>
#include <vector>

#include "pigeonhole/branch_algebra.hpp"
#include "pigeonhole/density_engine.hpp"
#include "pigeonhole/gaussian_modes.hpp"
#include "pigeonhole/vec2.hpp"

namespace pigeonhole {

/// Everything except the interaction strength needed to reproduce a curve.
struct SweepConfig {
    DetectorPattern pattern = DetectorPattern::parse("AAA");
    double chi = 1.5707963267948966;  // pi/2
    double k = 5.0;
    PhaseModel phase_model = PhaseModel::none;
    bool ensemble_spread = false;
    bool incoherent = false;  ///< drop every cross term

    InteractionConfig at(double d) const { return {d, k, phase_model, ensemble_spread}; }
};

/// Mean displacement of every particle, in its own local frame, per d.
struct SweepCurve {
    SweepConfig config;
    std::vector<double> d;
    std::vector<std::vector<Vec2>> means;  ///< means[d index][particle]

    std::size_t particle_count() const { return config.pattern.size(); }
};

/// First moments of the normalized grid (sum * cell area).
Vec2 grid_mean(const DensityGrid& grid);

/// Mean position from the grid-sampled density.
Vec2 expectation(const PostSelectedState& state, const InteractionConfig& config,
                 std::size_t particle, const GridSpec& grid, unsigned threads = 0);

/// Exact first moments from Gaussian moment integrals:
/// int phi_g* phi_h r = 2 pi S (m + i q), with m the centre midpoint and q the
/// lag-gradient difference.
Vec2 analytic_expectation(const DensityTerms& terms, bool coherent = true);
Vec2 analytic_expectation(const PostSelectedState& state, const InteractionConfig& config,
                          std::size_t particle);

/// Mean of the incoherent density: |c_g|^2-weighted average of the centers.
Vec2 incoherent_expectation(const PostSelectedState& state, const InteractionConfig& config,
                            std::size_t particle);

SweepCurve sweep(const SweepConfig& config, const std::vector<double>& d_grid,
                 unsigned threads = 0);

/// Evenly spaced grid [0, d_max] with the given step (end point included when
/// it lands on the grid).
std::vector<double> d_range(double d_max, double step);

/// Sum over all particles of the mean displacement, in the shared global frame.
Vec2 momentum_sum(const SweepConfig& config, double d);

/// d<y>/dd at d = 0 from the two smallest positive d values, extrapolated
/// assuming an error series in even powers of d.
double slope_at_zero(const SweepCurve& curve, std::size_t particle);

}  // namespace pigeonhole
