#pragma once

// Detector-plane wavepackets. Every length is in units of the beam width
// sigma, so an undeviated mode is exp(-|r|^2/4) and |mode|^2 has unit
// standard deviation per axis.
//
// Phases follow the lag convention: a deflected component arrives along a
// longer path, so its wavefunction carries exp(-i * lag). `phase_gradient` is
// the gradient of that lag across the beam (2 * center when the tilt phase is
// on), and `phase_offset` is the constant phase of the mode itself
// (-companions * k * d when the interaction phase is on).

#include <complex>
#include <cstddef>
#include <vector>

#include "pigeonhole/vec2.hpp"

namespace pigeonhole {

enum class PhaseModel {
    none,                        ///< real Gaussians; no path-dependent phase
    geometric,                   ///< tilt phase across deflected beams only
    geometric_plus_interaction,  ///< tilt phase plus interaction-energy phase
};

const char* to_string(PhaseModel m);
/// Accepts "none", "geometric", and "full" / "geometric_plus_interaction".
PhaseModel parse_phase_model(const char* text);

constexpr bool has_geometric_phase(PhaseModel m) { return m != PhaseModel::none; }
constexpr bool has_interaction_phase(PhaseModel m) {
    return m == PhaseModel::geometric_plus_interaction;
}

struct InteractionConfig {
    double d = 0.0;  ///< pairwise deflection in units of sigma
    double k = 0.0;  ///< beam separation over beam width, r / sigma
    PhaseModel phase_model = PhaseModel::none;
    bool ensemble_spread = false;

    /// Throws InvalidInput unless d >= 0 and (k > 0 whenever the interaction
    /// phase is on).
    void validate() const;
};

/// Beams at the vertices of a regular N-gon (the equilateral triangle for
/// three particles). Particle 0 sits on the +y axis and the particles follow
/// clockwise. Each particle's local frame has y pointing away from the centre.
class DeflectionGeometry {
public:
    explicit DeflectionGeometry(std::size_t n);

    std::size_t size() const { return n_; }
    /// Unit vector, in `particle`'s local frame, along which `other` pushes it.
    Vec2 repulsion(std::size_t particle, std::size_t other) const;
    Vec2 local_to_global(std::size_t particle, const Vec2& v) const;
    Vec2 global_to_local(std::size_t particle, const Vec2& v) const;
    /// Angle from the global frame to `particle`'s local frame.
    double frame_angle(std::size_t particle) const;
    /// Beam position (unit circumradius) in the global frame.
    Vec2 beam_position(std::size_t particle) const;

private:
    std::size_t n_;
    std::vector<Vec2> repulsion_;  // n_ * n_, row = particle
};

struct GaussianMode {
    Vec2 center;
    Vec2 phase_gradient;  ///< lag gradient, radians per sigma
    double phase_offset = 0.0;
};

GaussianMode mode_for(std::size_t particle, const std::vector<std::size_t>& companions,
                      const InteractionConfig& config, const DeflectionGeometry& geometry);

/// Closed-form inner product <a|b> of two unit-width modes, normalized so that
/// overlap(a, a) == 1.
std::complex<double> overlap(const GaussianMode& a, const GaussianMode& b);

/// Unnormalized pointwise value exp(-|r-c|^2/4) * exp(i(offset - gradient.r)).
std::complex<double> evaluate(const GaussianMode& mode, const Vec2& r);

}  // namespace pigeonhole
