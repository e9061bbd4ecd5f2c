#include "pigeonhole/gaussian_modes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "pigeonhole/errors.hpp"

namespace pigeonhole {

const char* to_string(PhaseModel m) {
    switch (m) {
        case PhaseModel::none: return "none";
        case PhaseModel::geometric: return "geometric";
        case PhaseModel::geometric_plus_interaction: return "full";
    }
    return "?";
}

PhaseModel parse_phase_model(const char* text) {
    if (std::strcmp(text, "none") == 0) return PhaseModel::none;
    if (std::strcmp(text, "geometric") == 0) return PhaseModel::geometric;
    if (std::strcmp(text, "full") == 0 || std::strcmp(text, "geometric_plus_interaction") == 0) {
        return PhaseModel::geometric_plus_interaction;
    }
    throw InvalidInput(std::string("unknown phase model '") + text + "'");
}

void InteractionConfig::validate() const {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidInput("interaction strength d must be >= 0");
    if (has_interaction_phase(phase_model) && !(k > 0.0)) {
        throw InvalidInput("phase ratio k = r/sigma must be > 0 with the interaction phase on");
    }
    if (!std::isfinite(k) || k < 0.0) throw InvalidInput("phase ratio k must be finite and >= 0");
}

DeflectionGeometry::DeflectionGeometry(std::size_t n) : n_(n), repulsion_(n * n) {
    if (n == 0) throw InvalidInput("geometry needs at least one particle");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const Vec2 away = beam_position(i) - beam_position(j);
            repulsion_[i * n + j] = global_to_local(i, (1.0 / norm(away)) * away);
        }
    }
}

double DeflectionGeometry::frame_angle(std::size_t particle) const {
    return -2.0 * std::numbers::pi * static_cast<double>(particle) / static_cast<double>(n_);
}

Vec2 DeflectionGeometry::beam_position(std::size_t particle) const {
    return rotate({0.0, 1.0}, frame_angle(particle));
}

Vec2 DeflectionGeometry::local_to_global(std::size_t particle, const Vec2& v) const {
    return rotate(v, frame_angle(particle));
}

Vec2 DeflectionGeometry::global_to_local(std::size_t particle, const Vec2& v) const {
    return rotate(v, -frame_angle(particle));
}

Vec2 DeflectionGeometry::repulsion(std::size_t particle, std::size_t other) const {
    if (particle >= n_ || other >= n_) throw InvalidInput("particle index out of range");
    if (particle == other) throw InvalidInput("a particle does not repel itself");
    return repulsion_[particle * n_ + other];
}

GaussianMode mode_for(std::size_t particle, const std::vector<std::size_t>& companions,
                      const InteractionConfig& config, const DeflectionGeometry& geometry) {
    if (std::find(companions.begin(), companions.end(), particle) != companions.end()) {
        throw InvalidInput("particle " + std::to_string(particle + 1) +
                           " cannot be its own companion");
    }
    if (companions.size() >= geometry.size() && geometry.size() > 0) {
        throw InvalidInput("too many companions for the geometry");
    }
    GaussianMode m;
    for (std::size_t j : companions) m.center += config.d * geometry.repulsion(particle, j);
    if (has_geometric_phase(config.phase_model)) m.phase_gradient = 2.0 * m.center;
    if (has_interaction_phase(config.phase_model)) {
        m.phase_offset = -static_cast<double>(companions.size()) * config.k * config.d;
    }
    return m;
}

std::complex<double> overlap(const GaussianMode& a, const GaussianMode& b) {
    // a*(r) b(r) = exp(-|r-m|^2/2 - |dc|^2/8) exp(i(q.r + ob - oa)), q = ga - gb,
    // and the plane-wave Gaussian integral gives exp(i q.m - |q|^2/2).
    const Vec2 dc = a.center - b.center;
    const Vec2 q = a.phase_gradient - b.phase_gradient;
    const Vec2 mid = 0.5 * (a.center + b.center);
    const double log_mag = -norm2(dc) / 8.0 - norm2(q) / 2.0;
    const double phase = dot(q, mid) + b.phase_offset - a.phase_offset;
    return std::polar(std::exp(log_mag), phase);
}

std::complex<double> evaluate(const GaussianMode& mode, const Vec2& r) {
    const double mag = std::exp(-norm2(r - mode.center) / 4.0);
    return std::polar(mag, mode.phase_offset - dot(mode.phase_gradient, r));
}

}  // namespace pigeonhole
