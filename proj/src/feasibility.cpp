#include "pigeonhole/feasibility.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "json.hpp"

#include "pigeonhole/errors.hpp"

namespace pigeonhole {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinRatioEllSigma = 100.0;
constexpr double kMinWavelength = 1e-14;
constexpr double kMaxPathLength = 1.0;
constexpr double kChallengingDeflection = 1e-12;
constexpr double kDistinguishableRatio = 5.0;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidInput(std::string(name) + " must be positive and finite");
    }
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

double PhysicalConstants::derived_bohr_radius() const {
    return 4.0 * kPi * vacuum_permittivity * hbar * hbar /
           (electron_mass * elementary_charge * elementary_charge);
}

double sigma_min(double path_length, double wavelength) {
    require_positive(path_length, "path length");
    require_positive(wavelength, "wavelength");
    return std::sqrt(path_length * wavelength / (2.0 * kPi));
}

double deflection_angle(double delta_r, double path_length) {
    require_positive(delta_r, "deflection");
    require_positive(path_length, "path length");
    return 2.0 * delta_r / path_length;
}

double geometric_phase(double s, double sigma, double d) {
    require_positive(sigma, "beam width");
    return 2.0 * (s / sigma) * d;
}

double interaction_phase(double r, double sigma, double d) {
    require_positive(r, "beam separation");
    require_positive(sigma, "beam width");
    return (r / sigma) * d;
}

CoulombStrength coulomb_strength(double sigma, double r, const PhysicalConstants& k) {
    require_positive(sigma, "beam width");
    require_positive(r, "beam separation");
    const double d = (sigma * sigma) / (r * r) * sigma / (2.0 * k.derived_bohr_radius());
    return {d, sigma * d};
}

double coulomb_deflection_from_beam(double path_length, double wavelength, double r,
                                    const PhysicalConstants& k) {
    require_positive(path_length, "path length");
    require_positive(wavelength, "wavelength");
    require_positive(r, "beam separation");
    const double e2 = k.elementary_charge * k.elementary_charge;
    const double coupling = k.electron_mass * e2 / (4.0 * kPi * k.vacuum_permittivity * k.hbar * k.hbar);
    const double ll = path_length * wavelength;
    return 0.5 * coupling * ll * ll / (4.0 * kPi * kPi * r * r);
}

double electron_wavelength(double kinetic_energy_ev, const PhysicalConstants& k) {
    require_positive(kinetic_energy_ev, "kinetic energy");
    const double e = kinetic_energy_ev * k.elementary_charge;
    const double rest = k.electron_mass * k.speed_of_light * k.speed_of_light;
    const double pc = std::sqrt(e * (e + 2.0 * rest));
    return k.planck * k.speed_of_light / pc;
}

double electron_kinetic_energy(double wavelength, const PhysicalConstants& k) {
    require_positive(wavelength, "wavelength");
    const double pc = k.planck * k.speed_of_light / wavelength;
    const double rest = k.electron_mass * k.speed_of_light * k.speed_of_light;
    return (std::sqrt(pc * pc + rest * rest) - rest) / k.elementary_charge;
}

double electron_wavelength_nonrelativistic(double kinetic_energy_ev, const PhysicalConstants& k) {
    require_positive(kinetic_energy_ev, "kinetic energy");
    const double e = kinetic_energy_ev * k.elementary_charge;
    return k.planck / std::sqrt(2.0 * k.electron_mass * e);
}

DesignReport electron_design_point(double r_over_sigma, double d_max, const PhysicalConstants& k,
                                   double kinetic_energy_ev) {
    if (!(r_over_sigma >= 1.0)) throw InvalidInput("r/sigma must be at least 1");
    require_positive(d_max, "d_max");

    DesignReport rep;
    auto& beam = rep.beam;
    // d = sigma / (2 a0 (r/sigma)^2), solved for sigma.
    beam.beam_width = 2.0 * k.derived_bohr_radius() * r_over_sigma * r_over_sigma * d_max;
    beam.beam_separation = r_over_sigma * beam.beam_width;
    beam.particle_mass = k.electron_mass;
    beam.particle_charge = -k.elementary_charge;

    beam.wavelength = electron_wavelength(kinetic_energy_ev, k);
    beam.path_length = 2.0 * kPi * beam.beam_width * beam.beam_width / beam.wavelength;
    if (beam.path_length < kMinRatioEllSigma * beam.beam_width) {
        beam.path_length = kMinRatioEllSigma * beam.beam_width;
        beam.wavelength = 2.0 * kPi * beam.beam_width / kMinRatioEllSigma;
        rep.warnings.push_back("wavelength shortened to " + sci(beam.wavelength) +
                               " m to keep ell >= 100 sigma; needs electrons of about " +
                               sci(electron_kinetic_energy(beam.wavelength, k) / 1e3) + " keV");
    }
    if (beam.wavelength < kMinWavelength || beam.path_length > kMaxPathLength) {
        throw InfeasibleDesign("no (lambda, ell) pair with lambda >= 1e-14 m and ell <= 1 m gives sigma = " +
                               sci(beam.beam_width) + " m");
    }
    rep.kinetic_energy_ev = electron_kinetic_energy(beam.wavelength, k);
    const double nonrel = electron_wavelength_nonrelativistic(rep.kinetic_energy_ev, k);
    rep.warnings.push_back("relativistic wavelength; the non-relativistic value differs by " +
                           sci(100.0 * (nonrel - beam.wavelength) / beam.wavelength) + "%");

    auto& inter = rep.interaction;
    const auto strength = coulomb_strength(beam.beam_width, beam.beam_separation, k);
    inter.d = strength.d;
    inter.deflection = strength.deflection;
    inter.interaction_phase = interaction_phase(beam.beam_separation, beam.beam_width, inter.d);
    inter.potential_time = k.hbar * inter.interaction_phase;

    if (r_over_sigma < kDistinguishableRatio) {
        rep.warnings.push_back("r/sigma = " + sci(r_over_sigma) +
                               " is below 5; beams overlap and the particles are not distinguishable");
    }
    if (inter.interaction_phase > 2.0 * kPi) {
        rep.warnings.push_back("interaction phase (r/sigma)*d = " + sci(inter.interaction_phase) +
                               " rad exceeds 2 pi");
    }
    if (inter.deflection < kChallengingDeflection) {
        rep.warnings.push_back("deflection " + sci(inter.deflection) +
                               " m is below 1e-12 m: extremely challenging to resolve");
    }
    return rep;
}

std::string to_json(const DesignReport& report) {
    nlohmann::ordered_json j;
    j["sigma_m"] = report.beam.beam_width;
    j["r_m"] = report.beam.beam_separation;
    j["d"] = report.interaction.d;
    j["delta_r_m"] = report.interaction.deflection;
    j["lambda_m"] = report.beam.wavelength;
    j["ell_m"] = report.beam.path_length;
    j["theta_i_rad"] = report.interaction.interaction_phase;
    j["warnings"] = report.warnings;
    return j.dump(2);
}

}  // namespace pigeonhole
