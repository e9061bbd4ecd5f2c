#pragma once

// Physical-unit estimates for an electron version of the experiment. All
// quantities are SI (metres, kilograms, seconds, radians, joules).

#include <string>
#include <vector>

namespace pigeonhole {

/// CODATA 2018 values.
struct PhysicalConstants {
    double planck = 6.62607015e-34;          // J s
    double hbar = planck / (2.0 * 3.14159265358979323846);  // J s
    double electron_mass = 9.1093837015e-31;  // kg
    double elementary_charge = 1.602176634e-19;  // C
    double vacuum_permittivity = 8.8541878128e-12;  // F/m
    double bohr_radius = 5.29177210903e-11;  // m, tabulated; formulas use derived_bohr_radius()
    double speed_of_light = 299792458.0;     // m/s

    /// a0 rebuilt from hbar, m_e, e and epsilon_0.
    double derived_bohr_radius() const;
};

struct BeamParameters {
    double path_length = 0.0;      ///< ell
    double wavelength = 0.0;       ///< lambda, along the beam
    double beam_width = 0.0;       ///< sigma at the detector
    double beam_separation = 0.0;  ///< r
    double particle_mass = 0.0;
    double particle_charge = 0.0;
};

struct InteractionPhysics {
    double potential_time = 0.0;     ///< Delta V * t, J s
    double d = 0.0;                  ///< Delta r / sigma
    double interaction_phase = 0.0;  ///< Delta theta_i, rad
    double deflection = 0.0;         ///< Delta r
};

struct DesignReport {
    BeamParameters beam;
    InteractionPhysics interaction;
    double kinetic_energy_ev = 0.0;
    std::vector<std::string> warnings;
};

/// Narrowest detector-plane width for path length ell and wavelength lambda.
double sigma_min(double path_length, double wavelength);
/// Arrival angle of a beam pushed sideways by Delta r over a parabolic path.
double deflection_angle(double delta_r, double path_length);
/// Tilt phase at distance s across a beam deflected by d sigma.
double geometric_phase(double s, double sigma, double d);
/// Interaction-energy phase (r / sigma) * d.
double interaction_phase(double r, double sigma, double d);

struct CoulombStrength {
    double d;
    double deflection;  ///< Delta r = sigma * d
};

/// Pairwise Coulomb deflection strength d = (sigma/r)^2 * sigma / (2 a0).
CoulombStrength coulomb_strength(double sigma, double r, const PhysicalConstants& k = {});

/// Delta r from the raw constants, (1/2)(m e^2 / 4 pi eps0 hbar^2)(ell lambda)^2 / (4 pi^2 r^2).
double coulomb_deflection_from_beam(double path_length, double wavelength, double r,
                                    const PhysicalConstants& k = {});

/// Relativistic de Broglie wavelength of an electron of the given kinetic energy.
double electron_wavelength(double kinetic_energy_ev, const PhysicalConstants& k = {});
double electron_kinetic_energy(double wavelength, const PhysicalConstants& k = {});

/// Non-relativistic de Broglie wavelength, for reporting the correction size.
double electron_wavelength_nonrelativistic(double kinetic_energy_ev,
                                           const PhysicalConstants& k = {});

/// Electron beam design reaching interaction strength d_max at separation
/// r = r_over_sigma * sigma. Lambda starts from `kinetic_energy_ev` and is
/// shortened if needed to keep ell >= 100 sigma. Throws InfeasibleDesign
/// when lambda would drop below 1e-14 m or ell exceed 1 m.
DesignReport electron_design_point(double r_over_sigma, double d_max,
                                   const PhysicalConstants& k = {},
                                   double kinetic_energy_ev = 40e3);

/// {sigma_m, r_m, d, delta_r_m, lambda_m, ell_m, theta_i_rad, warnings[]}
std::string to_json(const DesignReport& report);

}  // namespace pigeonhole
