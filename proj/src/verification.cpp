#include "pigeonhole/verification.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>

#include "json.hpp"
#include "pigeonhole/branch_algebra.hpp"
#include "pigeonhole/density_engine.hpp"
#include "pigeonhole/gaussian_modes.hpp"
#include "pigeonhole/observables.hpp"
#include "pigeonhole/quadrature_oracle.hpp"

namespace pigeonhole {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
const double kSqrt3 = std::numbers::sqrt3;

struct PhaseCase {
    PhaseModel model;
    double k;
};

const std::vector<double> kOracleD{0.0, 0.25, 1.0, 3.0};
const std::vector<PhaseCase> kPhaseCases{
    {PhaseModel::none, 0.0}, {PhaseModel::geometric, 0.0}, {PhaseModel::geometric_plus_interaction, 5.0}};

class Recorder {
public:
    explicit Recorder(double scale) : scale_(scale) {}

    void check(const std::string& name, double error, double tolerance, std::string detail = {}) {
        const double tol = tolerance * scale_;
        report.checks.push_back({name, std::isfinite(error) && error <= tol, error, tol, std::move(detail)});
    }
    /// Runs `body`, recording any exception as a failure of `name`.
    void guarded(const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            report.checks.push_back({name, false, INFINITY, 0.0, e.what()});
        }
    }

    VerificationReport report;

private:
    double scale_;
};

double max_abs_diff(const std::vector<Complex>& got, const std::vector<Complex>& want) {
    double err = got.size() == want.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i) {
        err = std::max(err, std::abs(got[i] - want[i]));
    }
    return err;
}

std::vector<Complex> coefficients(const PostSelectedState& s) {
    std::vector<Complex> out;
    for (const auto& g : s.groups) out.push_back(g.coefficient);
    return out;
}

// Coefficients in the order {123}, {12|3}, {13|2}, {1|23}.
std::vector<Complex> three_particle_order(const PostSelectedState& s) {
    std::vector<Complex> out;
    for (std::uint32_t code : {0b000u, 0b100u, 0b010u, 0b110u}) {
        out.push_back(s.group(CompanionStructure::from_code(code, 3)).coefficient);
    }
    return out;
}

void branch_checks(Recorder& rec) {
    const Complex one_minus_i{1.0, -1.0};
    rec.guarded("branch.aaa_golden", [&] {
        const auto s = expand_postselected(3, DetectorPattern::parse("AAA"), kHalfPi);
        rec.check("branch.aaa_golden",
                  max_abs_diff(three_particle_order(s),
                               {one_minus_i, -one_minus_i, -one_minus_i, -one_minus_i}),
                  0.0);
    });
    rec.guarded("branch.pre_detection_phases", [&] {
        double err = 0.0;
        for (std::uint32_t bits = 0; bits < 8; ++bits) {
            const ArmAssignment a{bits, 3};
            Complex want{1.0, 0.0};
            for (std::size_t r = 0; r < a.count(Arm::R); ++r) want *= Complex{0.0, 1.0};
            err = std::max(err, std::abs(pre_detection_coefficient(a, kHalfPi) - want));
        }
        rec.check("branch.pre_detection_phases", err, 0.0);
    });
    rec.guarded("branch.two_particle_cancellation", [&] {
        const auto s = expand_postselected(2, DetectorPattern::parse("AA"), kHalfPi);
        rec.check("branch.two_particle_cancellation",
                  max_abs_diff(coefficients(s), {Complex{0.0, 0.0}, Complex{0.0, 2.0}}), 0.0);
    });
    rec.guarded("branch.abb_derived_signs", [&] {
        const auto s = expand_postselected(3, DetectorPattern::parse("ABB"), kHalfPi);
        rec.check("branch.abb_derived_signs",
                  max_abs_diff(three_particle_order(s),
                               {one_minus_i, one_minus_i, one_minus_i, -one_minus_i}),
                  0.0, "signs (+,+,+,-) over {123}, {12|3}, {13|2}, {1|23}");
    });
    rec.guarded("branch.classical_php", [&] {
        double failures = 0.0;
        for (std::uint32_t bits = 0; bits < 8; ++bits) {
            if (!verify_classical_php(ArmAssignment{bits, 3})) failures += 1.0;
        }
        rec.check("branch.classical_php", failures, 0.0);
    });
}

void overlap_checks(Recorder& rec) {
    const QuadratureSpec spec{QuadratureRule::simpson, -18.0, 18.0, 321, Precision::automatic};
    const auto state = expand_postselected(3, DetectorPattern::parse("AAA"), kHalfPi);
    const DeflectionGeometry geometry(3);
    double oracle_err = 0.0, herm_err = 0.0, cs_excess = 0.0;
    rec.guarded("overlap.oracle", [&] {
        for (double d : kOracleD) {
            for (const auto& pc : kPhaseCases) {
                const InteractionConfig cfg{d, pc.k, pc.model, false};
                for (std::size_t p = 0; p < 3; ++p) {
                    std::vector<GaussianMode> modes;
                    for (const auto& g : state.groups) {
                        modes.push_back(mode_for(p, g.structure.companions(p), cfg, geometry));
                    }
                    for (std::size_t g = 0; g < modes.size(); ++g) {
                        for (std::size_t h = g; h < modes.size(); ++h) {
                            const Complex exact = overlap(modes[g], modes[h]);
                            const Complex numeric = numeric_overlap(modes[g], modes[h], spec);
                            oracle_err = std::max(oracle_err, std::abs(numeric - exact) / std::abs(exact));
                            herm_err = std::max(herm_err,
                                                std::abs(overlap(modes[h], modes[g]) - std::conj(exact)));
                            cs_excess = std::max(cs_excess, std::abs(exact) - 1.0);
                        }
                    }
                }
            }
        }
        rec.check("overlap.oracle", oracle_err, 1e-8, "relative, Simpson 321 pts on [-18, 18]");
        rec.check("overlap.hermiticity", herm_err, 1e-15);
        rec.check("overlap.cauchy_schwarz", std::max(cs_excess, 0.0), 1e-15);
    });
}

void density_checks(Recorder& rec, unsigned threads) {
    const auto aaa = expand_postselected(3, DetectorPattern::parse("AAA"), kHalfPi);
    rec.guarded("density.closed_form", [&] {
        double err = 0.0;
        const GridSpec grid = GridSpec::square(11.0, 65);
        for (double d : {0.0, 0.1, 0.25, 1.0, 3.0}) {
            for (const auto& pc : kPhaseCases) {
                const InteractionConfig cfg{d, pc.k, pc.model, false};
                const auto dens = probability_density(build_terms(aaa, cfg, 0), grid, threads);
                std::vector<double> ref(dens.values.size());
                double total = 0.0;
                for (std::size_t j = 0; j < grid.resolution; ++j) {
                    for (std::size_t i = 0; i < grid.resolution; ++i) {
                        ref[j * grid.resolution + i] = closed_form_reference(
                            aaa.pattern, 0, grid.x(i), grid.y(j), cfg);
                        total += ref[j * grid.resolution + i];
                    }
                }
                const double scale = 1.0 / (total * grid.cell_area());
                for (std::size_t n = 0; n < ref.size(); ++n) {
                    const double want = ref[n] * scale;
                    err = std::max(err, std::abs(dens.values[n] - want) / std::abs(want));
                }
            }
        }
        rec.check("density.closed_form", err, 1e-9, "relative pointwise, 65x65 on [-11, 11]");
    });
    rec.guarded("moments.grid_vs_analytic", [&] {
        double grid_err = 0.0, oracle_err = 0.0;
        for (double d : {0.0, 0.25, 1.0, 3.0}) {
            for (const auto& pc : kPhaseCases) {
                const InteractionConfig cfg{d, pc.k, pc.model, false};
                const auto terms = build_terms(aaa, cfg, 0);
                const GridSpec grid = covering_grid(terms, 257);
                const auto dens = probability_density(terms, grid, threads);
                const Vec2 exact = analytic_expectation(terms);
                grid_err = std::max(grid_err, norm(grid_mean(dens) - exact));
                oracle_err = std::max(oracle_err, norm(numeric_expectation(dens) - exact));
            }
        }
        rec.check("moments.grid_vs_analytic", grid_err, 1e-6);
        rec.check("moments.oracle_vs_analytic", oracle_err, 1e-6);
    });
    rec.guarded("two_particle.marginal", [&] {
        const QuadratureSpec spec{QuadratureRule::simpson, -10.0, 10.0, 65, Precision::double_precision};
        double same_err = 0.0, split_err = 0.0;
        for (double d : {0.25, 1.0, 3.0}) {
            const InteractionConfig cfg{d, 0.0, PhaseModel::none, false};
            const auto aa = numeric_marginal_two_particle(DetectorPattern::parse("AA"), kHalfPi, cfg, spec, threads);
            same_err = std::max(same_err, norm(numeric_expectation(aa)));
            const auto ab = numeric_marginal_two_particle(DetectorPattern::parse("AB"), kHalfPi, cfg, spec, threads);
            split_err = std::max(split_err, norm(numeric_expectation(ab) - Vec2{0.0, d}));
        }
        rec.check("two_particle.same_detector_undeviated", same_err, 1e-6);
        rec.check("two_particle.split_detectors_deviated", split_err, 1e-6);
    });
}

void curve_checks(Recorder& rec, unsigned threads) {
    rec.guarded("curve.slopes", [&] {
        SweepConfig aaa;
        const std::vector<double> small{0.0, 0.005, 0.01};
        const auto curve = sweep(aaa, small, threads);
        rec.check("curve.aaa_slope_zero", std::abs(slope_at_zero(curve, 0)), 1e-3);
        SweepConfig inc = aaa;
        inc.incoherent = true;
        rec.check("curve.incoherent_slope",
                  std::abs(slope_at_zero(sweep(inc, small, threads), 0) - kSqrt3 / 2.0), 1e-6);
        SweepConfig abb = aaa;
        abb.pattern = DetectorPattern::parse("ABB");
        rec.check("curve.abb_slope_twice_incoherent",
                  std::abs(slope_at_zero(sweep(abb, small, threads), 0) / kSqrt3 - 1.0), 0.02);
    });
    rec.guarded("curve.large_d", [&] {
        const auto s = expand_postselected(3, DetectorPattern::parse("AAA"), kHalfPi);
        const InteractionConfig cfg{6.0, 0.0, PhaseModel::none, false};
        rec.check("curve.aaa_incoherent_at_d6",
                  std::abs(analytic_expectation(s, cfg, 0).y - incoherent_expectation(s, cfg, 0).y), 1e-3);
    });
    rec.guarded("curve.abb_spectators", [&] {
        const auto s = expand_postselected(3, DetectorPattern::parse("ABB"), kHalfPi);
        double err = 0.0;
        for (double d : {0.1, 0.5, 1.0, 2.0}) {
            const InteractionConfig cfg{d, 0.0, PhaseModel::none, false};
            for (std::size_t p : {1u, 2u}) {
                err = std::max(err, std::abs(analytic_expectation(s, cfg, p).y -
                                             incoherent_expectation(s, cfg, p).y));
            }
        }
        rec.check("curve.abb_spectators_incoherent", err, 1e-6);
    });
    rec.guarded("momentum.residual", [&] {
        double err = 0.0;
        for (const char* pattern : {"AAA", "ABB"}) {
            SweepConfig c;
            c.pattern = DetectorPattern::parse(pattern);
            for (double d : {0.0, 0.1, 0.5, 2.0}) err = std::max(err, norm(momentum_sum(c, d)));
        }
        rec.check("momentum.residual", err, 1e-9);
    });
}

}  // namespace

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["passed"] = passed();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json item{{"name", c.name}, {"passed", c.passed}, {"tolerance", c.tolerance}};
        item["error"] = std::isfinite(c.error) ? nlohmann::ordered_json(c.error) : nlohmann::ordered_json(nullptr);
        if (!c.detail.empty()) item["detail"] = c.detail;
        arr.push_back(item);
    }
    j["checks"] = arr;
    return j.dump(2) + "\n";
}

VerificationOptions VerificationOptions::from_environment() {
    VerificationOptions o;
    if (const char* env = std::getenv("PIGEONHOLE_VERIFY_TOLERANCE_SCALE")) {
        o.tolerance_scale = std::strtod(env, nullptr);
    }
    return o;
}

VerificationReport run_verification(const VerificationOptions& options) {
    Recorder rec(options.tolerance_scale);
    branch_checks(rec);
    overlap_checks(rec);
    if (!options.quick) {
        density_checks(rec, options.threads);
        curve_checks(rec, options.threads);
    }
    return std::move(rec.report);
}

}  // namespace pigeonhole
