#include "cli_app.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pigeonhole/branch_algebra.hpp"
#include "pigeonhole/density_engine.hpp"
#include "pigeonhole/errors.hpp"
#include "pigeonhole/feasibility.hpp"
#include "pigeonhole/observables.hpp"
#include "pigeonhole/serialization.hpp"
#include "pigeonhole/verification.hpp"

namespace pigeonhole {

namespace {

using ojson = nlohmann::ordered_json;

struct BranchOptions {
    std::string pattern = "AAA";
    std::size_t n = 0;
    double chi = std::numbers::pi / 2.0;
    bool json = false;
};

struct DensityOptions {
    std::string pattern = "AAA";
    std::size_t particle = 1;
    double chi = std::numbers::pi / 2.0;
    double d = 0.25;
    double k = 5.0;
    std::string phases = "none";
    bool ensemble = false;
    bool incoherent = false;
    std::size_t resolution = 257;
    double range = 0.0;
    std::string output;
    std::string format = "csv";
};

struct SweepOptions {
    std::string pattern = "AAA";
    double chi = std::numbers::pi / 2.0;
    double k = 5.0;
    std::string phases = "none";
    bool ensemble = false;
    bool incoherent = false;
    double d_max = 0.0;  ///< 0: 3 without phases, 1.5 with them
    double step = 0.0;   ///< 0: 0.01 without phases, 0.002 with them
    std::string output;
    std::string format = "csv";
};

struct FeasibilityOptions {
    double r_over_sigma = 5.0;
    double d_max = 0.005;
    double kinetic_energy = 40e3;
};

struct VerifyOptions {
    bool quick = false;
    double tolerance_scale = 0.0;
};

/// Opens `path` for writing, or returns `fallback` when the path is empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback, bool binary = false) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
            if (!file_) throw InvalidInput("cannot open '" + path + "' for writing");
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }
    void close() {
        if (file_.is_open()) {
            file_.close();
            if (!file_) throw InvalidInput("write failed");
        }
    }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path);
    if (!(file << text)) throw InvalidInput("cannot write '" + path + "'");
}

DetectorPattern pattern_for(const std::string& text, std::size_t n) {
    DetectorPattern p = DetectorPattern::parse(text);
    if (n == 0 || n == p.size()) return p;
    if (p.size() == 1) return DetectorPattern::uniform(n, p.at(0));
    throw InvalidInput("--n " + std::to_string(n) + " does not match pattern " + text);
}

ojson complex_json(Complex z) { return ojson{{"re", z.real() == 0.0 ? 0.0 : z.real()}, {"im", z.imag() == 0.0 ? 0.0 : z.imag()}}; }

char crowded_arm(const ArmAssignment& a) {
    if (a.count(Arm::L) >= 2) return 'L';
    if (a.count(Arm::R) >= 2) return 'R';
    return '-';
}

std::vector<std::string> branch_notes(const PostSelectedState& s) {
    std::vector<std::string> notes;
    for (const auto& g : s.groups) {
        if (g.coefficient == Complex{0.0, 0.0}) {
            notes.push_back("group " + g.structure.to_string() + " cancels at this detector pattern");
        }
    }
    if (s.n == 3 && s.pattern.to_string() == "ABB") {
        notes.push_back(
            "signs over {123}, {12|3}, {13|2}, {1|23} are (+,+,+,-); the commonly printed ABB table "
            "has the {13|2} and {1|23} signs exchanged, which the expansion does not reproduce");
    }
    return notes;
}

int cmd_branches(const BranchOptions& o, std::ostream& out) {
    const DetectorPattern pattern = pattern_for(o.pattern, o.n);
    const std::size_t n = pattern.size();
    const PostSelectedState state = expand_postselected(n, pattern, o.chi);
    const auto notes = branch_notes(state);
    if (o.json) {
        ojson j;
        j["n"] = n;
        j["pattern"] = pattern.to_string();
        j["chi"] = o.chi;
        auto groups = ojson::array();
        for (const auto& g : state.groups) {
            groups.push_back({{"group", g.structure.to_string()},
                              {"code", g.structure.code()},
                              {"coefficient", format_complex(g.coefficient)},
                              {"value", complex_json(g.coefficient)}});
        }
        j["groups"] = groups;
        auto branches = ojson::array();
        for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
            const ArmAssignment a{bits, n};
            branches.push_back({{"arms", a.to_string()},
                                {"phase_shifter", format_complex(pre_detection_coefficient(a, o.chi))},
                                {"at_pattern", format_complex(branch_coefficient(a, pattern, o.chi))},
                                {"classical_php", verify_classical_php(a)},
                                {"shared_arm", std::string(1, crowded_arm(a))}});
        }
        j["branches"] = branches;
        j["notes"] = notes;
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << render(state);
    out << "\narms phase_shifter at_pattern shared_arm\n";
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        const ArmAssignment a{bits, n};
        out << a.to_string() << ' ' << format_complex(pre_detection_coefficient(a, o.chi)) << ' '
            << format_complex(branch_coefficient(a, pattern, o.chi)) << ' ' << crowded_arm(a) << '\n';
    }
    for (const auto& note : notes) out << "note: " << note << '\n';
    return kOk;
}

std::string density_json(const DensityGrid& grid, const DensityOptions& o, const DetectorPattern& pattern) {
    ojson j;
    j["config"] = {{"pattern", pattern.to_string()},
                   {"particle", o.particle},
                   {"chi", o.chi},
                   {"d", o.d},
                   {"k", o.k},
                   {"phase_model", o.phases},
                   {"ensemble_spread", o.ensemble},
                   {"incoherent", o.incoherent}};
    const auto& s = grid.spec;
    j["grid"] = {{"x_min", s.x_min}, {"x_max", s.x_max}, {"y_min", s.y_min}, {"y_max", s.y_max},
                 {"resolution", s.resolution}};
    j["captured_mass"] = grid.captured_mass;
    j["mass_warning"] = grid.mass_warning;
    auto rows = ojson::array();
    for (std::size_t r = 0; r < s.resolution; ++r) {
        std::vector<double> row(grid.values.begin() + static_cast<std::ptrdiff_t>(r * s.resolution),
                                grid.values.begin() + static_cast<std::ptrdiff_t>((r + 1) * s.resolution));
        rows.push_back(row);
    }
    j["values"] = rows;
    return j.dump(2) + "\n";
}

int cmd_density(const DensityOptions& o, unsigned threads, std::ostream& out, std::ostream& err) {
    const DetectorPattern pattern = DetectorPattern::parse(o.pattern);
    if (o.particle < 1 || o.particle > pattern.size()) throw InvalidInput("--particle out of range");
    const InteractionConfig config{o.d, o.k, parse_phase_model(o.phases.c_str()), o.ensemble};
    config.validate();
    const PostSelectedState state = expand_postselected(pattern.size(), pattern, o.chi);
    const DensityTerms terms = build_terms(state, config, o.particle - 1);
    const GridSpec grid = o.range > 0.0 ? GridSpec::square(o.range, o.resolution)
                                        : covering_grid(terms, o.resolution);
    const DensityGrid dens = o.incoherent ? incoherent_density(terms, grid, threads)
                                          : probability_density(terms, grid, threads);
    if (dens.mass_warning) {
        err << "warning: grid captures only " << format_double(dens.captured_mass)
            << " of the probability mass\n";
    }
    if (o.format == "csv") {
        Sink sink(o.output, out);
        write_density_csv(dens, *sink);
        sink.close();
    } else if (o.format == "pgm") {
        Sink sink(o.output, out, true);
        write_density_pgm(dens, *sink);
        sink.close();
    } else if (o.format == "json") {
        Sink sink(o.output, out);
        *sink << density_json(dens, o, pattern);
        sink.close();
    } else {
        if (o.output.empty()) throw InvalidInput("--format gnuplot needs --output");
        Sink sink(o.output, out);
        write_density_csv(dens, *sink);
        sink.close();
        const std::string title = pattern.to_string() + " particle " + std::to_string(o.particle) +
                                  ", d = " + format_double(o.d) + (o.incoherent ? ", incoherent" : "");
        write_file(o.output + ".gp", density_gnuplot_script(o.output, title));
    }
    return kOk;
}

int cmd_sweep(const SweepOptions& o, unsigned threads, std::ostream& out) {
    SweepConfig config;
    config.pattern = DetectorPattern::parse(o.pattern);
    config.chi = o.chi;
    config.k = o.k;
    config.phase_model = parse_phase_model(o.phases.c_str());
    config.ensemble_spread = o.ensemble;
    config.incoherent = o.incoherent;
    config.at(0.0).validate();
    const bool phased = has_geometric_phase(config.phase_model);
    const double d_max = o.d_max > 0.0 ? o.d_max : (phased ? 1.5 : 3.0);
    const auto d = d_range(d_max, o.step > 0.0 ? o.step : (phased ? 0.002 : 0.01));
    const SweepCurve curve = sweep(config, d, threads);

    if (o.format == "csv") {
        Sink sink(o.output, out);
        write_sweep_csv(curve, *sink);
        sink.close();
    } else if (o.format == "json") {
        Sink sink(o.output, out);
        *sink << sweep_to_json(curve);
        sink.close();
    } else {
        if (o.output.empty()) throw InvalidInput("--format gnuplot needs --output");
        Sink sink(o.output, out);
        write_sweep_csv(curve, *sink);
        sink.close();
        std::string incoherent_path;
        if (!o.incoherent) {
            SweepConfig inc = config;
            inc.incoherent = true;
            incoherent_path = o.output + ".inc.csv";
            Sink inc_sink(incoherent_path, out);
            write_sweep_csv(sweep(inc, d, threads), *inc_sink);
            inc_sink.close();
        }
        const double inset = std::min(d_max, phased ? 0.1 : 0.5);
        write_file(o.output + ".gp", sweep_gnuplot_script(curve, o.output, incoherent_path, inset));
    }
    return kOk;
}

int cmd_feasibility(const FeasibilityOptions& o, std::ostream& out) {
    const DesignReport report = electron_design_point(o.r_over_sigma, o.d_max, {}, o.kinetic_energy);
    out << to_json(report) << '\n';
    return kOk;
}

int cmd_verify(const VerifyOptions& o, unsigned threads, std::ostream& out, std::ostream& err) {
    VerificationOptions options = VerificationOptions::from_environment();
    options.quick = o.quick;
    options.threads = threads;
    if (o.tolerance_scale > 0.0) options.tolerance_scale = o.tolerance_scale;
    const VerificationReport report = run_verification(options);
    out << report.to_json();
    for (const auto& c : report.checks) {
        if (!c.passed) err << "FAILED " << c.name << " error=" << format_double(c.error)
                           << " tolerance=" << format_double(c.tolerance) << '\n';
    }
    return report.passed() ? kOk : kVerificationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum pigeonhole interferometer simulator", "pigeonhole"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0: PIGEONHOLE_THREADS or all cores)");

    const std::vector<std::string> formats_density{"csv", "pgm", "json", "gnuplot"};
    const std::vector<std::string> formats_sweep{"csv", "json", "gnuplot"};
    const std::vector<std::string> phase_names{"none", "geometric", "full"};

    BranchOptions bo;
    auto* branches = app.add_subcommand("branches", "List post-selected companion groups and branch amplitudes");
    branches->add_option("--pattern", bo.pattern, "Detector pattern, e.g. AAA, ABB, AA")->capture_default_str();
    branches->add_option("--n", bo.n, "Particle count (repeats a single-letter pattern)");
    branches->add_option("--chi", bo.chi, "Phase shift in the R arm")->capture_default_str();
    branches->add_flag("--json", bo.json, "Emit JSON");

    DensityOptions dopt;
    auto* density = app.add_subcommand("density", "Detection probability density of one particle");
    density->add_option("--pattern", dopt.pattern)->capture_default_str();
    density->add_option("--particle", dopt.particle, "1-based particle index")->capture_default_str();
    density->add_option("--chi", dopt.chi)->capture_default_str();
    density->add_option("--d", dopt.d, "Deflection per companion, units of sigma")->capture_default_str();
    density->add_option("--k", dopt.k, "Beam separation over beam width")->capture_default_str();
    density->add_option("--phases", dopt.phases)->check(CLI::IsMember(phase_names))->capture_default_str();
    density->add_flag("--ensemble", dopt.ensemble, "Average over the ensemble phase spread");
    density->add_flag("--incoherent", dopt.incoherent, "Drop interference terms");
    density->add_option("--resolution", dopt.resolution, "Points per axis")->capture_default_str();
    density->add_option("--range", dopt.range, "Grid half-width (0: cover every peak)")->capture_default_str();
    density->add_option("--output,-o", dopt.output, "Output path (default stdout)");
    density->add_option("--format", dopt.format)->check(CLI::IsMember(formats_density))->capture_default_str();

    SweepOptions so;
    auto* sweep_cmd = app.add_subcommand("sweep", "Mean detected position versus d for every particle");
    sweep_cmd->add_option("--pattern", so.pattern)->capture_default_str();
    sweep_cmd->add_option("--chi", so.chi)->capture_default_str();
    sweep_cmd->add_option("--k", so.k)->capture_default_str();
    sweep_cmd->add_option("--phases", so.phases)->check(CLI::IsMember(phase_names))->capture_default_str();
    sweep_cmd->add_flag("--ensemble", so.ensemble);
    sweep_cmd->add_flag("--incoherent", so.incoherent);
    sweep_cmd->add_option("--d-max", so.d_max, "Largest d (default 3, or 1.5 with phases)");
    sweep_cmd->add_option("--step", so.step, "d spacing (default 0.01, or 0.002 with phases)");
    sweep_cmd->add_option("--output,-o", so.output, "Output path (default stdout)");
    sweep_cmd->add_option("--format", so.format)->check(CLI::IsMember(formats_sweep))->capture_default_str();

    FeasibilityOptions fo;
    auto* feas = app.add_subcommand("feasibility", "Electron design point for a target d");
    feas->add_option("--r-over-sigma", fo.r_over_sigma)->capture_default_str();
    feas->add_option("--d-max", fo.d_max)->capture_default_str();
    feas->add_option("--kinetic-energy", fo.kinetic_energy, "Electron kinetic energy in eV")->capture_default_str();

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "Run the oracle and invariant checks");
    verify->add_flag("--quick", vo.quick, "Branch and overlap checks only");
    verify->add_option("--tolerance-scale", vo.tolerance_scale,
                       "Multiply every tolerance (overrides PIGEONHOLE_VERIFY_TOLERANCE_SCALE)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (*branches) return cmd_branches(bo, out);
        if (*density) return cmd_density(dopt, threads, out, err);
        if (*sweep_cmd) return cmd_sweep(so, threads, out);
        if (*feas) return cmd_feasibility(fo, out);
        return cmd_verify(vo, threads, out, err);
    } catch (const InfeasibleDesign& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
}

}  // namespace pigeonhole
