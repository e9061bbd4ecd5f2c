#include "pigeonhole/density_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pigeonhole/errors.hpp"
#include "pigeonhole/parallel.hpp"

namespace pigeonhole {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMassWarning = 1e-6;
constexpr double kNegativeTolerance = 1e-12;

std::vector<std::vector<GaussianMode>> group_modes(const PostSelectedState& state,
                                                   const InteractionConfig& config,
                                                   const DeflectionGeometry& geometry) {
    std::vector<std::vector<GaussianMode>> modes;
    modes.reserve(state.groups.size());
    for (const auto& g : state.groups) {
        std::vector<GaussianMode> per_particle;
        per_particle.reserve(state.n);
        for (std::size_t j = 0; j < state.n; ++j) {
            per_particle.push_back(mode_for(j, g.structure.companions(j), config, geometry));
        }
        modes.push_back(std::move(per_particle));
    }
    return modes;
}

DensityGrid sample(const DensityTerms& terms, const GridSpec& grid, unsigned threads,
                   bool coherent) {
    grid.validate();
    if (terms.diagonal.empty()) throw InvalidInput("density terms are empty");
    for (const auto& t : terms.diagonal) {
        if (t.weight > 0.0 && !grid.contains(t.mode.center, 5.0)) {
            throw InvalidInput("grid does not cover the peak of " + t.structure.to_string() +
                               " with a 5 sigma margin");
        }
    }
    const std::size_t n = grid.resolution;
    DensityGrid out{grid, std::vector<double>(n * n), 1.0, false};
    std::vector<double> row_sums(n, 0.0);
    std::vector<double> row_max(n, 0.0);
    std::vector<double> row_min(n, 0.0);
    parallel_for(n, threads, [&](std::size_t j) {
        double sum = 0.0, hi = 0.0, lo = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = density_at(terms, {grid.x(i), grid.y(j)}, coherent);
            out.values[j * n + i] = v;
            sum += v;
            hi = std::max(hi, v);
            lo = std::min(lo, v);
        }
        row_sums[j] = sum;
        row_max[j] = hi;
        row_min[j] = lo;
    });
    const double peak = *std::max_element(row_max.begin(), row_max.end());
    const double floor = *std::min_element(row_min.begin(), row_min.end());
    if (floor < -kNegativeTolerance * std::max(peak, 1.0)) {
        throw std::runtime_error("marginal density went negative beyond rounding: " +
                                 std::to_string(floor));
    }
    double total = 0.0;
    for (double s : row_sums) total += s;  // fixed row order
    if (!(total > 0.0)) throw InvalidInput("density vanishes on the grid");
    const double mass_on_grid = total * grid.cell_area();
    out.captured_mass = mass_on_grid / terms.total_mass(coherent);
    out.mass_warning = out.captured_mass < 1.0 - kMassWarning;
    const double scale = 1.0 / mass_on_grid;
    for (double& v : out.values) v = std::max(v, 0.0) * scale;
    return out;
}

}  // namespace

GridSpec GridSpec::square(double half_width, std::size_t resolution) {
    return {-half_width, half_width, -half_width, half_width, resolution};
}

bool GridSpec::contains(const Vec2& p, double margin) const {
    return p.x - margin >= x_min && p.x + margin <= x_max && p.y - margin >= y_min &&
           p.y + margin <= y_max;
}

void GridSpec::validate() const {
    if (resolution < 16) throw InvalidInput("grid resolution must be at least 16");
    if (!(x_max > x_min) || !(y_max > y_min)) throw InvalidInput("grid range is empty");
}

std::complex<double> DensityTerms::prefactor(std::size_t g, std::size_t h) const {
    if (g == h) return diagonal.at(g).weight;
    for (const auto& c : cross) {
        if (c.first == g && c.second == h) return c.prefactor;
        if (c.first == h && c.second == g) return std::conj(c.prefactor);
    }
    throw InvalidInput("no cross term for this group pair");
}

double DensityTerms::total_mass(bool coherent) const {
    double mass = 0.0;
    for (const auto& t : diagonal) mass += t.weight;
    if (coherent) {
        for (const auto& c : cross) {
            mass += 2.0 * std::real(c.prefactor *
                                    overlap(diagonal[c.first].mode, diagonal[c.second].mode));
        }
    }
    return kTwoPi * mass;
}

double DensityTerms::max_center_extent() const {
    double extent = 0.0;
    for (const auto& t : diagonal) {
        if (t.weight > 0.0) extent = std::max(extent, norm(t.mode.center));
    }
    return extent;
}

DensityTerms build_terms(const PostSelectedState& state, const InteractionConfig& config,
                         std::size_t particle) {
    config.validate();
    if (state.groups.empty() || state.nonzero_count() == 0) {
        throw InvalidInput("post-selected state has no surviving amplitude");
    }
    if (particle >= state.n) throw InvalidInput("particle index out of range");
    const DeflectionGeometry geometry(state.n);
    const auto modes = group_modes(state, config, geometry);

    DensityTerms terms;
    terms.particle = particle;
    for (std::size_t g = 0; g < state.groups.size(); ++g) {
        terms.diagonal.push_back({state.groups[g].structure, modes[g][particle],
                                  std::norm(state.groups[g].coefficient)});
    }
    for (std::size_t g = 0; g < state.groups.size(); ++g) {
        for (std::size_t h = g + 1; h < state.groups.size(); ++h) {
            std::complex<double> pf =
                std::conj(state.groups[g].coefficient) * state.groups[h].coefficient;
            double theta = 0.0;
            for (std::size_t j = 0; j < state.n; ++j) {
                theta += modes[h][j].phase_offset - modes[g][j].phase_offset;
                if (j != particle) pf *= overlap(modes[g][j], modes[h][j]);
            }
            if (config.ensemble_spread && has_interaction_phase(config.phase_model)) {
                const double spread = std::numbers::sqrt2 * theta / config.k;
                pf *= std::exp(-spread * spread / 2.0);
            }
            terms.cross.push_back({g, h, pf, theta});
        }
    }
    return terms;
}

double density_at(const DensityTerms& terms, const Vec2& r, bool coherent) {
    thread_local std::vector<std::complex<double>> amp;
    amp.resize(terms.diagonal.size());
    double p = 0.0;
    for (std::size_t g = 0; g < terms.diagonal.size(); ++g) {
        const auto& t = terms.diagonal[g];
        amp[g] = t.weight > 0.0 ? evaluate(t.mode, r) : std::complex<double>{};
        p += t.weight * std::norm(amp[g]);
    }
    if (coherent) {
        for (const auto& c : terms.cross) {
            if (c.prefactor == 0.0) continue;
            p += 2.0 * std::real(c.prefactor * std::conj(amp[c.first]) * amp[c.second]);
        }
    }
    return p;
}

GridSpec covering_grid(const DensityTerms& terms, std::size_t resolution) {
    const double half = std::max(8.0, std::ceil(terms.max_center_extent() + 6.0));
    return GridSpec::square(half, resolution);
}

DensityGrid probability_density(const DensityTerms& terms, const GridSpec& grid,
                                unsigned threads) {
    return sample(terms, grid, threads, true);
}

DensityGrid incoherent_density(const DensityTerms& terms, const GridSpec& grid,
                               unsigned threads) {
    return sample(terms, grid, threads, false);
}

double closed_form_reference(const DetectorPattern& pattern, std::size_t particle, double x,
                             double y, const InteractionConfig& config) {
    if (pattern != DetectorPattern::parse("AAA") || particle != 0) {
        throw UnsupportedCase("the closed-form reference covers particle 1 with pattern AAA only");
    }
    config.validate();
    const double d = config.d;
    const double s3 = std::numbers::sqrt3;
    auto g = [&](double cx, double cy) {
        return std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / 4.0);
    };
    const double g0 = g(0.0, 0.0);
    const double g2 = g(-d / 2.0, s3 * d / 2.0);
    const double g3 = g(d / 2.0, s3 * d / 2.0);
    const double g23 = g(0.0, s3 * d);
    const double diag = g23 * g23 + g2 * g2 + g3 * g3 + g0 * g0;

    if (config.phase_model == PhaseModel::none) {
        const double half = std::exp(-d * d / 2.0);
        const double quarter = std::exp(-d * d / 4.0);
        return diag - 2.0 * g23 * g2 * half - 2.0 * g23 * g3 * half - 2.0 * g23 * g0 * quarter +
               2.0 * g2 * g3 * quarter + 2.0 * g2 * g0 * quarter + 2.0 * g0 * g3 * quarter;
    }
    const double kd4 = has_interaction_phase(config.phase_model) ? 4.0 * config.k * d : 0.0;
    const double strong = std::exp(-d * d / 2.0 - 8.0 * d * d);
    const double weak = std::exp(-d * d / 4.0 - 4.0 * d * d);
    return diag - 2.0 * g23 * g2 * std::cos(s3 * d * y + d * x + 5.0 * d * d + kd4) * strong -
           2.0 * g23 * g3 * std::cos(s3 * d * y - d * x + 5.0 * d * d + kd4) * strong -
           2.0 * g23 * g0 * std::cos(2.0 * s3 * d * y + 4.0 * d * d + kd4) * weak +
           2.0 * g2 * g3 * std::cos(2.0 * d * x) * weak +
           2.0 * g2 * g0 * std::cos(s3 * d * y - d * x - d * d) * weak +
           2.0 * g0 * g3 * std::cos(-s3 * d * y - d * x + d * d) * weak;
}

}  // namespace pigeonhole
