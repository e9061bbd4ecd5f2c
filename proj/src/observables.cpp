#include "pigeonhole/observables.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "pigeonhole/errors.hpp"
#include "pigeonhole/parallel.hpp"

namespace pigeonhole {

namespace {

void moment_pair(const GaussianMode& a, const GaussianMode& b, std::complex<double> weight,
                 std::complex<double>& mass, std::complex<double>& mx,
                 std::complex<double>& my) {
    const std::complex<double> s = weight * overlap(a, b);
    const Vec2 mid = 0.5 * (a.center + b.center);
    const Vec2 q = a.phase_gradient - b.phase_gradient;
    mass += s;
    mx += s * std::complex<double>(mid.x, q.x);
    my += s * std::complex<double>(mid.y, q.y);
}

PostSelectedState state_for(const SweepConfig& c) {
    return expand_postselected(c.pattern.size(), c.pattern, c.chi);
}

}  // namespace

Vec2 grid_mean(const DensityGrid& grid) {
    const auto& s = grid.spec;
    const std::size_t n = s.resolution;
    double mx = 0.0, my = 0.0, mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double row = 0.0, row_x = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = grid.at(i, j);
            row += p;
            row_x += p * s.x(i);
        }
        mass += row;
        mx += row_x;
        my += row * s.y(j);
    }
    return {mx / mass, my / mass};
}

Vec2 expectation(const PostSelectedState& state, const InteractionConfig& config,
                 std::size_t particle, const GridSpec& grid, unsigned threads) {
    return grid_mean(probability_density(build_terms(state, config, particle), grid, threads));
}

Vec2 analytic_expectation(const DensityTerms& terms, bool coherent) {
    std::complex<double> mass, mx, my;
    for (const auto& t : terms.diagonal) {
        if (t.weight > 0.0) moment_pair(t.mode, t.mode, t.weight, mass, mx, my);
    }
    if (coherent) {
        for (const auto& c : terms.cross) {
            // (g,h) and its conjugate (h,g) together give twice the real part.
            moment_pair(terms.diagonal[c.first].mode, terms.diagonal[c.second].mode,
                        2.0 * c.prefactor, mass, mx, my);
        }
    }
    const double m = mass.real();
    return {mx.real() / m, my.real() / m};
}

Vec2 analytic_expectation(const PostSelectedState& state, const InteractionConfig& config,
                          std::size_t particle) {
    return analytic_expectation(build_terms(state, config, particle));
}

Vec2 incoherent_expectation(const PostSelectedState& state, const InteractionConfig& config,
                            std::size_t particle) {
    config.validate();
    if (particle >= state.n) throw InvalidInput("particle index out of range");
    const DeflectionGeometry geometry(state.n);
    Vec2 sum;
    double weight = 0.0;
    for (const auto& g : state.groups) {
        const double w = std::norm(g.coefficient);
        if (w == 0.0) continue;
        sum += w * mode_for(particle, g.structure.companions(particle), config, geometry).center;
        weight += w;
    }
    if (weight == 0.0) throw InvalidInput("post-selected state has no surviving amplitude");
    return (1.0 / weight) * sum;
}

SweepCurve sweep(const SweepConfig& config, const std::vector<double>& d_grid, unsigned threads) {
    for (std::size_t i = 0; i < d_grid.size(); ++i) {
        if (!(d_grid[i] >= 0.0)) throw InvalidInput("sweep d values must be >= 0");
        if (i > 0 && !(d_grid[i] > d_grid[i - 1])) {
            throw InvalidInput("sweep d values must be strictly ascending");
        }
    }
    const PostSelectedState state = state_for(config);
    const std::size_t n = state.n;
    SweepCurve curve{config, d_grid, std::vector<std::vector<Vec2>>(d_grid.size())};
    parallel_for(d_grid.size(), threads, [&](std::size_t i) {
        const InteractionConfig ic = config.at(d_grid[i]);
        auto& row = curve.means[i];
        row.resize(n);
        for (std::size_t p = 0; p < n; ++p) {
            row[p] = config.incoherent ? incoherent_expectation(state, ic, p)
                                       : analytic_expectation(build_terms(state, ic, p));
        }
    });
    return curve;
}

std::vector<double> d_range(double d_max, double step) {
    if (!(step > 0.0) || !(d_max >= 0.0)) throw InvalidInput("d range needs step > 0, d_max >= 0");
    const auto count = static_cast<std::size_t>(std::floor(d_max / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<double>(i) * step;
    return out;
}

Vec2 momentum_sum(const SweepConfig& config, double d) {
    const PostSelectedState state = state_for(config);
    const InteractionConfig ic = config.at(d);
    const DeflectionGeometry geometry(state.n);
    Vec2 total;
    for (std::size_t p = 0; p < state.n; ++p) {
        const Vec2 local = config.incoherent ? incoherent_expectation(state, ic, p)
                                             : analytic_expectation(state, ic, p);
        total += geometry.local_to_global(p, local);
    }
    return total;
}

double slope_at_zero(const SweepCurve& curve, std::size_t particle) {
    if (particle >= curve.particle_count()) throw InvalidInput("particle index out of range");
    std::size_t first = curve.d.size();
    for (std::size_t i = 0; i < curve.d.size(); ++i) {
        if (curve.d[i] > 0.0) {
            first = i;
            break;
        }
    }
    if (first + 1 >= curve.d.size()) {
        throw InvalidInput("slope estimate needs two positive d values");
    }
    const double h1 = curve.d[first];
    const double h2 = curve.d[first + 1];
    if (h1 > 0.02) throw InvalidInput("slope estimate needs a d value <= 0.02");
    const double s1 = curve.means[first][particle].y / h1;
    const double s2 = curve.means[first + 1][particle].y / h2;
    return (h2 * h2 * s1 - h1 * h1 * s2) / (h2 * h2 - h1 * h1);
}

}  // namespace pigeonhole
