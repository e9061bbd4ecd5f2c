#include "pigeonhole/quadrature_oracle.hpp"

#include <quadmath.h>

#include <cmath>
#include <string>

#include "pigeonhole/errors.hpp"
#include "pigeonhole/parallel.hpp"

namespace pigeonhole {

namespace {

using Quad = __float128;

constexpr double kExtendedThreshold = 1e-6;

std::vector<double> rule_weights(QuadratureRule rule, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (rule == QuadratureRule::trapezoid) {
        w.front() = w.back() = 0.5;
        return w;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = (i % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
    w.front() = w.back() = 1.0 / 3.0;
    return w;
}

/// Neumaier-compensated running sum; order of add() calls fixes the result.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        comp_ += std::fabs(sum_) >= std::fabs(v) ? (sum_ - t) + v : (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::complex<double> overlap_double(const GaussianMode& a, const GaussianMode& b,
                                    const QuadratureSpec& spec) {
    const auto w = spec.weights();
    CompensatedSum re, im, na, nb;
    for (std::size_t j = 0; j < spec.points; ++j) {
        const double y = spec.node(j);
        for (std::size_t i = 0; i < spec.points; ++i) {
            const Vec2 r{spec.node(i), y};
            const double wij = w[i] * w[j];
            const auto va = evaluate(a, r);
            const auto vb = evaluate(b, r);
            const auto f = std::conj(va) * vb;
            re.add(wij * f.real());
            im.add(wij * f.imag());
            na.add(wij * std::norm(va));
            nb.add(wij * std::norm(vb));
        }
    }
    const double scale = std::sqrt(na.value() * nb.value());
    return {re.value() / scale, im.value() / scale};
}

struct QComplex {
    Quad re = 0;
    Quad im = 0;
};

QComplex qmul(const QComplex& p, const QComplex& q) {
    return {p.re * q.re - p.im * q.im, p.re * q.im + p.im * q.re};
}

// One axis of conj(a) * b: the Gaussian and plane-wave factors both separate
// in x and y, so the 2-D integrand at node (i, j) is table_x[i] * table_y[j].
std::vector<QComplex> axis_table(double ca, double cb, double ga, double gb,
                                 const QuadratureSpec& spec) {
    std::vector<QComplex> t(spec.points);
    const Quad lo = spec.lo;
    const Quad h = (static_cast<Quad>(spec.hi) - lo) / static_cast<Quad>(spec.points - 1);
    for (std::size_t i = 0; i < spec.points; ++i) {
        const Quad x = lo + static_cast<Quad>(i) * h;
        const Quad mag = expq(-((x - ca) * (x - ca) + (x - cb) * (x - cb)) / 4);
        const Quad phase = (static_cast<Quad>(ga) - static_cast<Quad>(gb)) * x;
        t[i] = {mag * cosq(phase), mag * sinq(phase)};
    }
    return t;
}

std::complex<double> overlap_extended(const GaussianMode& a, const GaussianMode& b,
                                      const QuadratureSpec& spec) {
    const auto w = spec.weights();
    const auto tx = axis_table(a.center.x, b.center.x, a.phase_gradient.x, b.phase_gradient.x, spec);
    const auto ty = axis_table(a.center.y, b.center.y, a.phase_gradient.y, b.phase_gradient.y, spec);
    const auto sx_a = axis_table(a.center.x, a.center.x, 0, 0, spec);
    const auto sy_a = axis_table(a.center.y, a.center.y, 0, 0, spec);
    const auto sx_b = axis_table(b.center.x, b.center.x, 0, 0, spec);
    const auto sy_b = axis_table(b.center.y, b.center.y, 0, 0, spec);
    QComplex sum;
    Quad na = 0, nb = 0;
    for (std::size_t j = 0; j < spec.points; ++j) {
        for (std::size_t i = 0; i < spec.points; ++i) {
            const Quad wij = static_cast<Quad>(w[i]) * static_cast<Quad>(w[j]);
            const QComplex f = qmul(tx[i], ty[j]);
            sum.re += wij * f.re;
            sum.im += wij * f.im;
            na += wij * sx_a[i].re * sy_a[j].re;
            nb += wij * sx_b[i].re * sy_b[j].re;
        }
    }
    const Quad offset = static_cast<Quad>(b.phase_offset) - static_cast<Quad>(a.phase_offset);
    const QComplex shifted = qmul(sum, {cosq(offset), sinq(offset)});
    const Quad scale = sqrtq(na * nb);
    return {static_cast<double>(shifted.re / scale), static_cast<double>(shifted.im / scale)};
}

}  // namespace

std::vector<double> QuadratureSpec::weights() const { return rule_weights(rule, points); }

void QuadratureSpec::validate() const {
    if (points < 33) throw InvalidInput("quadrature needs at least 33 points per axis");
    if (rule == QuadratureRule::simpson && points % 2 == 0) {
        throw InvalidInput("Simpson's rule needs an odd number of points");
    }
    if (!(hi > lo)) throw InvalidInput("quadrature range is empty");
}

void QuadratureSpec::require_inside(const Vec2& center) const {
    constexpr double margin = 6.0;
    if (center.x - margin < lo || center.x + margin > hi || center.y - margin < lo ||
        center.y + margin > hi) {
        throw InvalidInput("quadrature range must extend 6 sigma beyond every mode center");
    }
}

std::complex<double> numeric_overlap(const GaussianMode& a, const GaussianMode& b,
                                     const QuadratureSpec& spec) {
    spec.validate();
    spec.require_inside(a.center);
    spec.require_inside(b.center);
    switch (spec.precision) {
        case Precision::double_precision: return overlap_double(a, b, spec);
        case Precision::extended: return overlap_extended(a, b, spec);
        case Precision::automatic: break;
    }
    const auto s = overlap_double(a, b, spec);
    return std::abs(s) < kExtendedThreshold ? overlap_extended(a, b, spec) : s;
}

DensityGrid numeric_marginal_two_particle(const DetectorPattern& pattern, double chi,
                                          const InteractionConfig& config,
                                          const QuadratureSpec& spec, unsigned threads) {
    if (pattern.size() != 2) {
        throw UnsupportedCase("direct marginalization is implemented for two particles only");
    }
    spec.validate();
    config.validate();
    const PostSelectedState state = expand_postselected(2, pattern, chi);
    const DeflectionGeometry geometry(2);
    const std::size_t n = spec.points;
    const std::size_t nodes = n * n;
    const auto w = spec.weights();

    // Per-group amplitude tables for each particle, node index j * n + i.
    std::vector<std::complex<double>> coeff;
    std::vector<std::vector<std::complex<double>>> first, second;
    for (const auto& g : state.groups) {
        if (g.coefficient == 0.0) continue;
        const auto m1 = mode_for(0, g.structure.companions(0), config, geometry);
        const auto m2 = mode_for(1, g.structure.companions(1), config, geometry);
        spec.require_inside(m1.center);
        spec.require_inside(m2.center);
        std::vector<std::complex<double>> t1(nodes), t2(nodes);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                const Vec2 r{spec.node(i), spec.node(j)};
                t1[j * n + i] = evaluate(m1, r);
                t2[j * n + i] = evaluate(m2, r);
            }
        }
        coeff.push_back(g.coefficient);
        first.push_back(std::move(t1));
        second.push_back(std::move(t2));
    }
    if (coeff.empty()) throw InvalidInput("post-selected state has no surviving amplitude");

    DensityGrid out{GridSpec{spec.lo, spec.hi, spec.lo, spec.hi, n}, std::vector<double>(nodes),
                    1.0, false};
    std::vector<double> row_sums(n, 0.0);
    parallel_for(n, threads, [&](std::size_t j1) {
        std::vector<std::complex<double>> local(coeff.size());
        CompensatedSum row;
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            for (std::size_t g = 0; g < coeff.size(); ++g) local[g] = coeff[g] * first[g][j1 * n + i1];
            CompensatedSum marginal;
            for (std::size_t j2 = 0; j2 < n; ++j2) {
                for (std::size_t i2 = 0; i2 < n; ++i2) {
                    std::complex<double> amp;
                    for (std::size_t g = 0; g < coeff.size(); ++g) amp += local[g] * second[g][j2 * n + i2];
                    marginal.add(w[i2] * w[j2] * std::norm(amp));
                }
            }
            out.values[j1 * n + i1] = marginal.value();
            row.add(marginal.value());
        }
        row_sums[j1] = row.value();
    });
    CompensatedSum total;
    for (double s : row_sums) total.add(s);
    const double scale = 1.0 / (total.value() * out.spec.cell_area());
    for (double& v : out.values) v *= scale;
    return out;
}

Vec2 numeric_expectation(const DensityGrid& grid, QuadratureRule rule) {
    const std::size_t n = grid.spec.resolution;
    if (rule == QuadratureRule::simpson && n % 2 == 0) {
        throw InvalidInput("Simpson moments need an odd number of grid points");
    }
    const auto w = rule_weights(rule, n);
    CompensatedSum mass, mx, my;
    for (std::size_t j = 0; j < n; ++j) {
        const double y = grid.spec.y(j);
        for (std::size_t i = 0; i < n; ++i) {
            const double p = w[i] * w[j] * grid.at(i, j);
            mass.add(p);
            mx.add(p * grid.spec.x(i));
            my.add(p * y);
        }
    }
    return {mx.value() / mass.value(), my.value() / mass.value()};
}

}  // namespace pigeonhole
