#include "pigeonhole/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace pigeonhole {

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_density_csv(const DensityGrid& grid, std::ostream& out) {
    const auto& s = grid.spec;
    out << "x,y,p\n";
    for (std::size_t j = 0; j < s.resolution; ++j) {
        const std::string y = format_double(s.y(j));
        for (std::size_t i = 0; i < s.resolution; ++i) {
            out << format_double(s.x(i)) << ',' << y << ',' << format_double(grid.at(i, j)) << '\n';
        }
    }
}

void write_density_pgm(const DensityGrid& grid, std::ostream& out) {
    const std::size_t n = grid.spec.resolution;
    const double peak = *std::max_element(grid.values.begin(), grid.values.end());
    out << "P5\n" << n << ' ' << n << "\n255\n";
    std::string row(n, '\0');
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t j = n - 1 - r;
        for (std::size_t i = 0; i < n; ++i) {
            const double level = peak > 0.0 ? std::round(255.0 * grid.at(i, j) / peak) : 0.0;
            row[i] = static_cast<char>(static_cast<unsigned char>(std::clamp(level, 0.0, 255.0)));
        }
        out.write(row.data(), static_cast<std::streamsize>(n));
    }
}

std::string density_gnuplot_script(const std::string& csv_path, const std::string& title) {
    return "set datafile separator ','\n"
           "set title '" + title + "'\n"
           "set xlabel 'x / sigma'\n"
           "set ylabel 'y / sigma'\n"
           "set size ratio -1\n"
           "set palette rgbformulae 33,13,10\n"
           "plot '" + csv_path + "' every ::1 using 1:2:3 with image notitle\n";
}

void write_sweep_csv(const SweepCurve& curve, std::ostream& out) {
    out << 'd';
    for (std::size_t p = 1; p <= curve.particle_count(); ++p) out << ",x" << p << ",y" << p;
    out << '\n';
    for (std::size_t i = 0; i < curve.d.size(); ++i) {
        out << format_double(curve.d[i]);
        for (const Vec2& m : curve.means[i]) out << ',' << format_double(m.x) << ',' << format_double(m.y);
        out << '\n';
    }
}

std::string sweep_to_json(const SweepCurve& curve) {
    nlohmann::ordered_json j;
    const auto& c = curve.config;
    j["config"] = {{"pattern", c.pattern.to_string()},
                   {"chi", c.chi},
                   {"k", c.k},
                   {"phase_model", to_string(c.phase_model)},
                   {"ensemble_spread", c.ensemble_spread},
                   {"incoherent", c.incoherent}};
    j["d"] = curve.d;
    auto particles = nlohmann::ordered_json::array();
    for (std::size_t p = 0; p < curve.particle_count(); ++p) {
        std::vector<double> xs, ys;
        for (const auto& row : curve.means) {
            xs.push_back(row[p].x == 0.0 ? 0.0 : row[p].x);
            ys.push_back(row[p].y == 0.0 ? 0.0 : row[p].y);
        }
        particles.push_back({{"particle", p + 1}, {"x", xs}, {"y", ys}});
    }
    j["particles"] = particles;
    return j.dump(2) + "\n";
}

std::string sweep_gnuplot_script(const SweepCurve& curve, const std::string& csv_path,
                                 const std::string& incoherent_csv, double inset_max) {
    std::string plot;
    for (std::size_t p = 1; p <= curve.particle_count(); ++p) {
        if (!plot.empty()) plot += ", ";
        const std::string col = std::to_string(2 * p + 1);
        plot += "'" + csv_path + "' using 1:" + col + " with lines lw 2 title '<y_" +
                std::to_string(p) + ">'";
    }
    if (!incoherent_csv.empty()) {
        plot += ", '" + incoherent_csv + "' using 1:3 with lines dt 2 title 'inc.'";
    }
    const std::string title = "pattern " + curve.config.pattern.to_string() + ", phases " +
                              to_string(curve.config.phase_model);
    return "set datafile separator ','\n"
           "set key autotitle columnhead\n"
           "set multiplot layout 1,2 title '" + title + "'\n"
           "set xlabel 'd'\n"
           "set ylabel '<y> / sigma'\n"
           "plot " + plot + "\n"
           "set xrange [0:" + format_double(inset_max) + "]\n"
           "set autoscale y\n"
           "plot " + plot + "\n"
           "unset multiplot\n";
}

}  // namespace pigeonhole
