#pragma once

// File formats. Numbers are written with 17 significant digits so identical
// inputs give byte-identical files.

#include <ostream>
#include <string>

#include "pigeonhole/density_engine.hpp"
#include "pigeonhole/observables.hpp"

namespace pigeonhole {

/// Header "x,y,p", then one row per grid point, y-major.
void write_density_csv(const DensityGrid& grid, std::ostream& out);

/// Binary 8-bit PGM (P5), scaled so the maximum maps to 255, top row = y_max.
void write_density_pgm(const DensityGrid& grid, std::ostream& out);

/// Gnuplot heat map of a density CSV.
std::string density_gnuplot_script(const std::string& csv_path, const std::string& title);

/// Header "d,x1,y1,x2,y2,...", one row per d.
void write_sweep_csv(const SweepCurve& curve, std::ostream& out);

/// Configuration snapshot plus the curve arrays.
std::string sweep_to_json(const SweepCurve& curve);

/// Two-panel figure: full range, and an inset over d <= inset_max. The
/// incoherent curve is drawn dashed when `incoherent_csv` is non-empty.
std::string sweep_gnuplot_script(const SweepCurve& curve, const std::string& csv_path,
                                 const std::string& incoherent_csv, double inset_max);

/// printf("%.17g"), with -0 folded to 0.
std::string format_double(double v);

}  // namespace pigeonhole
