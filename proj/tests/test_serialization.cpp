#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pigeonhole/serialization.hpp"

using namespace pigeonhole;

namespace {

DensityGrid small_grid() {
    const auto s = expand_postselected(3, DetectorPattern::parse("AAA"), 1.5707963267948966);
    const auto terms = build_terms(s, {0.25, 5.0, PhaseModel::none, false}, 0);
    return probability_density(terms, GridSpec::square(8.0, 33), 1);
}

}  // namespace

TEST_CASE("format_double") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("density CSV") {
    std::ostringstream out;
    write_density_csv(small_grid(), out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,p");
    std::getline(in, line);
    CHECK(line.rfind("-8,-8,", 0) == 0);
    std::size_t rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 33 * 33);
}

TEST_CASE("density PGM") {
    std::ostringstream out;
    write_density_pgm(small_grid(), out);
    const std::string s = out.str();
    const std::string header = "P5\n33 33\n255\n";
    REQUIRE(s.rfind(header, 0) == 0);
    CHECK(s.size() == header.size() + 33 * 33);
    bool saw_peak = false;
    for (std::size_t i = header.size(); i < s.size(); ++i) saw_peak |= static_cast<unsigned char>(s[i]) == 255;
    CHECK(saw_peak);
}

TEST_CASE("sweep CSV and JSON") {
    SweepConfig c;
    c.pattern = DetectorPattern::parse("ABB");
    const auto curve = sweep(c, {0.0, 0.5, 1.0}, 1);
    std::ostringstream csv;
    write_sweep_csv(curve, csv);
    CHECK(csv.str().rfind("d,x1,y1,x2,y2,x3,y3\n0,0,0,0,0,0,0\n", 0) == 0);

    const auto j = nlohmann::json::parse(sweep_to_json(curve));
    CHECK(j["config"]["pattern"] == "ABB");
    CHECK(j["config"]["phase_model"] == "none");
    CHECK(j["d"].size() == 3);
    CHECK(j["particles"].size() == 3);
    CHECK(j["particles"][0]["y"][1].get<double>() == curve.means[1][0].y);
}

TEST_CASE("gnuplot scripts reference their data") {
    const std::string density = density_gnuplot_script("out.csv", "AAA");
    CHECK(density.find("'out.csv'") != std::string::npos);
    CHECK(density.find("with image") != std::string::npos);

    SweepConfig c;
    const auto curve = sweep(c, {0.0, 0.1}, 1);
    const std::string script = sweep_gnuplot_script(curve, "s.csv", "s.inc.csv", 0.05);
    CHECK(script.find("multiplot") != std::string::npos);
    CHECK(script.find("'s.inc.csv'") != std::string::npos);
    CHECK(script.find("set xrange [0:0.050000000000000003]") != std::string::npos);
    CHECK(sweep_gnuplot_script(curve, "s.csv", "", 0.05).find("inc") == std::string::npos);
}
