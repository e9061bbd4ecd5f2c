#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "cli_app.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace pigeonhole;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<const char*> args) {
    args.insert(args.begin(), "pigeonhole");
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(args.size()), args.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("branches") {
    const auto aaa = run({"branches", "--pattern", "AAA"});
    CHECK(aaa.code == 0);
    CHECK(aaa.out.rfind("n=3 pattern=AAA chi=1.5707963267948966\n{123} 1-1i\n", 0) == 0);

    const auto aa = run({"branches", "--pattern", "AA", "--n", "2"});
    CHECK(aa.out.find("{12} 0+0i") != std::string::npos);
    CHECK(aa.out.find("cancels") != std::string::npos);

    const auto abb = run({"branches", "--pattern", "ABB"});
    CHECK(abb.out.find("note: signs over") != std::string::npos);

    const auto json = nlohmann::json::parse(run({"branches", "--pattern", "A", "--n", "3", "--json"}).out);
    CHECK(json["groups"].size() == 4);
    CHECK(json["groups"][0]["coefficient"] == "1-1i");
    CHECK(json["branches"].size() == 8);
}

TEST_CASE("exit codes") {
    CHECK(run({"branches", "--pattern", "AXB"}).code == kInvalidInput);
    CHECK(run({"branches", "--pattern", "AB", "--n", "3"}).code == kInvalidInput);
    CHECK(run({"density", "--d", "-1"}).code == kInvalidInput);
    CHECK(run({"density", "--format", "svg"}).code == kInvalidInput);
    CHECK(run({"nonsense"}).code == kInvalidInput);
    CHECK(run({"--help"}).code == kOk);
    CHECK(run({"feasibility", "--d-max", "1e-9"}).code == kInfeasible);
}

TEST_CASE("feasibility report") {
    const auto r = run({"feasibility"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["d"].get<double>() == doctest::Approx(0.005));
    CHECK(j["sigma_m"].get<double>() == doctest::Approx(1.3229e-11).epsilon(1e-3));
    const auto low = nlohmann::json::parse(run({"feasibility", "--r-over-sigma", "1"}).out);
    CHECK(low["warnings"].dump().find("not distinguishable") != std::string::npos);
}

TEST_CASE("density output is independent of the thread count") {
    const auto one = run({"--threads", "1", "density", "--d", "0.25", "--resolution", "65"});
    const auto eight = run({"--threads", "8", "density", "--d", "0.25", "--resolution", "65"});
    CHECK(one.code == 0);
    CHECK(one.out == eight.out);
    CHECK(one.out.rfind("x,y,p\n", 0) == 0);
}

TEST_CASE("density formats") {
    const auto j = nlohmann::json::parse(run({"density", "--d", "3", "--incoherent", "--format", "json", "--resolution", "33"}).out);
    CHECK(j["config"]["incoherent"] == true);
    CHECK(j["values"].size() == 33);
    CHECK(j["grid"]["x_max"].get<double>() >= 8.0);
    CHECK(run({"density", "--format", "pgm", "--resolution", "17"}).out.rfind("P5\n17 17\n255\n", 0) == 0);
    CHECK(run({"density", "--format", "gnuplot"}).code == kInvalidInput);
}

TEST_CASE("gnuplot bundles are written next to the data") {
    const auto dir = std::filesystem::temp_directory_path() / "pigeonhole_cli_test";
    std::filesystem::create_directories(dir);
    const std::string csv = (dir / "sweep.csv").string();
    const auto r = run({"sweep", "--pattern", "ABB", "--d-max", "0.5", "--step", "0.1", "--format", "gnuplot", "-o", csv.c_str()});
    REQUIRE(r.code == 0);
    CHECK(slurp(csv).rfind("d,x1,y1,x2,y2,x3,y3\n", 0) == 0);
    CHECK(std::filesystem::exists(csv + ".inc.csv"));
    CHECK(slurp(csv + ".gp").find(csv) != std::string::npos);

    const std::string dcsv = (dir / "density.csv").string();
    CHECK(run({"density", "--resolution", "33", "--format", "gnuplot", "-o", dcsv.c_str()}).code == 0);
    CHECK(std::filesystem::exists(dcsv + ".gp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep defaults depend on the phase model") {
    const auto plain = run({"sweep", "--format", "json"});
    CHECK(nlohmann::json::parse(plain.out)["d"].size() == 301);
    const auto phased = run({"sweep", "--phases", "full", "--format", "json"});
    CHECK(nlohmann::json::parse(phased.out)["d"].size() == 751);
}

TEST_CASE("verify") {
    const auto quick = run({"verify", "--quick"});
    CHECK(quick.code == kOk);
    CHECK(nlohmann::json::parse(quick.out)["passed"] == true);

    const auto strict = run({"verify", "--quick", "--tolerance-scale", "1e-30"});
    CHECK(strict.code == kVerificationFailed);
    CHECK(strict.err.find("FAILED overlap.oracle") != std::string::npos);

    setenv("PIGEONHOLE_VERIFY_TOLERANCE_SCALE", "1e-30", 1);
    const auto env = run({"verify", "--quick"});
    unsetenv("PIGEONHOLE_VERIFY_TOLERANCE_SCALE");
    CHECK(env.code == kVerificationFailed);
    CHECK(env.err.find("FAILED overlap.oracle") != std::string::npos);
}
