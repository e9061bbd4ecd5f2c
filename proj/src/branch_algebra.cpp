#include "pigeonhole/branch_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "pigeonhole/errors.hpp"

namespace pigeonhole {

namespace {

void check_count(std::size_t n) {
    if (n < 1 || n > kMaxParticles) {
        throw InvalidInput("particle count must be in [1, " + std::to_string(kMaxParticles) +
                           "], got " + std::to_string(n));
    }
}

std::uint32_t low_mask(std::size_t n) { return n >= 32 ? ~0u : ((1u << n) - 1u); }

std::string format_real(double v) {
    if (v == 0.0) return "0";  // folds -0
    if (v == std::nearbyint(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ArmAssignment::ArmAssignment(std::uint32_t bits, std::size_t n) : bits_(bits), n_(n) {
    check_count(n);
    if ((bits & ~low_mask(n)) != 0) throw InvalidInput("assignment word has bits beyond N");
}

ArmAssignment::ArmAssignment(const std::vector<Arm>& arms) : bits_(0), n_(arms.size()) {
    check_count(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (arms[i] == Arm::R) bits_ |= 1u << i;
    }
}

Arm ArmAssignment::arm(std::size_t particle) const {
    if (particle >= n_) throw InvalidInput("particle index out of range");
    return ((bits_ >> particle) & 1u) ? Arm::R : Arm::L;
}

ArmAssignment ArmAssignment::complement() const { return {~bits_ & low_mask(n_), n_}; }

std::size_t ArmAssignment::count(Arm a) const {
    const auto r = static_cast<std::size_t>(std::popcount(bits_));
    return a == Arm::R ? r : n_ - r;
}

std::string ArmAssignment::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < n_; ++i) s += arm(i) == Arm::R ? 'R' : 'L';
    return s;
}

DetectorPattern::DetectorPattern(std::vector<Detector> detectors)
    : detectors_(std::move(detectors)) {}

DetectorPattern DetectorPattern::parse(std::string_view text) {
    std::vector<Detector> out;
    for (char c : text) {
        switch (std::toupper(static_cast<unsigned char>(c))) {
            case 'A': out.push_back(Detector::A); break;
            case 'B': out.push_back(Detector::B); break;
            default:
                throw InvalidInput("detector pattern must contain only A/B, got '" +
                                   std::string(text) + "'");
        }
    }
    check_count(out.size());
    return DetectorPattern(std::move(out));
}

DetectorPattern DetectorPattern::uniform(std::size_t n, Detector d) {
    check_count(n);
    return DetectorPattern(std::vector<Detector>(n, d));
}

std::string DetectorPattern::to_string() const {
    std::string s;
    for (Detector d : detectors_) s += d == Detector::A ? 'A' : 'B';
    return s;
}

CompanionStructure::CompanionStructure(const ArmAssignment& a)
    : code_(a.arm(0) == Arm::L ? a.bits() : a.complement().bits()), n_(a.size()) {}

CompanionStructure CompanionStructure::from_code(std::uint32_t code, std::size_t n) {
    check_count(n);
    if ((code & 1u) != 0 || (code & ~low_mask(n)) != 0) {
        throw InvalidInput("companion code must have particle 0 on L and fit in N bits");
    }
    return {code, n};
}

bool CompanionStructure::together(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw InvalidInput("particle index out of range");
    return ((code_ >> i) & 1u) == ((code_ >> j) & 1u);
}

std::vector<std::size_t> CompanionStructure::companions(std::size_t particle) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n_; ++j) {
        if (j != particle && together(particle, j)) out.push_back(j);
    }
    return out;
}

std::string CompanionStructure::to_string() const {
    std::string first, second;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::string label = std::to_string(i + 1);
        ((code_ >> i) & 1u ? second : first) += label;
    }
    return second.empty() ? "{" + first + "}" : "{" + first + "|" + second + "}";
}

std::size_t PostSelectedState::nonzero_count() const {
    return static_cast<std::size_t>(std::count_if(
        groups.begin(), groups.end(), [](const CompanionGroup& g) { return g.coefficient != 0.0; }));
}

const CompanionGroup& PostSelectedState::group(const CompanionStructure& s) const {
    for (const auto& g : groups) {
        if (g.structure == s) return g;
    }
    throw InvalidInput("structure " + s.to_string() + " is not part of this state");
}

Complex unit_phase(double chi) {
    const double quarter = chi / (std::numbers::pi / 2.0);
    if (quarter == std::nearbyint(quarter) && std::fabs(quarter) < 1e15) {
        switch (((static_cast<long long>(quarter) % 4) + 4) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    return std::polar(1.0, chi);
}

Complex branch_coefficient(const ArmAssignment& assignment, const DetectorPattern& pattern,
                           double chi) {
    if (assignment.size() != pattern.size()) {
        throw InvalidInput("assignment has " + std::to_string(assignment.size()) +
                           " particles but pattern has " + std::to_string(pattern.size()));
    }
    const Complex shift = unit_phase(chi);
    Complex c{1.0, 0.0};
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment.arm(i) == Arm::R) c *= pattern.at(i) == Detector::A ? shift : -shift;
    }
    return c;
}

Complex pre_detection_coefficient(const ArmAssignment& assignment, double chi) {
    const Complex shift = unit_phase(chi);
    Complex c{1.0, 0.0};
    for (std::size_t i = 0; i < assignment.count(Arm::R); ++i) c *= shift;
    return c;
}

PostSelectedState expand_postselected(std::size_t n, const DetectorPattern& pattern, double chi) {
    check_count(n);
    if (pattern.size() != n) {
        throw InvalidInput("pattern length " + std::to_string(pattern.size()) +
                           " does not match particle count " + std::to_string(n));
    }
    std::map<std::uint32_t, Complex> sums;
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
        const ArmAssignment a{bits, n};
        sums[CompanionStructure(a).code()] += branch_coefficient(a, pattern, chi);
    }
    PostSelectedState state{n, pattern, chi, {}};
    state.groups.reserve(sums.size());
    for (const auto& [code, c] : sums) {
        state.groups.push_back({CompanionStructure::from_code(code, n), c});
    }
    return state;
}

bool verify_classical_php(const ArmAssignment& assignment) {
    if (assignment.size() <= 2) return true;
    return assignment.count(Arm::L) >= 2 || assignment.count(Arm::R) >= 2;
}

std::string format_complex(Complex z) {
    std::string im = format_real(z.imag());
    if (im.front() != '-') im = "+" + im;
    return format_real(z.real()) + im + "i";
}

std::string render(const PostSelectedState& state) {
    char chi[40];
    std::snprintf(chi, sizeof chi, "%.17g", state.chi);
    std::string out = "n=" + std::to_string(state.n) + " pattern=" + state.pattern.to_string() +
                      " chi=" + chi + "\n";
    for (const auto& g : state.groups) {
        out += g.structure.to_string() + " " + format_complex(g.coefficient) + "\n";
    }
    return out;
}

}  // namespace pigeonhole
