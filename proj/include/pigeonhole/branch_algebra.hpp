#pragma once

// Path-branch bookkeeping for N distinguishable particles in a two-arm
// Mach-Zehnder interferometer: BS1 -> phase shifter on R -> BS2 -> detectors.
//
// Amplitudes are unnormalized throughout. Per particle, an arm/detector pair
// contributes
//
//     L -> A : 1        R -> A :  e^{i chi}
//     L -> B : 1        R -> B : -e^{i chi}
//
// (D_A sums the L and R amplitudes, D_B takes their difference). After BS2 an
// arm assignment and its complement leave every particle with the same set of
// companions, so they land on the same detector-plane product state and their
// coefficients add. Those pairs are the CompanionStructure groups below.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pigeonhole {

using Complex = std::complex<double>;

enum class Arm : std::uint8_t { L, R };
enum class Detector : std::uint8_t { A, B };

/// Largest particle count the 2^N expansion accepts.
inline constexpr std::size_t kMaxParticles = 20;

/// One branch of the product superposition: the arm taken by each particle.
/// Stored as an N-bit word, bit i set <=> particle i took R.
class ArmAssignment {
public:
    ArmAssignment(std::uint32_t bits, std::size_t n);
    explicit ArmAssignment(const std::vector<Arm>& arms);

    std::size_t size() const { return n_; }
    std::uint32_t bits() const { return bits_; }
    Arm arm(std::size_t particle) const;
    ArmAssignment complement() const;
    std::size_t count(Arm a) const;
    std::string to_string() const;

    friend bool operator==(const ArmAssignment&, const ArmAssignment&) = default;

private:
    std::uint32_t bits_;
    std::size_t n_;
};

class DetectorPattern {
public:
    explicit DetectorPattern(std::vector<Detector> detectors);
    /// Parses strings such as "AAA" or "ABB" (case-insensitive).
    static DetectorPattern parse(std::string_view text);
    /// The pattern with every particle at one detector.
    static DetectorPattern uniform(std::size_t n, Detector d);

    std::size_t size() const { return detectors_.size(); }
    Detector at(std::size_t particle) const { return detectors_.at(particle); }
    std::string to_string() const;

    friend bool operator==(const DetectorPattern&, const DetectorPattern&) = default;

private:
    std::vector<Detector> detectors_;
};

/// Unordered split of the particles into the two arm groups. Canonical code:
/// the assignment word with particle 0 forced onto L.
class CompanionStructure {
public:
    explicit CompanionStructure(const ArmAssignment& a);
    static CompanionStructure from_code(std::uint32_t code, std::size_t n);

    std::size_t size() const { return n_; }
    std::uint32_t code() const { return code_; }
    bool together(std::size_t i, std::size_t j) const;
    /// Indices of the particles sharing `particle`'s arm, ascending.
    std::vector<std::size_t> companions(std::size_t particle) const;
    /// The member assignment with particle 0 on L.
    ArmAssignment representative() const { return {code_, n_}; }
    /// Partition text with 1-based labels, e.g. "{12|3}", "{123}".
    std::string to_string() const;

    friend bool operator==(const CompanionStructure&, const CompanionStructure&) = default;
    friend auto operator<=>(const CompanionStructure& a, const CompanionStructure& b) {
        return a.code_ <=> b.code_;
    }

private:
    CompanionStructure(std::uint32_t code, std::size_t n) : code_(code), n_(n) {}
    std::uint32_t code_;
    std::size_t n_;
};

struct CompanionGroup {
    CompanionStructure structure;
    Complex coefficient;
};

/// Groups are ordered by canonical code; zero-coefficient groups are kept.
struct PostSelectedState {
    std::size_t n = 0;
    DetectorPattern pattern{{}};
    double chi = 0.0;
    std::vector<CompanionGroup> groups;

    std::size_t nonzero_count() const;
    const CompanionGroup& group(const CompanionStructure& s) const;
};

/// e^{i chi}, exact for integer multiples of pi/2.
Complex unit_phase(double chi);

/// Amplitude of one branch: the product of the per-particle factors above.
Complex branch_coefficient(const ArmAssignment& assignment, const DetectorPattern& pattern,
                           double chi);

/// Amplitude of a branch right after the phase shifter (before BS2).
Complex pre_detection_coefficient(const ArmAssignment& assignment, double chi);

PostSelectedState expand_postselected(std::size_t n, const DetectorPattern& pattern, double chi);

/// True iff some arm carries two or more particles (or N <= 2).
bool verify_classical_php(const ArmAssignment& assignment);

/// Stable text dump: header line, then one "structure coefficient" line per group.
std::string render(const PostSelectedState& state);

/// Formats a complex number as "re+imi" with 17 significant digits; exact
/// integers print without a fraction ("1-1i").
std::string format_complex(Complex z);

}  // namespace pigeonhole
