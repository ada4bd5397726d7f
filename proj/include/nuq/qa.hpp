#pragma once

#include "nuq/numodule.hpp"
#include "nuq/quandle.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nuq {

struct QaInfinite : std::runtime_error {
    QaInfinite() : std::runtime_error("Q_A infinite; use algebraic comparisons") {}
};

struct QaQuandle {
    FiniteQuandle quandle;
    std::vector<GroupElt> element_map;     // element -> M
    std::vector<int> element_component;    // element -> component
    std::vector<int> orbit_component;      // orbit id (of quandle) -> component
    std::vector<int> component_rep;        // component -> element holding sD(first arc)
};

QaQuandle build_qa(const NuModule& m);

struct DisCheck {
    bool ok = false;
    std::string detail;
    FgAbGroup dis;
    FgAbGroup ker_phi;
};
DisCheck dis_structure_check(const QaQuandle& qa, const NuModule& m);

enum class Tri { Yes, No, Unknown };
const char* tri_name(Tri t);

struct CharWitness {
    std::vector<int> indexing;             // indexing[j] = component placed in slot j
    std::vector<GroupElt> generators;      // slot order: free generators, then 2-primary torsion
    std::vector<std::pair<Int, ParityVec>> phi_images;  // A_mu form under the indexing
};

struct CharCompat {
    Tri verdict = Tri::Unknown;
    std::optional<CharWitness> witness;
    std::size_t indexings_checked = 0;
    std::size_t nodes = 0;
    std::string certificate;
};

CharCompat characteristic_compatibility(const NuModule& m, std::size_t node_cap = 2000000);

// Checks that gens (free generators first, then 2-primary torsion generators), together with the
// odd torsion, split M as a direct sum and that phi maps them to the unit vectors of A_mu under
// the indexing whose first slot is `indexing[0]`.
bool verify_characteristic_witness(const NuModule& m, const std::vector<int>& indexing,
                                   const std::vector<GroupElt>& gens, std::string* why = nullptr);

// Q_A iso Core'(ker w); throws QaInfinite when det = 0. Throws InternalError if it disagrees
// with characteristic_compatibility.
bool compare_qa_with_characteristic(const NuModule& m);

struct PhiEq {
    Tri verdict = Tri::Unknown;  // Yes = equivalent
    std::string reason;
    std::vector<int> component_map;  // component of m1 -> component of m2, when found
};
PhiEq phi_equivalent(const NuModule& m1, const NuModule& m2, std::size_t node_cap = 200000);

struct Reindexing {
    bool known = false;
    std::vector<std::vector<int>> classes;  // components grouped by Aut(Q_A) orbit classes
};
Reindexing reindexing_sensitivity(const NuModule& m);

}  // namespace nuq
