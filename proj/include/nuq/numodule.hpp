#pragma once

#include "nuq/abgroup.hpp"
#include "nuq/linkdiag.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace nuq {

struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ParityVec = std::vector<int>;  // entries 0/1, one per component

struct NuModule {
    LinkDiagram diagram;
    IntMatrix r;
    FgAbGroup group;
    Presentation pres;
    std::vector<GroupElt> sD;  // per arc
    int mu = 0;
    std::vector<Int> w_coeff;               // w(x) = sum w_coeff[k] x[k]
    std::vector<std::vector<int>> p_coeff;  // p(x)_i = sum p_coeff[i][k] x[k] mod 2

    Int w(const GroupElt& x) const;
    ParityVec p(const GroupElt& x) const;
    // A_mu form: (w(x), p(x)_2, ..., p(x)_mu)
    std::pair<Int, ParityVec> phi(const GroupElt& x) const;
    GroupElt arc_sum(const std::vector<std::pair<ArcId, long>>& terms) const;
};

IntMatrix build_r_matrix(const LinkDiagram& d);
NuModule build_nu_module(const LinkDiagram& d);

struct KerW {
    FgAbGroup group;
    Presentation pres;
    ArcId base_arc = 0;
};
KerW ker_w(const NuModule& m, ArcId base_arc);

// |ker w| when finite, else 0.
Int det_link(const NuModule& m);
// gcd of the maximal minors of R with one column removed (Bareiss determinants).
Int det_by_minors(const IntMatrix& r, std::size_t drop_col = 0);

// Elements of ker w inside M (subgroup generators) and the subgroup {x : w(x) = 0, p(x) = 0}.
std::vector<GroupElt> ker_w_generators(const NuModule& m);
std::vector<GroupElt> ker_phi_generators(const NuModule& m);

struct Longitudes {
    std::vector<GroupElt> lambda;
};

// Requires m.diagram to be even.
Longitudes longitudes(const NuModule& m);
std::optional<std::vector<int>> longitude_zero_subset(const NuModule& m, const Longitudes& l);

using ParityProfile = std::vector<ParityVec>;  // sorted multiset
ParityProfile canonical_profile(const std::vector<ParityVec>& vs, int mu);
ParityProfile torsion_parity_profile(const NuModule& m);

}  // namespace nuq
