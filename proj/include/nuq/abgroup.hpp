#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nuq {

using Int = mpz_class;

struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Int> a;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rs, std::size_t cols);

    Int& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    std::vector<Int> row(std::size_t i) const;
    void append_row(const std::vector<Int>& r);
    IntMatrix without_row(std::size_t i) const;
    IntMatrix without_col(std::size_t j) const;
    bool operator==(const IntMatrix& o) const = default;
};

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y);
Int determinant(const IntMatrix& m);  // Bareiss, square only

struct SmithForm {
    std::vector<Int> d;  // min(rows, cols) entries, d[i] | d[i+1], zeros trailing
    IntMatrix U;         // rows x rows (empty when not tracked)
    IntMatrix V;         // cols x cols
    IntMatrix Vinv;      // cols x cols
    std::size_t rank() const;
};

struct SnfOptions {
    bool track_u = true;
    bool track_v = true;
};

SmithForm smith_normal_form(const IntMatrix& A, SnfOptions opt = {});

// Finitely generated abelian group Z^free_rank + sum Z_{torsion[i]}, torsion[i] | torsion[i+1].
// Canonical coordinates put the torsion coordinates first, then the free ones.
struct FgAbGroup {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;

    std::size_t ncoords() const { return torsion.size() + free_rank; }
    bool is_finite() const { return free_rank == 0; }
    std::string to_string() const;
    bool operator==(const FgAbGroup& o) const = default;
};

using GroupElt = std::vector<Int>;

struct Presentation {
    std::size_t n_gens = 0;
    IntMatrix relations;    // one relation per row, n_gens columns
    IntMatrix to_canonical; // n_gens x ncoords: generator vector x maps to x * to_canonical
    IntMatrix lift;         // ncoords x n_gens: canonical basis vector k lifts to row k
};

struct InfiniteEnumeration : std::runtime_error {
    InfiniteEnumeration() : std::runtime_error("infinite enumeration") {}
};

std::pair<FgAbGroup, Presentation> cokernel(const IntMatrix& A);
FgAbGroup cokernel_group(const IntMatrix& A);  // skips U/V tracking

GroupElt zero(const FgAbGroup& G);
GroupElt unit(const FgAbGroup& G, std::size_t k);
GroupElt normalize(const FgAbGroup& G, GroupElt x);
GroupElt add(const FgAbGroup& G, const GroupElt& x, const GroupElt& y);
GroupElt sub(const FgAbGroup& G, const GroupElt& x, const GroupElt& y);
GroupElt neg(const FgAbGroup& G, const GroupElt& x);
GroupElt smul(const FgAbGroup& G, const Int& n, const GroupElt& x);
bool is_zero(const GroupElt& x);
bool is_torsion(const FgAbGroup& G, const GroupElt& x);
std::optional<Int> order_of(const FgAbGroup& G, const GroupElt& x);  // nullopt = infinite
std::optional<Int> order(const FgAbGroup& G);
std::size_t two_rank(const FgAbGroup& G);
FgAbGroup torsion_subgroup(const FgAbGroup& G);
std::vector<Int> two_primary_factors(const FgAbGroup& G);  // 2^{n_i} for each even invariant factor

// Map a generator-coordinate vector to canonical coordinates.
GroupElt apply_presentation(const FgAbGroup& G, const Presentation& P, const std::vector<Int>& x);

// Enumerations. Torsion coordinates vary, free coordinates are zero.
std::vector<GroupElt> torsion_elements(const FgAbGroup& G);
std::vector<GroupElt> elements_of_order_dividing_2(const FgAbGroup& G);
std::vector<GroupElt> all_elements(const FgAbGroup& G);  // G finite
std::size_t element_index(const FgAbGroup& G, const GroupElt& x);  // mixed radix over torsion coords
std::string elt_to_string(const GroupElt& x);

bool subgroup_membership(const FgAbGroup& G, const std::vector<GroupElt>& gens, const GroupElt& x);
FgAbGroup subgroup_quotient(const FgAbGroup& G, const std::vector<GroupElt>& gens);
FgAbGroup subgroup_structure(const FgAbGroup& G, const std::vector<GroupElt>& gens);

// Precomputed membership test for a fixed subgroup.
class SubgroupTester {
public:
    SubgroupTester(const FgAbGroup& G, const std::vector<GroupElt>& gens);
    bool contains(const GroupElt& x) const;

private:
    std::vector<Int> d_;
    IntMatrix V_;
};

}  // namespace nuq
