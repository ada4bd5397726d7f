#pragma once

#include "nuq/abgroup.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nuq {

using Perm = std::vector<int>;

struct FiniteQuandle {
    int n = 0;
    std::vector<int> op;  // op[x * n + y] = x |> y
    std::vector<std::string> labels;

    FiniteQuandle() = default;
    explicit FiniteQuandle(int size) : n(size), op(static_cast<std::size_t>(size) * size, 0) {}

    int operator()(int x, int y) const { return op[static_cast<std::size_t>(x) * n + y]; }
    int& at(int x, int y) { return op[static_cast<std::size_t>(x) * n + y]; }
    Perm translation(int y) const;  // beta_y : x -> x |> y
};

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Empty iff q is an involutory medial quandle. At most `limit` violations are listed.
std::vector<std::string> check_axioms(const FiniteQuandle& q, std::size_t limit = 16);

// Orbit id per element; ids numbered by first appearance.
std::vector<int> orbits(const FiniteQuandle& q);
std::vector<std::vector<int>> orbit_lists(const FiniteQuandle& q);

struct DisGroup {
    std::vector<Perm> elements;     // element 0 is the identity
    std::vector<Perm> generators;   // beta_y beta_y0 for a minimal greedy subset of y
    FgAbGroup iso;                  // abstract isomorph
};

DisGroup displacement_group(const FiniteQuandle& q, std::size_t cap = 1000000);
bool is_semiregular(const FiniteQuandle& q, const DisGroup& dis);
bool is_semiregular(const FiniteQuandle& q);

// Elements enumerated in element_index order of A.
FiniteQuandle core_quandle(const FgAbGroup& A);
// Elements with at most one odd coordinate among the even invariant factors, in element_index order.
std::vector<GroupElt> characteristic_elements(const FgAbGroup& A);
FiniteQuandle characteristic_subquandle(const FgAbGroup& A);
// Core quandle restricted to a list of group elements closed under 2b - a.
FiniteQuandle core_subquandle(const FgAbGroup& A, const std::vector<GroupElt>& elems);

FiniteQuandle subquandle(const FiniteQuandle& q, const std::vector<int>& elems);
std::vector<int> generated_subquandle(const FiniteQuandle& q, const std::vector<int>& gens);

// Witness bijection f with f(x |> y) = f(x) |> f(y), or nullopt if none exists.
// `pinned` forces f(first) = second for each listed pair.
std::optional<std::vector<int>> is_isomorphic(const FiniteQuandle& q1, const FiniteQuandle& q2,
                                              const std::vector<std::pair<int, int>>& pinned = {});
bool is_homomorphism(const FiniteQuandle& q1, const FiniteQuandle& q2, const std::vector<int>& f);

FgAbGroup group_from_quandle(const FiniteQuandle& q);

// partner[x] == x for a singleton, else the other member of x's pair.
FiniteQuandle build_partition_quandle(int n, const std::vector<int>& partner, const std::vector<Perm>& translations);

void write_table(std::ostream& os, const FiniteQuandle& q);
FiniteQuandle read_table(std::istream& is);

}  // namespace nuq
