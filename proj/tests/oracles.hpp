#pragma once

// Brute-force reference computations used to cross-check the library. Nothing here calls the
// library's SNF or quandle algorithms.

#include "nuq/abgroup.hpp"
#include "nuq/linkdiag.hpp"
#include "nuq/quandle.hpp"

#include <gmpxx.h>

#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using nuq::Int;

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nuq::LinkDiagram fixture(const std::string& name) {
    return nuq::parse_diagram(slurp(std::string(NUQ_FIXTURE_DIR) + "/" + name + ".json"));
}

inline nuq::LinkDiagram test_data(const std::string& name) {
    return nuq::parse_diagram(slurp(std::string(NUQ_TEST_DATA_DIR) + "/" + name + ".json"));
}

// Determinant by Gaussian elimination over Q.
inline Int det_rational(std::vector<std::vector<mpq_class>> a) {
    std::size_t n = a.size();
    mpq_class det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            mpq_class f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return Int(det);
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (pick.size() == k) {
            f(pick);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
}

// gcd of all k x k minors.
inline Int minor_gcd(const nuq::IntMatrix& m, std::size_t k) {
    Int g = 0;
    for_each_subset(m.rows, k, [&](const std::vector<std::size_t>& rs) {
        for_each_subset(m.cols, k, [&](const std::vector<std::size_t>& cs) {
            std::vector<std::vector<mpq_class>> sq(k, std::vector<mpq_class>(k));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) sq[i][j] = m.at(rs[i], cs[j]);
            Int d = det_rational(sq);
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        });
    });
    return g;
}

// Invariant factors of Z^cols / rowspace via determinantal divisors.
inline nuq::FgAbGroup cokernel_by_minors(const nuq::IntMatrix& m) {
    nuq::FgAbGroup G;
    Int prev = 1;
    std::size_t rank = 0;
    for (std::size_t k = 1; k <= std::min(m.rows, m.cols); ++k) {
        Int g = minor_gcd(m, k);
        if (g == 0) break;
        rank = k;
        Int dk = g / prev;
        if (dk != 1) G.torsion.push_back(dk);
        prev = g;
    }
    G.free_rank = m.cols - rank;
    return G;
}

// Link determinant as the gcd of the (n-1) x (n-1) minors that avoid the first column.
inline Int det_oracle(const nuq::IntMatrix& r) {
    return minor_gcd(r.without_col(0), r.cols - 1);
}

// Subgroup of a finite group generated by gens, by closure under addition.
inline std::set<nuq::GroupElt> span(const nuq::FgAbGroup& G, const std::vector<nuq::GroupElt>& gens) {
    std::set<nuq::GroupElt> seen{nuq::zero(G)};
    std::vector<nuq::GroupElt> todo{nuq::zero(G)};
    while (!todo.empty()) {
        auto x = todo.back();
        todo.pop_back();
        for (const auto& g : gens) {
            auto y = nuq::add(G, x, g);
            if (seen.insert(y).second) todo.push_back(y);
        }
    }
    return seen;
}

// Element x -> (x_0 mod n_0, ...) for a group given by torsion factors only.
inline std::vector<std::vector<long>> all_tuples(const std::vector<long>& mods) {
    std::vector<std::vector<long>> out{{}};
    for (long n : mods) {
        std::vector<std::vector<long>> next;
        for (const auto& t : out)
            for (long v = 0; v < n; ++v) {
                auto u = t;
                u.push_back(v);
                next.push_back(u);
            }
        out = next;
    }
    return out;
}

// Number of fixed points of each translation.
inline std::vector<int> fixed_point_counts(const nuq::FiniteQuandle& q) {
    std::vector<int> out;
    for (int y = 0; y < q.n; ++y) {
        int c = 0;
        for (int x = 0; x < q.n; ++x) c += q(x, y) == x;
        out.push_back(c);
    }
    return out;
}

// Orbits by flood fill over x -> x |> y.
inline std::size_t orbit_count(const nuq::FiniteQuandle& q) {
    std::vector<int> comp(q.n, -1);
    std::size_t k = 0;
    for (int s = 0; s < q.n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> st{s};
        comp[s] = static_cast<int>(k);
        while (!st.empty()) {
            int x = st.back();
            st.pop_back();
            for (int y = 0; y < q.n; ++y) {
                int z = q(x, y);
                if (comp[z] < 0) {
                    comp[z] = static_cast<int>(k);
                    st.push_back(z);
                }
            }
        }
        ++k;
    }
    return k;
}

// Direct axiom check: idempotence, involution, right distributivity, mediality.
inline bool is_involutory_medial(const nuq::FiniteQuandle& q) {
    for (int x = 0; x < q.n; ++x) {
        if (q(x, x) != x) return false;
        for (int y = 0; y < q.n; ++y) {
            if (q(q(x, y), y) != x) return false;
            for (int z = 0; z < q.n; ++z) {
                if (q(q(x, y), z) != q(q(x, z), q(y, z))) return false;
                for (int w = 0; w < q.n; ++w)
                    if (q(q(x, y), q(z, w)) != q(q(x, z), q(y, w))) return false;
            }
        }
    }
    return true;
}

}  // namespace oracle
