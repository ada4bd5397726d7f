#include "nuq/abgroup.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace nuq {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rs, std::size_t cols) {
    IntMatrix m(rs.size(), cols);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (rs[i].size() != cols) throw std::invalid_argument("from_rows: ragged input");
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rs[i][j];
    }
    return m;
}

std::vector<Int> IntMatrix::row(std::size_t i) const {
    return std::vector<Int>(a.begin() + i * cols, a.begin() + (i + 1) * cols);
}

void IntMatrix::append_row(const std::vector<Int>& r) {
    if (r.size() != cols) throw std::invalid_argument("append_row: width mismatch");
    a.insert(a.end(), r.begin(), r.end());
    ++rows;
}

IntMatrix IntMatrix::without_row(std::size_t r) const {
    IntMatrix m(rows - 1, cols);
    for (std::size_t i = 0, k = 0; i < rows; ++i) {
        if (i == r) continue;
        for (std::size_t j = 0; j < cols; ++j) m.at(k, j) = at(i, j);
        ++k;
    }
    return m;
}

IntMatrix IntMatrix::without_col(std::size_t c) const {
    IntMatrix m(rows, cols - 1);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0, k = 0; j < cols; ++j) {
            if (j == c) continue;
            m.at(i, k++) = at(i, j);
        }
    return m;
}

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix product: shape mismatch");
    IntMatrix r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const Int& v = x.at(i, k);
            if (v == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
        }
    return r;
}

Int determinant(const IntMatrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant: not square");
    std::size_t n = m.rows;
    if (n == 0) return 1;
    IntMatrix b = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (b.at(k, k) == 0) {
            std::size_t s = k + 1;
            while (s < n && b.at(s, k) == 0) ++s;
            if (s == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(b.at(k, j), b.at(s, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int v = b.at(i, j) * b.at(k, k) - b.at(i, k) * b.at(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                b.at(i, j) = v;
            }
        }
        prev = b.at(k, k);
    }
    Int d = b.at(n - 1, n - 1);
    return sign > 0 ? d : Int(-d);
}

std::size_t SmithForm::rank() const {
    std::size_t r = 0;
    while (r < d.size() && d[r] != 0) ++r;
    return r;
}

namespace {

class SnfWork {
public:
    SnfWork(const IntMatrix& A, SnfOptions opt) : B(A), m(A.rows), n(A.cols), opt_(opt) {
        if (opt.track_u) U = IntMatrix::identity(m);
        if (opt.track_v) {
            V = IntMatrix::identity(n);
            Vinv = IntMatrix::identity(n);
        }
    }

    void run() {
        std::size_t lim = std::min(m, n);
        for (std::size_t t = 0; t < lim; ++t) {
            if (!place_min(t, t, m, t, n)) break;
            reduce(t);
            if (B.at(t, t) < 0) negate_row(t);
        }
    }

    IntMatrix B, U, V, Vinv;
    std::size_t m, n;

private:
    SnfOptions opt_;

    // Move the nonzero entry of least absolute value in B[r0..r1) x [c0..c1) to (t,t).
    bool place_min(std::size_t t, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
        std::size_t bi = 0, bj = 0;
        bool found = false;
        Int best;
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = c0; j < c1; ++j) {
                const Int& v = B.at(i, j);
                if (v == 0) continue;
                if (!found || mpz_cmpabs(v.get_mpz_t(), best.get_mpz_t()) < 0) {
                    best = v;
                    bi = i;
                    bj = j;
                    found = true;
                }
            }
        if (!found) return false;
        if (bi != t) swap_rows(bi, t);
        if (bj != t) swap_cols(bj, t);
        return true;
    }

    void reduce(std::size_t t) {
        Int q;
        for (;;) {
            const Int& p = B.at(t, t);
            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (B.at(i, t) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), B.at(i, t).get_mpz_t(), p.get_mpz_t());
                if (q != 0) row_addmul(i, t, -q);
                if (B.at(i, t) != 0) dirty = true;
            }
            if (dirty) {
                place_min(t, t, m, t, t + 1);
                continue;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (B.at(t, j) == 0) continue;
                mpz_tdiv_q(q.get_mpz_t(), B.at(t, j).get_mpz_t(), B.at(t, t).get_mpz_t());
                if (q != 0) col_addmul(j, t, -q);
                if (B.at(t, j) != 0) dirty = true;
            }
            if (dirty) {
                place_min(t, t, t + 1, t, n);
                continue;
            }
            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n; ++j) {
                    if (!mpz_divisible_p(B.at(i, j).get_mpz_t(), B.at(t, t).get_mpz_t())) {
                        row_addmul(t, i, Int(1));
                        fixed = true;
                        break;
                    }
                }
            if (!fixed) return;
        }
    }

    void swap_rows(std::size_t i, std::size_t k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(B.at(i, j), B.at(k, j));
        if (opt_.track_u)
            for (std::size_t j = 0; j < m; ++j) std::swap(U.at(i, j), U.at(k, j));
    }

    void swap_cols(std::size_t j, std::size_t k) {
        for (std::size_t i = 0; i < m; ++i) std::swap(B.at(i, j), B.at(i, k));
        if (opt_.track_v) {
            for (std::size_t i = 0; i < n; ++i) std::swap(V.at(i, j), V.at(i, k));
            for (std::size_t c = 0; c < n; ++c) std::swap(Vinv.at(j, c), Vinv.at(k, c));
        }
    }

    void negate_row(std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) B.at(i, j) = -B.at(i, j);
        if (opt_.track_u)
            for (std::size_t j = 0; j < m; ++j) U.at(i, j) = -U.at(i, j);
    }

    // row_i += c * row_k
    void row_addmul(std::size_t i, std::size_t k, const Int& c) {
        for (std::size_t j = 0; j < n; ++j)
            if (B.at(k, j) != 0) B.at(i, j) += c * B.at(k, j);
        if (opt_.track_u)
            for (std::size_t j = 0; j < m; ++j)
                if (U.at(k, j) != 0) U.at(i, j) += c * U.at(k, j);
    }

    // col_j += c * col_k; the inverse acts on Vinv rows: row_k -= c * row_j
    void col_addmul(std::size_t j, std::size_t k, const Int& c) {
        for (std::size_t i = 0; i < m; ++i)
            if (B.at(i, k) != 0) B.at(i, j) += c * B.at(i, k);
        if (opt_.track_v) {
            for (std::size_t i = 0; i < n; ++i)
                if (V.at(i, k) != 0) V.at(i, j) += c * V.at(i, k);
            for (std::size_t x = 0; x < n; ++x)
                if (Vinv.at(j, x) != 0) Vinv.at(k, x) -= c * Vinv.at(j, x);
        }
    }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& A, SnfOptions opt) {
    SnfWork w(A, opt);
    w.run();
    SmithForm sf;
    std::size_t lim = std::min(A.rows, A.cols);
    sf.d.resize(lim);
    for (std::size_t i = 0; i < lim; ++i) sf.d[i] = w.B.at(i, i);
    sf.U = std::move(w.U);
    sf.V = std::move(w.V);
    sf.Vinv = std::move(w.Vinv);
    return sf;
}

namespace {

// Coordinate indices of the SNF that survive in the cokernel: torsion first, then free.
std::pair<std::vector<std::size_t>, FgAbGroup> cokernel_layout(const std::vector<Int>& d, std::size_t cols) {
    std::vector<std::size_t> idx;
    FgAbGroup G;
    std::vector<std::size_t> free_idx;
    for (std::size_t i = 0; i < cols; ++i) {
        if (i < d.size() && d[i] != 0) {
            if (d[i] != 1) {
                idx.push_back(i);
                G.torsion.push_back(d[i]);
            }
        } else {
            free_idx.push_back(i);
        }
    }
    G.free_rank = free_idx.size();
    idx.insert(idx.end(), free_idx.begin(), free_idx.end());
    return {idx, G};
}

}  // namespace

std::pair<FgAbGroup, Presentation> cokernel(const IntMatrix& A) {
    SmithForm sf = smith_normal_form(A, {false, true});
    auto [idx, G] = cokernel_layout(sf.d, A.cols);
    Presentation P;
    P.n_gens = A.cols;
    P.relations = A;
    P.to_canonical = IntMatrix(A.cols, idx.size());
    P.lift = IntMatrix(idx.size(), A.cols);
    for (std::size_t c = 0; c < idx.size(); ++c) {
        for (std::size_t i = 0; i < A.cols; ++i) {
            P.to_canonical.at(i, c) = sf.V.at(i, idx[c]);
            P.lift.at(c, i) = sf.Vinv.at(idx[c], i);
        }
    }
    return {G, P};
}

FgAbGroup cokernel_group(const IntMatrix& A) {
    SmithForm sf = smith_normal_form(A, {false, false});
    return cokernel_layout(sf.d, A.cols).second;
}

std::string FgAbGroup::to_string() const {
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first) os << " + ";
        first = false;
    };
    for (std::size_t i = 0; i < free_rank; ++i) {
        sep();
        os << "Z";
    }
    for (const Int& t : torsion) {
        sep();
        os << "Z" << t.get_str();
    }
    if (first) os << "0";
    return os.str();
}

GroupElt zero(const FgAbGroup& G) { return GroupElt(G.ncoords(), Int(0)); }

GroupElt unit(const FgAbGroup& G, std::size_t k) {
    GroupElt x = zero(G);
    x.at(k) = 1;
    return normalize(G, std::move(x));
}

GroupElt normalize(const FgAbGroup& G, GroupElt x) {
    if (x.size() != G.ncoords()) throw std::invalid_argument("normalize: coordinate count mismatch");
    for (std::size_t i = 0; i < G.torsion.size(); ++i)
        mpz_fdiv_r(x[i].get_mpz_t(), x[i].get_mpz_t(), G.torsion[i].get_mpz_t());
    return x;
}

GroupElt add(const FgAbGroup& G, const GroupElt& x, const GroupElt& y) {
    GroupElt r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return normalize(G, std::move(r));
}

GroupElt sub(const FgAbGroup& G, const GroupElt& x, const GroupElt& y) {
    GroupElt r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return normalize(G, std::move(r));
}

GroupElt neg(const FgAbGroup& G, const GroupElt& x) {
    GroupElt r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = -x[i];
    return normalize(G, std::move(r));
}

GroupElt smul(const FgAbGroup& G, const Int& n, const GroupElt& x) {
    GroupElt r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = n * x[i];
    return normalize(G, std::move(r));
}

bool is_zero(const GroupElt& x) {
    return std::all_of(x.begin(), x.end(), [](const Int& v) { return v == 0; });
}

bool is_torsion(const FgAbGroup& G, const GroupElt& x) {
    for (std::size_t i = G.torsion.size(); i < x.size(); ++i)
        if (x[i] != 0) return false;
    return true;
}

std::optional<Int> order_of(const FgAbGroup& G, const GroupElt& x) {
    if (!is_torsion(G, x)) return std::nullopt;
    Int ord = 1;
    for (std::size_t i = 0; i < G.torsion.size(); ++i) {
        Int g = gcd(x[i], G.torsion[i]);
        Int o = G.torsion[i] / g;
        ord = lcm(ord, o);
    }
    return ord;
}

std::optional<Int> order(const FgAbGroup& G) {
    if (!G.is_finite()) return std::nullopt;
    Int o = 1;
    for (const Int& t : G.torsion) o *= t;
    return o;
}

std::size_t two_rank(const FgAbGroup& G) {
    std::size_t k = 0;
    for (const Int& t : G.torsion)
        if (mpz_even_p(t.get_mpz_t())) ++k;
    return G.free_rank + k;
}

FgAbGroup torsion_subgroup(const FgAbGroup& G) { return FgAbGroup{0, G.torsion}; }

std::vector<Int> two_primary_factors(const FgAbGroup& G) {
    std::vector<Int> out;
    for (const Int& t : G.torsion) {
        if (!mpz_even_p(t.get_mpz_t())) continue;
        Int p = 1;
        Int r = t;
        while (mpz_even_p(r.get_mpz_t())) {
            r /= 2;
            p *= 2;
        }
        out.push_back(p);
    }
    return out;
}

GroupElt apply_presentation(const FgAbGroup& G, const Presentation& P, const std::vector<Int>& x) {
    if (x.size() != P.n_gens) throw std::invalid_argument("apply_presentation: wrong length");
    GroupElt y(G.ncoords());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t c = 0; c < y.size(); ++c) y[c] += x[i] * P.to_canonical.at(i, c);
    }
    return normalize(G, std::move(y));
}

namespace {

std::vector<GroupElt> enumerate_box(const FgAbGroup& G, const std::vector<Int>& bound,
                                    const std::vector<Int>& step) {
    std::size_t k = G.torsion.size();
    std::vector<GroupElt> out;
    GroupElt x = zero(G);
    for (;;) {
        out.push_back(x);
        std::size_t i = 0;
        for (; i < k; ++i) {
            x[i] += step[i];
            if (x[i] < bound[i]) break;
            x[i] = 0;
        }
        if (i == k) break;
    }
    return out;
}

}  // namespace

std::vector<GroupElt> torsion_elements(const FgAbGroup& G) {
    std::vector<Int> step(G.torsion.size(), Int(1));
    return enumerate_box(G, G.torsion, step);
}

std::vector<GroupElt> elements_of_order_dividing_2(const FgAbGroup& G) {
    std::vector<Int> step(G.torsion.size());
    for (std::size_t i = 0; i < G.torsion.size(); ++i)
        step[i] = mpz_even_p(G.torsion[i].get_mpz_t()) ? Int(G.torsion[i] / 2) : G.torsion[i];
    return enumerate_box(G, G.torsion, step);
}

std::vector<GroupElt> all_elements(const FgAbGroup& G) {
    if (!G.is_finite()) throw InfiniteEnumeration();
    return torsion_elements(G);
}

std::size_t element_index(const FgAbGroup& G, const GroupElt& x) {
    Int idx = 0, radix = 1;
    for (std::size_t i = 0; i < G.torsion.size(); ++i) {
        idx += x[i] * radix;
        radix *= G.torsion[i];
    }
    return idx.get_ui();
}

std::string elt_to_string(const GroupElt& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ",";
        s += x[i].get_str();
    }
    return s + ")";
}

namespace {

IntMatrix stacked(const FgAbGroup& G, const std::vector<GroupElt>& gens) {
    std::size_t n = G.ncoords();
    IntMatrix S(0, n);
    for (const GroupElt& g : gens) S.append_row(g);
    for (std::size_t i = 0; i < G.torsion.size(); ++i) {
        std::vector<Int> r(n);
        r[i] = G.torsion[i];
        S.append_row(r);
    }
    return S;
}

}  // namespace

SubgroupTester::SubgroupTester(const FgAbGroup& G, const std::vector<GroupElt>& gens) {
    SmithForm sf = smith_normal_form(stacked(G, gens), {false, true});
    d_ = sf.d;
    d_.resize(G.ncoords(), Int(0));
    V_ = std::move(sf.V);
}

bool SubgroupTester::contains(const GroupElt& x) const {
    std::size_t n = d_.size();
    for (std::size_t j = 0; j < n; ++j) {
        Int y = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] != 0) y += x[i] * V_.at(i, j);
        if (d_[j] == 0) {
            if (y != 0) return false;
        } else if (!mpz_divisible_p(y.get_mpz_t(), d_[j].get_mpz_t())) {
            return false;
        }
    }
    return true;
}

bool subgroup_membership(const FgAbGroup& G, const std::vector<GroupElt>& gens, const GroupElt& x) {
    return SubgroupTester(G, gens).contains(x);
}

FgAbGroup subgroup_quotient(const FgAbGroup& G, const std::vector<GroupElt>& gens) {
    return cokernel_group(stacked(G, gens));
}

FgAbGroup subgroup_structure(const FgAbGroup& G, const std::vector<GroupElt>& gens) {
    std::size_t g = gens.size();
    if (g == 0) return FgAbGroup{};
    IntMatrix S = stacked(G, gens);
    SmithForm sf = smith_normal_form(S, {true, false});
    std::size_t r = sf.rank();
    IntMatrix K(0, g);
    for (std::size_t i = r; i < S.rows; ++i) {
        std::vector<Int> row(g);
        for (std::size_t j = 0; j < g; ++j) row[j] = sf.U.at(i, j);
        K.append_row(row);
    }
    return cokernel_group(K);
}

}  // namespace nuq
