#include "nuq/quandle.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace nuq {

Perm FiniteQuandle::translation(int y) const {
    Perm p(n);
    for (int x = 0; x < n; ++x) p[x] = (*this)(x, y);
    return p;
}

std::vector<std::string> check_axioms(const FiniteQuandle& q, std::size_t limit) {
    std::vector<std::string> out;
    int n = q.n;
    auto s = [](int v) { return std::to_string(v); };
    if (q.op.size() != static_cast<std::size_t>(n) * n) return {"table has wrong size"};
    for (int v : q.op)
        if (v < 0 || v >= n) return {"table entry out of range"};
    for (int x = 0; x < n && out.size() < limit; ++x)
        if (q(x, x) != x) out.push_back("idempotence fails at x=" + s(x));
    for (int x = 0; x < n && out.size() < limit; ++x)
        for (int y = 0; y < n && out.size() < limit; ++y)
            if (q(q(x, y), y) != x) out.push_back("involution fails at x=" + s(x) + " y=" + s(y));
    for (int x = 0; x < n && out.size() < limit; ++x)
        for (int y = 0; y < n && out.size() < limit; ++y)
            for (int z = 0; z < n && out.size() < limit; ++z)
                if (q(q(x, y), z) != q(q(x, z), q(y, z)))
                    out.push_back("right distributivity fails at x=" + s(x) + " y=" + s(y) + " z=" + s(z));
    for (int w = 0; w < n && out.size() < limit; ++w)
        for (int x = 0; x < n && out.size() < limit; ++x) {
            int wx = q(w, x);
            for (int y = 0; y < n && out.size() < limit; ++y) {
                int wy = q(w, y);
                for (int z = 0; z < n; ++z) {
                    if (q(wx, q(y, z)) != q(wy, q(x, z))) {
                        out.push_back("mediality fails at w=" + s(w) + " x=" + s(x) + " y=" + s(y) + " z=" + s(z));
                        if (out.size() >= limit) break;
                    }
                }
            }
        }
    return out;
}

std::vector<int> orbits(const FiniteQuandle& q) {
    std::vector<int> parent(q.n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int x = 0; x < q.n; ++x)
        for (int y = 0; y < q.n; ++y) {
            int a = find(x), b = find(q(x, y));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::vector<int> id(q.n, -1), out(q.n);
    int next = 0;
    for (int x = 0; x < q.n; ++x) {
        int r = find(x);
        if (id[r] < 0) id[r] = next++;
        out[x] = id[r];
    }
    return out;
}

std::vector<std::vector<int>> orbit_lists(const FiniteQuandle& q) {
    std::vector<int> o = orbits(q);
    int k = o.empty() ? 0 : *std::max_element(o.begin(), o.end()) + 1;
    std::vector<std::vector<int>> lists(k);
    for (int x = 0; x < q.n; ++x) lists[o[x]].push_back(x);
    return lists;
}

namespace {

struct PermHash {
    std::size_t operator()(const Perm& p) const {
        std::size_t h = 1469598103934665603ull;
        for (int v : p) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
        return h;
    }
};

Perm compose(const Perm& a, const Perm& b) {  // (a b)(x) = a(b(x))
    Perm r(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) r[x] = a[b[x]];
    return r;
}

}  // namespace

DisGroup displacement_group(const FiniteQuandle& q, std::size_t cap) {
    DisGroup dis;
    Perm id(q.n);
    std::iota(id.begin(), id.end(), 0);
    dis.elements.push_back(id);
    if (q.n == 0) return dis;
    std::unordered_map<Perm, std::size_t, PermHash> index{{id, 0}};
    std::vector<std::vector<long>> coords{{}};
    std::vector<std::vector<long>> relations;
    Perm b0 = q.translation(0);
    for (int y = 1; y < q.n; ++y) {
        Perm h = compose(q.translation(y), b0);
        if (index.count(h)) continue;
        for (const Perm& g : dis.generators)
            if (compose(g, h) != compose(h, g)) throw std::logic_error("displacement group is not abelian");
        std::size_t m = dis.generators.size();
        for (auto& c : coords) c.push_back(0);
        std::size_t old = dis.elements.size();
        Perm cur = h;
        long k = 1;
        while (!index.count(cur)) {
            for (std::size_t i = 0; i < old; ++i) {
                Perm e = compose(dis.elements[i], cur);
                std::vector<long> c = coords[i];
                c[m] = k;
                index.emplace(e, dis.elements.size());
                dis.elements.push_back(std::move(e));
                coords.push_back(std::move(c));
                if (dis.elements.size() > cap) throw CapExceeded("displacement group exceeds cap");
            }
            cur = compose(cur, h);
            ++k;
        }
        // h^k equals an element of the old subgroup
        std::vector<long> rel = coords[index.at(cur)];
        for (auto& v : rel) v = -v;
        rel[m] += k;
        for (auto& r : relations) r.push_back(0);
        relations.push_back(rel);
        dis.generators.push_back(h);
    }
    std::size_t m = dis.generators.size();
    dis.iso = cokernel_group(IntMatrix::from_rows(relations, m));
    return dis;
}

bool is_semiregular(const FiniteQuandle&, const DisGroup& dis) {
    for (std::size_t i = 1; i < dis.elements.size(); ++i) {
        const Perm& p = dis.elements[i];
        for (std::size_t x = 0; x < p.size(); ++x)
            if (p[x] == static_cast<int>(x)) return false;
    }
    return true;
}

bool is_semiregular(const FiniteQuandle& q) { return is_semiregular(q, displacement_group(q)); }

FiniteQuandle core_subquandle(const FgAbGroup& A, const std::vector<GroupElt>& elems) {
    int n = static_cast<int>(elems.size());
    FiniteQuandle q(n);
    std::map<GroupElt, int> pos;
    for (int i = 0; i < n; ++i) pos.emplace(elems[i], i);
    for (int x = 0; x < n; ++x) {
        q.labels.push_back(elt_to_string(elems[x]));
        for (int y = 0; y < n; ++y) {
            GroupElt v = sub(A, smul(A, Int(2), elems[y]), elems[x]);
            auto it = pos.find(v);
            if (it == pos.end()) throw std::invalid_argument("element set is not closed under 2b - a");
            q.at(x, y) = it->second;
        }
    }
    return q;
}

FiniteQuandle core_quandle(const FgAbGroup& A) {
    if (!A.is_finite()) throw InfiniteEnumeration();
    return core_subquandle(A, all_elements(A));
}

std::vector<GroupElt> characteristic_elements(const FgAbGroup& A) {
    if (!A.is_finite()) throw InfiniteEnumeration();
    std::vector<GroupElt> out;
    for (GroupElt& x : all_elements(A)) {
        int odd = 0;
        for (std::size_t i = 0; i < A.torsion.size(); ++i)
            if (mpz_even_p(A.torsion[i].get_mpz_t()) && mpz_odd_p(x[i].get_mpz_t())) ++odd;
        if (odd <= 1) out.push_back(std::move(x));
    }
    return out;
}

FiniteQuandle characteristic_subquandle(const FgAbGroup& A) {
    return core_subquandle(A, characteristic_elements(A));
}

std::vector<int> generated_subquandle(const FiniteQuandle& q, const std::vector<int>& gens) {
    std::vector<char> in(q.n, 0);
    std::vector<int> elems;
    for (int g : gens)
        if (!in[g]) {
            in[g] = 1;
            elems.push_back(g);
        }
    for (std::size_t i = 0; i < elems.size(); ++i) {
        int u = elems[i];
        for (std::size_t j = 0; j <= i; ++j) {
            int v = elems[j];
            for (int z : {q(u, v), q(v, u)})
                if (!in[z]) {
                    in[z] = 1;
                    elems.push_back(z);
                }
        }
    }
    std::sort(elems.begin(), elems.end());
    return elems;
}

FiniteQuandle subquandle(const FiniteQuandle& q, const std::vector<int>& elems) {
    int n = static_cast<int>(elems.size());
    std::vector<int> pos(q.n, -1);
    for (int i = 0; i < n; ++i) pos[elems[i]] = i;
    FiniteQuandle s(n);
    for (int x = 0; x < n; ++x) {
        if (!q.labels.empty()) s.labels.push_back(q.labels[elems[x]]);
        for (int y = 0; y < n; ++y) {
            int z = pos[q(elems[x], elems[y])];
            if (z < 0) throw std::invalid_argument("subset is not a subquandle");
            s.at(x, y) = z;
        }
    }
    return s;
}

bool is_homomorphism(const FiniteQuandle& q1, const FiniteQuandle& q2, const std::vector<int>& f) {
    if (static_cast<int>(f.size()) != q1.n) return false;
    for (int x = 0; x < q1.n; ++x)
        for (int y = 0; y < q1.n; ++y)
            if (f[q1(x, y)] != q2(f[x], f[y])) return false;
    return true;
}

namespace {

using Sig = std::vector<long>;

std::vector<Sig> element_signatures(const FiniteQuandle& q) {
    std::vector<int> orb = orbits(q);
    std::vector<long> orb_size(q.n, 0);
    for (int x = 0; x < q.n; ++x) ++orb_size[orb[x]];
    std::map<Perm, long> same;
    std::vector<Perm> tr(q.n);
    for (int y = 0; y < q.n; ++y) {
        tr[y] = q.translation(y);
        ++same[tr[y]];
    }
    std::vector<Sig> sig(q.n);
    for (int x = 0; x < q.n; ++x) {
        long fix = 0, fix_orbit = 0, stab = 0;
        for (int z = 0; z < q.n; ++z) {
            if (tr[x][z] == z) {
                ++fix;
                if (orb[z] == orb[x]) ++fix_orbit;
            }
            if (q(x, z) == x) ++stab;
        }
        sig[x] = {orb_size[orb[x]], fix, fix_orbit, same[tr[x]], stab};
    }
    return sig;
}

class IsoSearch {
public:
    IsoSearch(const FiniteQuandle& a, const FiniteQuandle& b, std::vector<Sig> sa, std::vector<Sig> sb)
        : q1(a), q2(b), s1(std::move(sa)), s2(std::move(sb)), f(a.n, -1), finv(b.n, -1) {}

    bool run(const std::vector<int>& seq, const std::vector<std::pair<int, int>>& pinned) {
        for (auto [x, y] : pinned) {
            if (f[x] >= 0) {
                if (f[x] != y) return false;
                continue;
            }
            if (!extend(x, y)) return false;
        }
        return search(seq, 0);
    }

    const FiniteQuandle& q1;
    const FiniteQuandle& q2;
    std::vector<Sig> s1, s2;
    std::vector<int> f, finv;

private:
    std::vector<int> dom;  // domain in assignment order
    std::vector<int> trail;

    bool assign(int x, int y, std::vector<int>& queue) {
        if (f[x] >= 0) return f[x] == y;
        if (finv[y] >= 0 || s1[x] != s2[y]) return false;
        f[x] = y;
        finv[y] = x;
        trail.push_back(x);
        queue.push_back(x);
        return true;
    }

    bool extend(int x, int y) {
        std::vector<int> queue;
        if (!assign(x, y, queue)) return false;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            dom.push_back(u);
            for (std::size_t j = 0; j < dom.size(); ++j) {
                int v = dom[j];
                if (!assign(q1(u, v), q2(f[u], f[v]), queue)) return false;
                if (!assign(q1(v, u), q2(f[v], f[u]), queue)) return false;
            }
        }
        return true;
    }

    void undo(std::size_t trail_size, std::size_t dom_size) {
        while (trail.size() > trail_size) {
            int x = trail.back();
            trail.pop_back();
            finv[f[x]] = -1;
            f[x] = -1;
        }
        dom.resize(dom_size);
    }

    bool search(const std::vector<int>& seq, std::size_t i) {
        while (i < seq.size() && f[seq[i]] >= 0) ++i;
        if (i == seq.size()) return static_cast<int>(dom.size()) == q1.n;
        int g = seq[i];
        for (int y = 0; y < q2.n; ++y) {
            if (finv[y] >= 0 || s1[g] != s2[y]) continue;
            std::size_t ts = trail.size(), ds = dom.size();
            if (extend(g, y) && search(seq, i + 1)) return true;
            undo(ts, ds);
        }
        return false;
    }
};

}  // namespace

std::optional<std::vector<int>> is_isomorphic(const FiniteQuandle& q1, const FiniteQuandle& q2,
                                              const std::vector<std::pair<int, int>>& pinned) {
    if (q1.n != q2.n) return std::nullopt;
    if (q1.n == 0) return std::vector<int>{};
    std::vector<Sig> s1 = element_signatures(q1), s2 = element_signatures(q2);
    {
        std::vector<Sig> a = s1, b = s2;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return std::nullopt;
    }
    for (auto [x, y] : pinned)
        if (s1[x] != s2[y]) return std::nullopt;
    if (displacement_group(q1).iso != displacement_group(q2).iso) return std::nullopt;

    // generators: pinned elements first, then rarest signatures
    std::map<Sig, int> freq;
    for (const Sig& s : s1) ++freq[s];
    std::vector<int> order(q1.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return freq[s1[a]] < freq[s1[b]]; });
    std::vector<int> seq;
    for (auto [x, _] : pinned) seq.push_back(x);
    std::vector<char> covered(q1.n, 0);
    for (int x : generated_subquandle(q1, seq)) covered[x] = 1;
    for (int x : order) {
        if (covered[x]) continue;
        seq.push_back(x);
        for (int z : generated_subquandle(q1, seq)) covered[z] = 1;
    }

    IsoSearch s(q1, q2, std::move(s1), std::move(s2));
    if (!s.run(seq, pinned)) return std::nullopt;
    return s.f;
}

FgAbGroup group_from_quandle(const FiniteQuandle& q) {
    IntMatrix rel(static_cast<std::size_t>(q.n) * q.n, q.n);
    std::size_t r = 0;
    for (int x = 0; x < q.n; ++x)
        for (int y = 0; y < q.n; ++y, ++r) {
            rel.at(r, y) += 2;
            rel.at(r, x) -= 1;
            rel.at(r, q(x, y)) -= 1;
        }
    return cokernel_group(rel);
}

FiniteQuandle build_partition_quandle(int n, const std::vector<int>& partner, const std::vector<Perm>& translations) {
    if (static_cast<int>(partner.size()) != n || static_cast<int>(translations.size()) != n)
        throw std::invalid_argument("partition quandle: size mismatch");
    for (int x = 0; x < n; ++x)
        if (partner[x] < 0 || partner[x] >= n || partner[partner[x]] != x)
            throw std::invalid_argument("partition quandle: partner map is not a pairing");
    FiniteQuandle q(n);
    for (int y = 0; y < n; ++y) {
        const Perm& b = translations[y];
        if (static_cast<int>(b.size()) != n) throw std::invalid_argument("partition quandle: bad translation");
        if (b[y] != y) throw std::invalid_argument("partition quandle: translation does not fix its element");
        for (int x = 0; x < n; ++x)
            if (b[x] != x && b[x] != partner[x])
                throw std::invalid_argument("partition quandle: translation does not respect the partition");
        if (translations[partner[y]] != b)
            throw std::invalid_argument("partition quandle: paired elements have different translations");
        for (int x = 0; x < n; ++x) q.at(x, y) = b[x];
    }
    if (!check_axioms(q, 1).empty()) throw std::logic_error("partition quandle fails the axioms");
    return q;
}

void write_table(std::ostream& os, const FiniteQuandle& q) {
    os << q.n << "\n";
    for (int x = 0; x < q.n; ++x) {
        for (int y = 0; y < q.n; ++y) os << (y ? " " : "") << q(x, y);
        os << "\n";
    }
}

FiniteQuandle read_table(std::istream& is) {
    int n = -1;
    if (!(is >> n) || n < 0) throw std::invalid_argument("quandle table: bad size line");
    FiniteQuandle q(n);
    for (auto& v : q.op)
        if (!(is >> v) || v < 0 || v >= n) throw std::invalid_argument("quandle table: bad entry");
    return q;
}

}  // namespace nuq
