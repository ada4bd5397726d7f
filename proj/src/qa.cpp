#include "nuq/qa.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace nuq {

const char* tri_name(Tri t) {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        default: return "unknown";
    }
}

namespace {

Int pow2(unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

// odd part m_i and 2-adic valuation of each invariant factor
void split_factor(const Int& t, Int& odd, unsigned long& v) {
    v = mpz_scan1(t.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(odd.get_mpz_t(), t.get_mpz_t(), v);
}

std::vector<GroupElt> two_primary_elements(const FgAbGroup& G) {
    std::vector<GroupElt> out{zero(G)};
    for (std::size_t i = 0; i < G.torsion.size(); ++i) {
        Int odd;
        unsigned long v;
        split_factor(G.torsion[i], odd, v);
        if (v == 0) continue;
        std::vector<GroupElt> next;
        for (const GroupElt& x : out)
            for (Int c = 0; c < G.torsion[i]; c += odd) {
                GroupElt y = x;
                y[i] = c;
                next.push_back(std::move(y));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<GroupElt> odd_torsion_generators(const FgAbGroup& G) {
    std::vector<GroupElt> out;
    for (std::size_t i = 0; i < G.torsion.size(); ++i) {
        Int odd;
        unsigned long v;
        split_factor(G.torsion[i], odd, v);
        if (odd == 1) continue;
        GroupElt x = zero(G);
        x[i] = pow2(v);
        out.push_back(normalize(G, x));
    }
    return out;
}

ParityVec unit_parity(int mu, int c) {
    ParityVec v(mu, 0);
    v[c] = 1;
    return v;
}

ParityVec pair_parity(int mu, int a, int b) {
    ParityVec v(mu, 0);
    v[a] ^= 1;
    v[b] ^= 1;
    return v;
}

std::pair<Int, ParityVec> phi_under(const NuModule& m, const std::vector<int>& indexing, const GroupElt& x) {
    ParityVec p = m.p(x);
    ParityVec out;
    for (std::size_t j = 1; j < indexing.size(); ++j) out.push_back(p[indexing[j]]);
    return {m.w(x), out};
}

std::optional<Int> subgroup_order(const FgAbGroup& G, const std::vector<GroupElt>& gens) {
    return order(subgroup_structure(G, gens));
}

using Mat2 = std::vector<std::vector<int>>;

std::optional<Mat2> inverse_mod2(Mat2 a) {
    std::size_t n = a.size();
    Mat2 inv(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && !a[p][c]) ++p;
        if (p == n) return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        for (std::size_t i = 0; i < n; ++i)
            if (i != c && a[i][c]) {
                for (std::size_t j = 0; j < n; ++j) {
                    a[i][j] ^= a[c][j];
                    inv[i][j] ^= inv[c][j];
                }
            }
    }
    return inv;
}

// Integer matrix with determinant +-1 reducing to h mod 2 (h invertible over Z_2).
std::vector<std::vector<Int>> unimodular_lift(Mat2 h) {
    std::size_t n = h.size();
    struct Op {
        bool swap;
        std::size_t i, j;  // swap rows i,j or row_i += row_j
    };
    std::vector<Op> ops;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && !h[p][c]) ++p;
        if (p == n) throw InternalError("unimodular_lift: singular matrix");
        if (p != c) {
            std::swap(h[p], h[c]);
            ops.push_back({true, p, c});
        }
        for (std::size_t i = 0; i < n; ++i)
            if (i != c && h[i][c]) {
                for (std::size_t j = 0; j < n; ++j) h[i][j] ^= h[c][j];
                ops.push_back({false, i, c});
            }
    }
    // ops_k ... ops_1 h = I, so h = ops_1 ... ops_k over Z_2; lift each elementary op.
    std::vector<std::vector<Int>> x(n, std::vector<Int>(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) x[i][i] = 1;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (it->swap) {
            std::swap(x[it->i], x[it->j]);
        } else {
            for (std::size_t c = 0; c < n; ++c) x[it->i][c] += x[it->j][c];
        }
    }
    return x;
}

// Free generators for a fixed indexing, given 2-primary torsion generators already placed.
std::vector<GroupElt> free_generators(const NuModule& m, const std::vector<int>& pi,
                                      const std::vector<GroupElt>& tors) {
    const FgAbGroup& M = m.group;
    std::size_t t0 = M.torsion.size(), r = M.free_rank;
    int mu = m.mu;
    int c1 = pi[0];
    std::size_t k = tors.size();
    std::vector<int> sigma(pi.begin() + r, pi.end());

    IntMatrix eta(1, r);
    for (std::size_t j = 0; j < r; ++j) eta.at(0, j) = m.w_coeff[t0 + j];
    SmithForm sf = smith_normal_form(eta, {false, true});
    if (sf.d.empty() || sf.d[0] != 1) throw InternalError("w is not primitive on the free part");
    std::vector<GroupElt> basis;
    for (std::size_t l = 0; l < r; ++l) {
        GroupElt b = zero(M);
        for (std::size_t j = 0; j < r; ++j) b[t0 + j] = sf.V.at(j, l);
        basis.push_back(b);
    }
    if (m.w(basis[0]) < 0) basis[0] = neg(M, basis[0]);

    auto quotient_coords = [&](ParityVec u) {
        for (std::size_t i = 0; i < k; ++i)
            if (u[sigma[i]]) {
                u[sigma[i]] ^= 1;
                u[c1] ^= 1;
            }
        std::vector<int> q(r, 0);
        int a = u[c1];
        for (std::size_t j = 1; j < r; ++j) {
            q[j] = u[pi[j]];
            a ^= q[j];
        }
        q[0] = a;
        return q;
    };

    Mat2 P(r, std::vector<int>(r, 0));
    for (std::size_t l = 0; l < r; ++l) {
        auto q = quotient_coords(m.p(basis[l]));
        for (std::size_t i = 0; i < r; ++i) P[i][l] = q[i];
    }
    auto Ginv = inverse_mod2(P);
    if (!Ginv) throw InternalError("parity map is not onto the free quotient");
    const Mat2& Gb = *Ginv;
    for (std::size_t j = 0; j < r; ++j)
        if (Gb[0][j] != (j == 0 ? 1 : 0)) throw InternalError("parity and augmentation disagree");

    std::vector<std::vector<Int>> G(r, std::vector<Int>(r, Int(0)));
    G[0][0] = 1;
    for (std::size_t l = 1; l < r; ++l) G[l][0] = Gb[l][0];
    if (r > 1) {
        Mat2 h(r - 1, std::vector<int>(r - 1));
        for (std::size_t i = 1; i < r; ++i)
            for (std::size_t j = 1; j < r; ++j) h[i - 1][j - 1] = Gb[i][j];
        auto H = unimodular_lift(h);
        for (std::size_t i = 1; i < r; ++i)
            for (std::size_t j = 1; j < r; ++j) G[i][j] = H[i - 1][j - 1];
    }

    std::vector<GroupElt> gens;
    for (std::size_t j = 0; j < r; ++j) {
        GroupElt g = zero(M);
        for (std::size_t l = 0; l < r; ++l)
            if (G[l][j] != 0) g = add(M, g, smul(M, G[l][j], basis[l]));
        ParityVec target = (j == 0) ? unit_parity(mu, c1) : pair_parity(mu, c1, pi[j]);
        ParityVec u = m.p(g);
        for (int c = 0; c < mu; ++c) u[c] ^= target[c];
        for (std::size_t i = 0; i < k; ++i)
            if (u[sigma[i]]) g = add(M, g, tors[i]);
        gens.push_back(g);
    }
    return gens;
}

}  // namespace

QaQuandle build_qa(const NuModule& m) {
    Int det = det_link(m);
    if (det == 0) throw QaInfinite();
    const FgAbGroup& M = m.group;
    std::vector<GroupElt> kphi;
    std::set<GroupElt> seen;
    for (const GroupElt& t : torsion_elements(M)) {
        GroupElt k = smul(M, Int(2), t);
        if (seen.insert(k).second) kphi.push_back(k);
    }
    QaQuandle qa;
    for (int c = 0; c < m.mu; ++c) {
        ArcId a = m.diagram.components[c].arcs.at(0);
        qa.component_rep.push_back(static_cast<int>(qa.element_map.size()));
        for (const GroupElt& k : kphi) {
            qa.element_map.push_back(add(M, m.sD[a], k));
            qa.element_component.push_back(c);
        }
    }
    qa.quandle = core_subquandle(M, qa.element_map);
    for (int x = 0; x < qa.quandle.n; ++x)
        qa.quandle.labels[x] = m.diagram.arc_names[m.diagram.components[qa.element_component[x]].arcs[0]] +
                               ":" + qa.quandle.labels[x];

    Int expect = Int(m.mu) * det;
    expect /= pow2(m.mu - 1);
    if (Int(qa.quandle.n) != expect) throw InternalError("|Q_A| differs from mu*det/2^(mu-1)");
    std::vector<int> orb = orbits(qa.quandle);
    int norb = *std::max_element(orb.begin(), orb.end()) + 1;
    if (norb != m.mu) throw InternalError("Q_A orbit count differs from mu");
    qa.orbit_component.assign(norb, -1);
    for (int x = 0; x < qa.quandle.n; ++x) {
        int& oc = qa.orbit_component[orb[x]];
        if (oc >= 0 && oc != qa.element_component[x]) throw InternalError("Q_A orbit spans two components");
        oc = qa.element_component[x];
    }
    return qa;
}

DisCheck dis_structure_check(const QaQuandle& qa, const NuModule& m) {
    DisCheck r;
    const FgAbGroup& M = m.group;
    std::vector<GroupElt> kgen = ker_phi_generators(m);
    r.ker_phi = subgroup_structure(M, kgen);
    DisGroup dis = displacement_group(qa.quandle);
    r.dis = dis.iso;
    if (r.dis != r.ker_phi) {
        r.detail = "Dis(Q_A) = " + r.dis.to_string() + " but ker phi = " + r.ker_phi.to_string();
        return r;
    }
    SubgroupTester in_kphi(M, kgen);
    for (const Perm& d : dis.elements) {
        GroupElt k = sub(M, qa.element_map[d[0]], qa.element_map[0]);
        if (!in_kphi.contains(k)) {
            r.detail = "displacement shifts by an element outside ker phi";
            return r;
        }
        for (int x = 0; x < qa.quandle.n; ++x)
            if (qa.element_map[d[x]] != add(M, qa.element_map[x], k)) {
                r.detail = "displacement is not a translation";
                return r;
            }
    }
    r.ok = true;
    r.detail = "Dis(Q_A) = ker phi = " + r.dis.to_string();
    return r;
}

bool verify_characteristic_witness(const NuModule& m, const std::vector<int>& indexing,
                                   const std::vector<GroupElt>& gens, std::string* why) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    const FgAbGroup& M = m.group;
    std::size_t mu = static_cast<std::size_t>(m.mu), r = M.free_rank;
    std::vector<Int> factors = two_primary_factors(M);
    if (indexing.size() != mu || gens.size() != mu) return fail("wrong number of generators");
    {
        std::vector<int> s = indexing;
        std::sort(s.begin(), s.end());
        for (std::size_t i = 0; i < mu; ++i)
            if (s[i] != static_cast<int>(i)) return fail("indexing is not a permutation");
    }
    for (std::size_t j = 0; j < mu; ++j) {
        auto ord = order_of(M, gens[j]);
        if (j < r) {
            if (ord) return fail("free slot holds a finite-order element");
        } else if (!ord || *ord != factors[j - r]) {
            return fail("torsion slot order mismatch");
        }
        auto [w, pv] = phi_under(m, indexing, gens[j]);
        if (w != (j == 0 ? 1 : 0)) return fail("w image is not a unit vector");
        for (std::size_t c = 1; c < mu; ++c)
            if (pv[c - 1] != (c == j ? 1 : 0)) return fail("parity image is not a unit vector");
    }
    std::vector<GroupElt> all = gens;
    for (auto& g : odd_torsion_generators(M)) all.push_back(g);
    FgAbGroup q = subgroup_quotient(M, all);
    if (q.free_rank != 0 || !q.torsion.empty()) return fail("generators do not span the module");
    if (why) why->clear();
    return true;
}

CharCompat characteristic_compatibility(const NuModule& m, std::size_t node_cap) {
    CharCompat out;
    const FgAbGroup& M = m.group;
    int mu = m.mu;
    std::size_t r = M.free_rank;
    std::vector<Int> factors = two_primary_factors(M);
    std::size_t k = factors.size();

    struct Cand {
        GroupElt t;
        Int ord;
        ParityVec p;
    };
    std::vector<Cand> cands;
    for (GroupElt& t : two_primary_elements(M)) {
        if (is_zero(t)) continue;
        Int o = *order_of(M, t);
        cands.push_back({t, o, m.p(t)});
    }

    std::map<std::vector<int>, bool> memo;  // (c1, sigma...) -> torsion part solvable
    std::vector<int> pi(mu);
    std::iota(pi.begin(), pi.end(), 0);
    bool capped = false;
    do {
        ++out.indexings_checked;
        int c1 = pi[0];
        std::vector<int> key{c1};
        key.insert(key.end(), pi.begin() + r, pi.end());
        auto it = memo.find(key);
        if (it != memo.end() && !it->second) continue;

        std::vector<GroupElt> chosen;
        std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
            if (i == k) return true;
            ParityVec want = pair_parity(mu, c1, pi[r + i]);
            Int prod = 1;
            for (std::size_t j = 0; j <= i; ++j) prod *= factors[j];
            for (const Cand& c : cands) {
                if (c.ord != factors[i] || c.p != want) continue;
                if (++out.nodes > node_cap) {
                    capped = true;
                    return false;
                }
                chosen.push_back(c.t);
                auto so = subgroup_order(M, chosen);
                if (so && *so == prod && place(i + 1)) return true;
                chosen.pop_back();
                if (capped) return false;
            }
            return false;
        };
        bool ok = place(0);
        if (capped) break;
        memo[key] = ok;
        if (!ok) continue;

        std::vector<GroupElt> gens = free_generators(m, pi, chosen);
        gens.insert(gens.end(), chosen.begin(), chosen.end());
        std::string why;
        if (!verify_characteristic_witness(m, pi, gens, &why))
            throw InternalError("characteristic witness failed verification: " + why);
        CharWitness w;
        w.indexing = pi;
        w.generators = gens;
        for (const auto& g : gens) w.phi_images.push_back(phi_under(m, pi, g));
        out.witness = std::move(w);
        out.verdict = Tri::Yes;
        return out;
    } while (std::next_permutation(pi.begin(), pi.end()));

    if (capped) {
        out.verdict = Tri::Unknown;
        out.certificate = "search cap reached after " + std::to_string(out.nodes) + " nodes";
        return out;
    }
    out.verdict = Tri::No;
    out.certificate = "all " + std::to_string(out.indexings_checked) +
                      " indexings exhausted; no 2-primary torsion tuple of the required orders maps to "
                      "distinct unit vectors";
    return out;
}

bool compare_qa_with_characteristic(const NuModule& m) {
    QaQuandle qa = build_qa(m);
    FgAbGroup kw = torsion_subgroup(m.group);
    FiniteQuandle core2 = characteristic_subquandle(kw);
    if (core2.n != qa.quandle.n) throw InternalError("|Core'(ker w)| differs from |Q_A|");
    bool iso = is_isomorphic(qa.quandle, core2).has_value();
    CharCompat cc = characteristic_compatibility(m);
    if (cc.verdict != Tri::Unknown && (cc.verdict == Tri::Yes) != iso)
        throw InternalError("Q_A vs Core' disagrees with characteristic compatibility");
    return iso;
}

namespace {

// Search for an isomorphism M1 -> M2 carrying (w1, p1) to (w2, p2 o pi) for some component bijection pi.
Tri module_phi_search(const NuModule& m1, const NuModule& m2, std::size_t cap, std::vector<int>& comp_map) {
    const FgAbGroup& M = m2.group;
    std::size_t nt = M.torsion.size(), r = M.free_rank, n = M.ncoords();
    int mu = m1.mu;
    std::vector<GroupElt> tors = torsion_elements(M);
    std::vector<GroupElt> free_offsets;
    {
        std::vector<GroupElt> cur{zero(M)};
        for (std::size_t j = 0; j < r; ++j) {
            std::vector<GroupElt> next;
            for (const auto& x : cur)
                for (int v : {0, 1, -1}) {
                    GroupElt y = x;
                    y[nt + j] = v;
                    next.push_back(y);
                }
            cur = std::move(next);
        }
        for (auto& x : cur)
            if (!is_zero(x)) free_offsets.push_back(x);
    }
    std::size_t nodes = 0;
    std::vector<int> pi(mu);
    std::iota(pi.begin(), pi.end(), 0);
    do {
        // candidate images per canonical generator of M1
        std::vector<std::vector<GroupElt>> cand(n);
        bool empty = false;
        for (std::size_t g = 0; g < n && !empty; ++g) {
            GroupElt e = unit(m1.group, g);
            Int w = m1.w(e);
            ParityVec p1 = m1.p(e), want(mu);
            for (int c = 0; c < mu; ++c) want[pi[c]] = p1[c];
            auto ok = [&](const GroupElt& y) { return m2.w(y) == w && m2.p(y) == want; };
            if (ok(e)) cand[g].push_back(e);
            if (g < nt) {
                for (const auto& y : tors)
                    if (y != e && is_zero(smul(M, M.torsion[g], y)) && ok(y)) cand[g].push_back(y);
            } else {
                for (const auto& f : free_offsets)
                    for (const auto& t : tors) {
                        GroupElt y = add(M, f, t);
                        if (y != e && ok(y)) cand[g].push_back(y);
                    }
            }
            empty = cand[g].empty();
        }
        if (empty) continue;
        std::vector<GroupElt> img;
        bool capped = false;
        std::function<bool(std::size_t)> rec = [&](std::size_t g) -> bool {
            if (g == n) {
                FgAbGroup q = subgroup_quotient(M, img);
                return q.free_rank == 0 && q.torsion.empty();
            }
            for (const auto& y : cand[g]) {
                if (++nodes > cap) {
                    capped = true;
                    return false;
                }
                img.push_back(y);
                if (rec(g + 1)) return true;
                img.pop_back();
                if (capped) return false;
            }
            return false;
        };
        if (rec(0)) {
            comp_map = pi;
            return Tri::Yes;
        }
        if (capped) return Tri::Unknown;
    } while (std::next_permutation(pi.begin(), pi.end()));
    return Tri::Unknown;
}

}  // namespace

PhiEq phi_equivalent(const NuModule& m1, const NuModule& m2, std::size_t node_cap) {
    PhiEq out;
    if (m1.mu != m2.mu) {
        out.verdict = Tri::No;
        out.reason = "component counts differ";
        return out;
    }
    if (m1.group != m2.group) {
        out.verdict = Tri::No;
        out.reason = "module invariant factors differ: " + m1.group.to_string() + " vs " + m2.group.to_string();
        return out;
    }
    if (torsion_parity_profile(m1) != torsion_parity_profile(m2)) {
        out.verdict = Tri::No;
        out.reason = "torsion parity profiles differ";
        return out;
    }
    Int d1 = det_link(m1), d2 = det_link(m2);
    if (d1 != 0 && d2 != 0) {
        QaQuandle q1 = build_qa(m1), q2 = build_qa(m2);
        auto f = is_isomorphic(q1.quandle, q2.quandle);
        if (!f) {
            out.verdict = Tri::No;
            out.reason = "Q_A quandles are not isomorphic";
            return out;
        }
        out.verdict = Tri::Yes;
        out.reason = "Q_A quandles are isomorphic";
        out.component_map.assign(m1.mu, -1);
        for (int c = 0; c < m1.mu; ++c)
            out.component_map[c] = q2.element_component[(*f)[q1.component_rep[c]]];
        return out;
    }
    CharCompat c1 = characteristic_compatibility(m1), c2 = characteristic_compatibility(m2);
    if (c1.verdict != Tri::Unknown && c2.verdict != Tri::Unknown && c1.verdict != c2.verdict) {
        out.verdict = Tri::No;
        out.reason = std::string("characteristic compatibility differs: ") + tri_name(c1.verdict) + " vs " +
                     tri_name(c2.verdict);
        return out;
    }
    std::vector<int> cm;
    Tri t = module_phi_search(m1, m2, node_cap, cm);
    if (t == Tri::Yes) {
        out.verdict = Tri::Yes;
        out.reason = "explicit compatible module isomorphism found";
        out.component_map = cm;
        return out;
    }
    out.verdict = Tri::Unknown;
    out.reason = "invariant factors, parity profiles and characteristic compatibility agree; bounded search found "
                 "no isomorphism";
    return out;
}

Reindexing reindexing_sensitivity(const NuModule& m) {
    Reindexing out;
    if (det_link(m) == 0) return out;
    QaQuandle qa = build_qa(m);
    int mu = m.mu;
    std::vector<int> parent(mu);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int i = 0; i < mu; ++i)
        for (int j = i + 1; j < mu; ++j) {
            if (find(i) == find(j)) continue;
            if (is_isomorphic(qa.quandle, qa.quandle, {{qa.component_rep[i], qa.component_rep[j]}}))
                parent[find(j)] = find(i);
        }
    std::map<int, std::vector<int>> cls;
    for (int i = 0; i < mu; ++i) cls[find(i)].push_back(i);
    for (auto& [_, v] : cls) out.classes.push_back(v);
    out.known = true;
    return out;
}

}  // namespace nuq
