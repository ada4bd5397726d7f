#include "nuq/numodule.hpp"

#include <algorithm>
#include <numeric>

namespace nuq {

IntMatrix build_r_matrix(const LinkDiagram& d) {
    IntMatrix r(d.crossings.size(), d.n_arcs);
    for (std::size_t j = 0; j < d.crossings.size(); ++j) {
        const Crossing& c = d.crossings[j];
        r.at(j, c.over) += 2;
        r.at(j, c.under[0]) -= 1;
        r.at(j, c.under[1]) -= 1;
    }
    return r;
}

Int NuModule::w(const GroupElt& x) const {
    Int s = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (w_coeff[k] != 0) s += w_coeff[k] * x[k];
    return s;
}

ParityVec NuModule::p(const GroupElt& x) const {
    ParityVec v(mu, 0);
    for (int i = 0; i < mu; ++i) {
        int s = 0;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (p_coeff[i][k] && mpz_odd_p(x[k].get_mpz_t())) s ^= 1;
        v[i] = s;
    }
    return v;
}

std::pair<Int, ParityVec> NuModule::phi(const GroupElt& x) const {
    ParityVec v = p(x);
    if (!v.empty()) v.erase(v.begin());
    return {w(x), v};
}

GroupElt NuModule::arc_sum(const std::vector<std::pair<ArcId, long>>& terms) const {
    GroupElt x = zero(group);
    for (auto [a, c] : terms) x = add(group, x, smul(group, Int(c), sD.at(a)));
    return x;
}

NuModule build_nu_module(const LinkDiagram& d) {
    NuModule m;
    m.diagram = d;
    m.mu = d.mu();
    m.r = build_r_matrix(d);
    auto [G, P] = cokernel(m.r);
    m.group = G;
    m.pres = P;
    std::size_t nc = G.ncoords();
    for (ArcId a = 0; a < d.n_arcs; ++a) {
        std::vector<Int> e(d.n_arcs);
        e[a] = 1;
        m.sD.push_back(apply_presentation(G, P, e));
    }

    // w and p on canonical generators, read off the lifts
    m.w_coeff.assign(nc, Int(0));
    m.p_coeff.assign(m.mu, std::vector<int>(nc, 0));
    for (std::size_t k = 0; k < nc; ++k) {
        Int wk = 0;
        std::vector<Int> pk(m.mu);
        for (ArcId a = 0; a < d.n_arcs; ++a) {
            const Int& c = P.lift.at(k, a);
            wk += c;
            pk[d.kappa[a]] += c;
        }
        m.w_coeff[k] = wk;
        for (int i = 0; i < m.mu; ++i) m.p_coeff[i][k] = mpz_odd_p(pk[i].get_mpz_t()) ? 1 : 0;
        if (k < G.torsion.size()) {
            if (wk != 0) throw InternalError("w does not vanish on a torsion generator");
            if (mpz_odd_p(G.torsion[k].get_mpz_t()))
                for (int i = 0; i < m.mu; ++i)
                    if (m.p_coeff[i][k]) throw InternalError("p does not vanish on odd torsion");
        }
    }

    for (std::size_t j = 0; j < m.r.rows; ++j) {
        GroupElt x = apply_presentation(G, P, m.r.row(j));
        if (!is_zero(x)) throw InternalError("relation row does not vanish in the cokernel");
        std::vector<Int> comp(m.mu);
        Int total = 0;
        for (ArcId a = 0; a < d.n_arcs; ++a) {
            comp[d.kappa[a]] += m.r.at(j, a);
            total += m.r.at(j, a);
        }
        if (total != 0) throw InternalError("relation row has nonzero augmentation");
        for (const Int& c : comp)
            if (mpz_odd_p(c.get_mpz_t())) throw InternalError("relation row has odd component sum");
    }
    for (ArcId a = 0; a < d.n_arcs; ++a) {
        if (m.w(m.sD[a]) != 1) throw InternalError("w(sD(a)) != 1");
        ParityVec pv = m.p(m.sD[a]);
        for (int i = 0; i < m.mu; ++i)
            if (pv[i] != (i == d.kappa[a] ? 1 : 0)) throw InternalError("p(sD(a)) is not a unit vector");
    }
    std::size_t r = G.free_rank;
    std::size_t k = two_primary_factors(G).size();
    if (r < 1 || r > static_cast<std::size_t>(m.mu) || r + k != static_cast<std::size_t>(m.mu))
        throw InternalError("module shape violates r + k = mu");
    return m;
}

KerW ker_w(const NuModule& m, ArcId base_arc) {
    IntMatrix a = m.r;
    std::vector<Int> e(m.diagram.n_arcs);
    e.at(base_arc) = 1;
    a.append_row(e);
    auto [G, P] = cokernel(a);
    return KerW{G, P, base_arc};
}

Int det_link(const NuModule& m) {
    KerW k = ker_w(m, 0);
    auto o = order(k.group);
    return o ? *o : Int(0);
}

Int det_by_minors(const IntMatrix& r, std::size_t drop_col) {
    IntMatrix a = r.without_col(drop_col);
    std::size_t need = a.cols;
    if (a.rows < need) return 0;
    // choose `need` rows out of a.rows
    std::vector<std::size_t> pick(need);
    std::iota(pick.begin(), pick.end(), 0);
    Int g = 0;
    for (;;) {
        IntMatrix sq(need, need);
        for (std::size_t i = 0; i < need; ++i)
            for (std::size_t j = 0; j < need; ++j) sq.at(i, j) = a.at(pick[i], j);
        g = gcd(g, determinant(sq));
        if (g == 1) return g;
        std::size_t i = need;
        while (i > 0 && pick[i - 1] == a.rows - need + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < need; ++j) pick[j] = pick[j - 1] + 1;
    }
    return abs(g);
}

std::vector<GroupElt> ker_w_generators(const NuModule& m) {
    const FgAbGroup& G = m.group;
    std::size_t t = G.torsion.size();
    std::vector<GroupElt> gens;
    for (std::size_t i = 0; i < t; ++i) gens.push_back(unit(G, i));
    IntMatrix row(1, G.free_rank);
    for (std::size_t j = 0; j < G.free_rank; ++j) row.at(0, j) = m.w_coeff[t + j];
    SmithForm sf = smith_normal_form(row, {false, true});
    std::size_t start = sf.rank();
    for (std::size_t c = start; c < G.free_rank; ++c) {
        GroupElt x = zero(G);
        for (std::size_t j = 0; j < G.free_rank; ++j) x[t + j] = sf.V.at(j, c);
        gens.push_back(x);
    }
    return gens;
}

std::vector<GroupElt> ker_phi_generators(const NuModule& m) {
    std::vector<GroupElt> g = ker_w_generators(m);
    for (auto& x : g) x = smul(m.group, Int(2), x);
    return g;
}

Longitudes longitudes(const NuModule& m) {
    if (!is_even(m.diagram)) throw std::invalid_argument("diagram not even");
    Longitudes l;
    for (int i = 0; i < m.mu; ++i) {
        auto walk = component_walk(m.diagram, i);
        GroupElt x = zero(m.group);
        for (std::size_t j = 0; j < walk.size(); ++j) {
            const GroupElt& s = m.sD[walk[j].second];
            x = (j % 2 == 0) ? add(m.group, x, s) : sub(m.group, x, s);
        }
        l.lambda.push_back(x);
    }
    return l;
}

std::optional<std::vector<int>> longitude_zero_subset(const NuModule& m, const Longitudes& l) {
    int mu = static_cast<int>(l.lambda.size());
    if (mu < 2) throw std::invalid_argument("longitude subset search needs at least two components");
    for (int size = 1; size < mu; ++size) {
        std::vector<int> pick(size);
        std::iota(pick.begin(), pick.end(), 0);
        for (;;) {
            GroupElt s = zero(m.group);
            for (int i : pick) s = add(m.group, s, l.lambda[i]);
            if (is_zero(s)) return pick;
            int i = size;
            while (i > 0 && pick[i - 1] == mu - size + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (int j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return std::nullopt;
}

ParityProfile canonical_profile(const std::vector<ParityVec>& vs, int mu) {
    std::vector<int> perm(mu);
    std::iota(perm.begin(), perm.end(), 0);
    ParityProfile best;
    bool have = false;
    do {
        ParityProfile cur;
        cur.reserve(vs.size());
        for (const auto& v : vs) {
            ParityVec u(mu);
            for (int i = 0; i < mu; ++i) u[i] = v[perm[i]];
            cur.push_back(std::move(u));
        }
        std::sort(cur.begin(), cur.end());
        if (!have || cur < best) {
            best = std::move(cur);
            have = true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

ParityProfile torsion_parity_profile(const NuModule& m) {
    std::vector<ParityVec> vs;
    for (const GroupElt& t : torsion_elements(m.group)) {
        if (is_zero(t)) continue;
        vs.push_back(m.p(t));
    }
    return canonical_profile(vs, m.mu);
}

}  // namespace nuq
