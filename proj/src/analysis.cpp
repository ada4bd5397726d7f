#include "nuq/analysis.hpp"

#include <algorithm>
#include <set>

namespace nuq {

const char* imq_status_name(ImqStatus s) {
    switch (s) {
        case ImqStatus::Finite: return "finite";
        case ImqStatus::Infinite: return "infinite";
        case ImqStatus::Skipped: return "skipped";
        case ImqStatus::Capped: return "capped";
    }
    return "?";
}

bool Analysis::all_checks_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

// Subgroup of M generated by gens, enumerated by closure; M's torsion part only.
std::set<GroupElt> closure(const FgAbGroup& G, const std::vector<GroupElt>& gens) {
    std::set<GroupElt> seen{zero(G)};
    std::vector<GroupElt> todo{zero(G)};
    while (!todo.empty()) {
        GroupElt x = todo.back();
        todo.pop_back();
        for (const auto& g : gens) {
            GroupElt y = add(G, x, g);
            if (seen.insert(y).second) todo.push_back(y);
        }
    }
    return seen;
}

}  // namespace

Analysis analyze(const LinkDiagram& d, const AnalysisOptions& opt) {
    Analysis a;
    a.diagram = d;
    a.module = build_nu_module(d);
    const NuModule& m = a.module;
    const FgAbGroup& M = m.group;
    auto add_check = [&](std::string name, bool pass, std::string detail = {}) {
        a.checks.push_back({std::move(name), pass, std::move(detail)});
    };

    a.det = det_link(m);
    a.kerw = ker_w(m, 0);
    add_check("det_minors", det_by_minors(m.r) == a.det);

    bool rows_ok = true;
    for (std::size_t i = 0; i < m.r.rows; ++i)
        if (!(cokernel_group(m.r.without_row(i)) == M)) rows_ok = false;
    add_check("row_redundancy", rows_ok);

    bool base_ok = true;
    for (int arc = 1; arc < d.n_arcs; ++arc)
        if (!(ker_w(m, arc).group == a.kerw.group)) base_ok = false;
    add_check("kerw_base_arc", base_ok);

    a.even = make_even(d);
    a.evenized = a.even.crossings.size() != d.crossings.size();
    NuModule me = a.evenized ? build_nu_module(a.even) : m;
    add_check("make_even_invariance", me.group == M && ker_w(me, 0).group == a.kerw.group);

    // longitudes live in M of the even diagram, which is identified with M only up to isomorphism
    a.lon = longitudes(me);
    const FgAbGroup& Me = me.group;
    bool in_kernel = true;
    for (const auto& l : a.lon.lambda) {
        a.lambda_orders.push_back(order_of(Me, l));
        if (me.w(l) != 0 || !is_zero(smul(Me, 2, l))) in_kernel = false;
    }
    add_check("longitude_kernel", in_kernel);
    if (m.mu == 1) {
        add_check("longitude_knot", is_zero(a.lon.lambda[0]));
    } else {
        if (m.mu == 2) add_check("longitude_pair", a.lon.lambda[0] == a.lon.lambda[1]);
        bool rank_ok = false;
        for (int i = 0; i < m.mu && !rank_ok; ++i) {
            std::vector<GroupElt> rest;
            for (int j = 0; j < m.mu; ++j)
                if (j != i) rest.push_back(a.lon.lambda[j]);
            rank_ok = subgroup_membership(Me, rest, a.lon.lambda[i]);
        }
        add_check("longitude_rank", rank_ok);
        a.zero_subset = longitude_zero_subset(me, a.lon);
        add_check("longitude_det_zero", a.zero_subset.has_value() == (a.det == 0));
    }

    a.charcompat = characteristic_compatibility(m);
    a.profile = torsion_parity_profile(m);

    if (a.det == 0) {
        a.imq_status = ImqStatus::Infinite;
        a.imq_note = "det = 0";
        return a;
    }

    // ker phi = 2 ker w, by enumeration
    {
        std::set<GroupElt> kw = closure(M, ker_w_generators(m));
        std::set<GroupElt> kphi, doubled;
        for (const auto& x : kw) {
            ParityVec p = m.p(x);
            if (std::all_of(p.begin(), p.end(), [](int v) { return v == 0; })) kphi.insert(x);
            doubled.insert(smul(M, 2, x));
        }
        add_check("kerphi_doubling", kphi == doubled && Int(static_cast<long>(kw.size())) == a.det);
    }

    a.qa = build_qa(m);
    const FiniteQuandle& Q = a.qa->quandle;
    bool small_qa = Q.n <= opt.heavy_check_limit;
    if (small_qa) add_check("qa_axioms", check_axioms(Q).empty());
    {
        Int expect = Int(m.mu) * a.det;
        Int two;
        mpz_ui_pow_ui(two.get_mpz_t(), 2, m.mu - 1);
        add_check("qa_cardinality", Int(Q.n) * two == expect);
    }
    {
        auto ol = orbit_lists(Q);
        bool ok = static_cast<int>(ol.size()) == m.mu;
        for (const auto& o : ol)
            for (int x : o) ok = ok && a.qa->element_component[x] == a.qa->element_component[o[0]];
        add_check("qa_orbits", ok);
    }
    {
        DisCheck dc = dis_structure_check(*a.qa, m);
        add_check("qa_displacement", dc.ok, dc.detail);
    }
    if (small_qa) add_check("qa_group", group_from_quandle(Q) == M);
    try {
        add_check("qa_characteristic", compare_qa_with_characteristic(m));
    } catch (const InternalError& e) {
        add_check("qa_characteristic", false, e.what());
    }
    a.reindexing = reindexing_sensitivity(m);

    if (!opt.imq) {
        a.imq_status = ImqStatus::Skipped;
        a.imq_note = "--no-imq";
        return a;
    }
    try {
        a.imq = compute_imq(d, a.det, opt.caps);
    } catch (const ResourceCap& e) {
        a.imq_status = ImqStatus::Capped;
        a.imq_note = e.what();
        return a;
    }
    a.imq_status = ImqStatus::Finite;
    const FiniteQuandle& I = a.imq->quandle;
    bool small_imq = I.n <= opt.heavy_check_limit;
    if (small_imq) {
        add_check("imq_axioms", check_axioms(I).empty());
        add_check("imq_group", group_from_quandle(I) == M);
    }
    add_check("imq_main3", check_main3(Int(I.n), a.det, m.mu));
    if (m.mu >= 2) add_check("imq_orbit_bound", check_orbit_bound(I, a.det, m.mu));
    if (m.mu == 1) add_check("imq_knot_core", is_isomorphic(I, core_quandle(a.kerw.group)).has_value());
    try {
        imq_surjection_to_qa(*a.imq, d, *a.qa, m);
        add_check("imq_surjection", true);
    } catch (const InternalError& e) {
        add_check("imq_surjection", false, e.what());
    }
    try {
        ImqResult ie = a.evenized ? compute_imq(a.even, a.det, opt.caps) : *a.imq;
        add_check("imq_longitude_orbit", longitude_fixes_orbit(a.even, ie) && ie.quandle.n == I.n);
    } catch (const ResourceCap& e) {
        add_check("imq_longitude_orbit", false, e.what());
    }
    return a;
}

}  // namespace nuq
