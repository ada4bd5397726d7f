// Runs the ten acceptance criteria and prints one PASS/FAIL line each. Exit status is 0 iff all pass.

#include "oracles.hpp"
#include "properties.hpp"

#include "nuq/analysis.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace nuq;

namespace {

// Wall-clock limits, seconds.
constexpr double kFig5lLimit = 10.0;
constexpr double kPropertyLimit = 120.0;
constexpr int kRandomGroups = 200;
constexpr long kMaxOrder = 64;

const char* kFixtures[] = {"HOPF2", "SIXTHREE", "trefoil", "figure_eight", "FIG5L",
                           "FIGT",  "LPRIME",   "LDPRIME", "T22T24"};

FgAbGroup group(std::size_t free, std::vector<long> t) {
    FgAbGroup G;
    G.free_rank = free;
    for (long x : t) G.torsion.push_back(x);
    return G;
}

NuModule module_of(const std::string& name) { return build_nu_module(oracle::fixture(name)); }

bool is_identity(const Perm& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<int>(i)) return false;
    return true;
}

std::vector<int> sorted_orbit_sizes(const FiniteQuandle& q) {
    std::vector<int> s;
    for (const auto& o : orbit_lists(q)) s.push_back(static_cast<int>(o.size()));
    std::sort(s.begin(), s.end());
    return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Collects failed expectations for one criterion.
struct Criterion {
    std::vector<std::string> failures;
    std::ostringstream note;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

bool c1(Criterion& c) {
    LinkDiagram d = oracle::fixture("HOPF2");
    NuModule m = build_nu_module(d);
    c.expect(m.group == group(1, {2, 2}), "M = Z + Z2 + Z2");
    c.expect(det_link(m) == 4, "det = 4");
    QaQuandle qa = build_qa(m);
    bool trivial = qa.quandle.n == 3;
    for (int x = 0; x < qa.quandle.n; ++x)
        for (int y = 0; y < qa.quandle.n; ++y) trivial = trivial && qa.quandle(x, y) == x;
    c.expect(trivial, "Q_A is the trivial 3-element quandle");
    ImqResult r = compute_imq(d);
    c.expect(r.quandle.n == 6, "|IMQ| = 6");
    c.expect(sorted_orbit_sizes(r.quandle) == std::vector<int>{2, 2, 2}, "orbit sizes {2,2,2}");
    c.expect(is_identity(r.quandle.translation(r.arc_element[d.arc_by_name("b")])), "arc-b translation is the identity");
    c.expect(!is_semiregular(r.quandle), "IMQ not semiregular");
    c.note << "M=" << m.group.to_string() << " det=" << det_link(m) << " |Q_A|=" << qa.quandle.n
           << " |IMQ|=" << r.quandle.n;
    return c.failures.empty();
}

bool c2(Criterion& c) {
    NuModule h = module_of("HOPF2");
    LinkDiagram d = oracle::fixture("SIXTHREE");
    NuModule m = build_nu_module(d);
    c.expect(m.group == h.group, "same module as HOPF2");
    ImqResult r = compute_imq(d);
    c.expect(r.quandle.n == 6, "|IMQ| = 6");
    bool none_identity = true;
    for (int y = 0; y < r.quandle.n; ++y) none_identity = none_identity && !is_identity(r.quandle.translation(y));
    c.expect(none_identity, "no identity translation");
    ImqResult rh = compute_imq(oracle::fixture("HOPF2"));
    c.expect(!is_isomorphic(rh.quandle, r.quandle).has_value(), "IMQ(HOPF2) not isomorphic to IMQ(SIXTHREE)");
    PhiEq pe = phi_equivalent(h, m);
    c.expect(pe.verdict == Tri::Yes, "phi_equivalent = yes");
    c.note << "|IMQ|=" << r.quandle.n << " iso=none phi=" << tri_name(pe.verdict);
    return c.failures.empty();
}

bool c3(Criterion& c) {
    for (auto [name, det] : std::vector<std::pair<std::string, long>>{{"trefoil", 3}, {"figure_eight", 5}}) {
        LinkDiagram d = oracle::fixture(name);
        NuModule m = build_nu_module(d);
        c.expect(det_link(m) == det, name + " det");
        c.expect(oracle::det_oracle(m.r) == det, name + " det by minor oracle");
        ImqResult r = compute_imq(d);
        c.expect(r.quandle.n == det, name + " |IMQ| = det");
        c.expect(is_isomorphic(r.quandle, core_quandle(ker_w(m, 0).group)).has_value(), name + " IMQ = Core(ker w)");
        c.note << name << ": |IMQ|=" << r.quandle.n << " det=" << det_link(m) << " ";
    }
    return c.failures.empty();
}

bool c4(Criterion& c) {
    auto t0 = std::chrono::steady_clock::now();
    NuModule m = module_of("FIG5L");
    c.expect(m.group == group(2, {8, 8}), "M = Z^2 + Z8^2");
    CharCompat cc = characteristic_compatibility(m);
    double t = seconds_since(t0);
    c.expect(cc.verdict == Tri::No, "characteristic compatibility = no");
    c.expect(cc.indexings_checked == 24, "all 24 indexings exhausted");
    c.expect(t < kFig5lLimit, "runtime < 10 s");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", t);
    c.note << "M=" << m.group.to_string() << " verdict=" << tri_name(cc.verdict) << " indexings=" << cc.indexings_checked
           << " nodes=" << cc.nodes << " t=" << buf << "s";
    return c.failures.empty();
}

bool c5(Criterion& c) {
    NuModule m = module_of("FIGT");
    c.expect(m.group == group(2, {8, 8}), "M = Z + Z8 + Z8 + Z");
    CharCompat cc = characteristic_compatibility(m);
    c.expect(cc.verdict == Tri::Yes && cc.witness.has_value(), "characteristic compatibility = yes with witness");
    if (cc.witness) {
        std::string why;
        c.expect(verify_characteristic_witness(m, cc.witness->indexing, cc.witness->generators, &why),
                 "witness verifies: " + why);
        std::set<std::pair<Int, ParityVec>> units, got(cc.witness->phi_images.begin(), cc.witness->phi_images.end());
        for (int j = 0; j < m.mu; ++j) {
            ParityVec v(m.mu - 1, 0);
            if (j > 0) v[j - 1] = 1;
            units.insert({j == 0 ? 1 : 0, v});
        }
        c.expect(got == units && cc.witness->phi_images.size() == 4, "phi-images are the four unit vectors");
        c.note << "witness:";
        for (const auto& g : cc.witness->generators) c.note << " " << elt_to_string(g);
    }
    return c.failures.empty();
}

bool c6(Criterion& c) {
    NuModule a = module_of("FIG5L"), b = module_of("FIGT");
    FgAbGroup ka = ker_w(a, 0).group, kb = ker_w(b, 0).group;
    c.expect(ka == kb && ka == group(1, {8, 8}), "ker w = Z + Z8 + Z8 for both");
    PhiEq pe = phi_equivalent(a, b);
    c.expect(pe.verdict == Tri::No, "phi_equivalent = no");
    c.note << "ker w " << ka.to_string() << " / " << kb.to_string() << "; phi=" << tri_name(pe.verdict) << " (" << pe.reason << ")";
    return c.failures.empty();
}

bool c7(Criterion& c) {
    NuModule a = module_of("LPRIME"), b = module_of("LDPRIME");
    c.expect(a.group == group(2, {2, 2}) && b.group == group(2, {2, 2}), "both M = Z^2 + Z2^2");
    auto all_ones = [](const ParityProfile& p) {
        return std::any_of(p.begin(), p.end(), [](const ParityVec& v) {
            return std::all_of(v.begin(), v.end(), [](int x) { return x == 1; });
        });
    };
    ParityProfile pa = torsion_parity_profile(a), pb = torsion_parity_profile(b);
    c.expect(pa != pb, "parity profiles differ");
    c.expect(all_ones(pa), "all-ones vector present for LPRIME");
    c.expect(!all_ones(pb), "all-ones vector absent for LDPRIME");
    PhiEq pe = phi_equivalent(a, b);
    c.expect(pe.verdict == Tri::No, "phi_equivalent = no");
    c.note << "phi=" << tri_name(pe.verdict) << " (" << pe.reason << ")";
    return c.failures.empty();
}

bool c8(Criterion& c) {
    NuModule m = module_of("T22T24");
    FgAbGroup k = ker_w(m, 0).group;
    c.expect(k == group(0, {2, 4}), "ker w = Z2 + Z4");
    FiniteQuandle cp = characteristic_subquandle(k);
    auto fp = oracle::fixed_point_counts(cp);
    c.expect(cp.n == 6 && std::count(fp.begin(), fp.end(), 4) == 4 && std::count(fp.begin(), fp.end(), 2) == 2,
             "Core' fixed points: four 4s and two 2s");
    Reindexing r = reindexing_sensitivity(m);
    std::vector<std::size_t> sizes;
    for (const auto& cl : r.classes) sizes.push_back(cl.size());
    std::sort(sizes.begin(), sizes.end());
    c.expect(r.known && sizes == std::vector<std::size_t>{1, 2}, "exactly one component singled out");
    c.note << "ker w=" << k.to_string() << " classes:";
    for (const auto& cl : r.classes) {
        c.note << " {";
        for (std::size_t i = 0; i < cl.size(); ++i) c.note << (i ? "," : "") << cl[i];
        c.note << "}";
    }
    return c.failures.empty();
}

bool c9(Criterion& c) {
    auto t0 = std::chrono::steady_clock::now();
    std::size_t checks = 0;
    for (const char* name : kFixtures) {
        Analysis a = analyze(oracle::fixture(name));
        for (const auto& ch : a.checks) {
            ++checks;
            c.expect(ch.pass, std::string(name) + ": " + ch.name + (ch.detail.empty() ? "" : " (" + ch.detail + ")"));
        }
    }
    std::mt19937 rng(20240601);
    for (int i = 0; i < kRandomGroups; ++i) {
        FgAbGroup A = props::random_group(rng, kMaxOrder);
        std::string why;
        c.expect(props::group_suite(A, rng, why), why);
    }
    std::string why;
    std::size_t pairs = 0;
    c.expect(props::classification_suite(kMaxOrder, why, &pairs), "Core' classification: " + why);
    double t = seconds_since(t0);
    c.expect(t < kPropertyLimit, "runtime < 120 s");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", t);
    c.note << checks << " fixture checks, " << kRandomGroups << " random groups, " << pairs
           << " same-size shape pairs, t=" << buf << "s";
    return c.failures.empty();
}

bool c10(Criterion& c) {
    for (const char* name : kFixtures) {
        LinkDiagram d = oracle::fixture(name);
        NuModule m = build_nu_module(d);
        Int det = det_link(m);
        if (det == 0) continue;
        ImqResult r = compute_imq(d, det);
        Int two = Int(1) << (m.mu - 1);
        bool upper = 2 * Int(r.quandle.n) <= Int(m.mu) * det;
        bool lower = Int(r.quandle.n) * two >= Int(m.mu) * det;
        bool ok = m.mu == 1 ? Int(r.quandle.n) == det : upper && lower;
        c.expect(ok && check_main3(Int(r.quandle.n), det, m.mu), std::string(name) + " size bounds");
        if (m.mu >= 2) c.expect(check_orbit_bound(r.quandle, det, m.mu), std::string(name) + " orbit bound");
        c.note << name << "=" << r.quandle.n << " ";
    }
    return c.failures.empty();
}

}  // namespace

int main() {
    std::vector<std::pair<const char*, std::function<bool(Criterion&)>>> criteria{
        {"HOPF2 module, Q_A and IMQ", c1},
        {"SIXTHREE IMQ differs, modules phi-equivalent", c2},
        {"knot IMQ size equals det", c3},
        {"FIG5L characteristic compatibility no", c4},
        {"FIGT characteristic compatibility yes", c5},
        {"FIG5L vs FIGT not phi-equivalent", c6},
        {"LPRIME vs LDPRIME parity profiles", c7},
        {"T22T24 singled-out component", c8},
        {"property suites", c9},
        {"IMQ size bounds", c10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Criterion c;
        bool ok = false;
        try {
            ok = criteria[i].second(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        ok = ok && c.failures.empty();
        failed += !ok;
        std::cout << (ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << " | " << c.note.str() << "\n";
        for (const auto& f : c.failures) std::cout << "        failed: " << f << "\n";
        std::cout.flush();
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
    return failed == 0 ? 0 : 1;
}
