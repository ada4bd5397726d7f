#include "oracles.hpp"
#include "properties.hpp"

#include "nuq/quandle.hpp"

#include <doctest.h>

#include <sstream>

using namespace nuq;

namespace {

FgAbGroup group(std::vector<long> t) {
    FgAbGroup G;
    for (long x : t) G.torsion.push_back(x);
    return G;
}

FiniteQuandle trivial_quandle(int n) {
    FiniteQuandle q(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) q.at(x, y) = x;
    return q;
}

// Elements q_a, q~_a, q_b, q_b', q_c, q~_c
FiniteQuandle hopf_model() {
    Perm id{0, 1, 2, 3, 4, 5};
    Perm ba{0, 1, 3, 2, 5, 4};  // (q_b q_b')(q_c q~_c)
    Perm bc{1, 0, 3, 2, 4, 5};  // (q_a q~_a)(q_b q_b')
    return build_partition_quandle(6, {1, 0, 3, 2, 5, 4}, {ba, ba, id, id, bc, bc});
}

// Elements q_a, q_a', q_b, q_b', q_c, q_c'
FiniteQuandle chain_model() {
    Perm ba{0, 1, 3, 2, 5, 4};
    Perm bb{1, 0, 2, 3, 5, 4};
    Perm bc{1, 0, 3, 2, 4, 5};
    return build_partition_quandle(6, {1, 0, 3, 2, 5, 4}, {ba, ba, bb, bb, bc, bc});
}

}  // namespace

TEST_SUITE("quandle") {

TEST_CASE("axioms") {
    CHECK(check_axioms(core_quandle(group({3}))).empty());
    CHECK(check_axioms(trivial_quandle(4)).empty());
    FiniteQuandle q = core_quandle(group({5}));
    q.at(1, 2) = 4;
    auto v = check_axioms(q);
    CHECK_FALSE(v.empty());
    CHECK(v.size() <= 16);
    CHECK(check_axioms(q, 1).size() == 1);
}

TEST_CASE("core quandles") {
    FiniteQuandle z3 = core_quandle(group({3}));
    CHECK(z3.n == 3);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) CHECK(z3(x, y) == ((2 * y - x) % 3 + 3) % 3);

    FiniteQuandle k4 = core_quandle(group({2, 2}));
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) CHECK(k4(x, y) == x);

    // every translation of Core(Z2 + Z4) fixes the four solutions of 2x = 2y
    FiniteQuandle c24 = core_quandle(group({2, 4}));
    CHECK(c24.n == 8);
    CHECK(oracle::fixed_point_counts(c24) == std::vector<int>(8, 4));
    CHECK(oracle::orbit_count(c24) == 4);
    CHECK(orbit_lists(c24).size() == 4);
}

TEST_CASE("characteristic subquandles") {
    FgAbGroup A = group({2, 4});
    auto els = characteristic_elements(A);
    std::set<GroupElt> expect;
    for (auto [a, b] : std::vector<std::pair<long, long>>{{0, 0}, {0, 2}, {1, 0}, {1, 2}, {0, 1}, {0, 3}})
        expect.insert(GroupElt{Int(a), Int(b)});
    CHECK(std::set<GroupElt>(els.begin(), els.end()) == expect);
    FiniteQuandle cp = characteristic_subquandle(A);
    CHECK(cp.n == 6);
    CHECK(orbit_lists(cp).size() == 3);
    auto fp = oracle::fixed_point_counts(cp);
    CHECK(std::count(fp.begin(), fp.end(), 4) == 4);
    CHECK(std::count(fp.begin(), fp.end(), 2) == 2);

    // odd groups: Core' = Core
    CHECK(characteristic_subquandle(group({15})).n == 15);
    CHECK(is_isomorphic(characteristic_subquandle(group({3, 3})), core_quandle(group({3, 3}))).has_value());

    // Z8 + Z8: three cosets of 2A, counted by brute enumeration
    FgAbGroup B = group({8, 8});
    std::size_t count = 0;
    for (const auto& t : oracle::all_tuples({8, 8})) count += (t[0] % 2) + (t[1] % 2) <= 1;
    CHECK(count == 48);
    CHECK(characteristic_subquandle(B).n == 48);
}

TEST_CASE("orbits") {
    CHECK(orbit_lists(trivial_quandle(3)).size() == 3);
    CHECK(orbits(core_quandle(group({5}))) == std::vector<int>(5, 0));
    std::vector<int> o = orbits(characteristic_subquandle(group({2, 4})));
    CHECK(*std::max_element(o.begin(), o.end()) == 2);
}

TEST_CASE("displacement groups") {
    DisGroup d5 = displacement_group(core_quandle(group({5})));
    CHECK(d5.iso == group({5}));
    CHECK(is_semiregular(core_quandle(group({5}))));

    DisGroup d24 = displacement_group(core_quandle(group({2, 4})));
    CHECK(d24.iso == group({2}));

    DisGroup dt = displacement_group(trivial_quandle(3));
    CHECK(dt.elements.size() == 1);
    CHECK(is_semiregular(trivial_quandle(3)));

    CHECK_FALSE(is_semiregular(hopf_model()));
    CHECK_THROWS_AS(displacement_group(core_quandle(group({64})), 4), CapExceeded);
}

TEST_CASE("partition quandle models") {
    FiniteQuandle h = hopf_model();
    FiniteQuandle c = chain_model();
    CHECK(check_axioms(h).empty());
    CHECK(check_axioms(c).empty());
    CHECK(orbit_lists(h).size() == 3);
    CHECK(orbit_lists(c).size() == 3);
    // h has elements with identity translation, c has none
    auto fh = oracle::fixed_point_counts(h);
    auto fc = oracle::fixed_point_counts(c);
    CHECK(std::count(fh.begin(), fh.end(), 6) == 2);
    CHECK(std::count(fc.begin(), fc.end(), 6) == 0);
    CHECK_FALSE(is_isomorphic(h, c).has_value());

    Perm id{0, 1, 2};
    FiniteQuandle t = build_partition_quandle(3, {0, 1, 2}, {id, id, id});
    CHECK(t.op == trivial_quandle(3).op);

    // translation that moves its own element
    Perm bad{1, 0, 2};
    CHECK_THROWS(build_partition_quandle(3, {1, 0, 2}, {bad, bad, id}));
    // paired elements with different translations
    Perm swap12{0, 2, 1};
    CHECK_THROWS(build_partition_quandle(3, {0, 2, 1}, {id, id, swap12}));
}

TEST_CASE("isomorphism search") {
    std::mt19937 rng(2024);
    for (const auto& A : {group({3}), group({2, 4}), group({3, 3}), group({2, 2, 2}), group({12})}) {
        FiniteQuandle q = core_quandle(A);
        Perm sigma(q.n);
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        FiniteQuandle r(q.n);
        for (int x = 0; x < q.n; ++x)
            for (int y = 0; y < q.n; ++y) r.at(sigma[x], sigma[y]) = sigma[q(x, y)];
        auto f = is_isomorphic(q, r);
        REQUIRE(f.has_value());
        CHECK(is_homomorphism(q, r, *f));
        // pinned search
        auto g = is_isomorphic(q, r, {{0, sigma[0]}});
        REQUIRE(g.has_value());
        CHECK((*g)[0] == sigma[0]);
    }
    CHECK_FALSE(is_isomorphic(core_quandle(group({9})), core_quandle(group({3, 3}))).has_value());
    CHECK_FALSE(is_isomorphic(trivial_quandle(4), core_quandle(group({4}))).has_value());

    // in Core(Z2 + Z2 + Z3) any two unions of three of the four orbits are isomorphic
    FiniteQuandle c = core_quandle(group({2, 6}));
    auto orb = orbit_lists(c);
    REQUIRE(orb.size() == 4);
    std::vector<FiniteQuandle> unions;
    for (int skip = 0; skip < 4; ++skip) {
        std::vector<int> el;
        for (int i = 0; i < 4; ++i)
            if (i != skip) el.insert(el.end(), orb[i].begin(), orb[i].end());
        std::sort(el.begin(), el.end());
        unions.push_back(subquandle(c, el));
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) CHECK(is_isomorphic(unions[i], unions[j]).has_value());
    CHECK(is_isomorphic(unions[0], characteristic_subquandle(group({2, 6}))).has_value());
}

TEST_CASE("group reconstruction") {
    CHECK(group_from_quandle(trivial_quandle(1)) == FgAbGroup{1, {}});
    CHECK(group_from_quandle(trivial_quandle(3)) == FgAbGroup{1, {2, 2}});
    CHECK(group_from_quandle(characteristic_subquandle(group({2, 4}))) == FgAbGroup{1, {2, 4}});
    CHECK(group_from_quandle(core_quandle(group({3}))) == FgAbGroup{1, {3}});
}

TEST_CASE("generated subquandles") {
    FiniteQuandle c = core_quandle(group({7}));
    CHECK(generated_subquandle(c, {0}).size() == 1);
    CHECK(generated_subquandle(c, {0, 1}).size() == 7);
    FiniteQuandle k = core_quandle(group({2, 4}));
    auto g = generated_subquandle(k, {0});
    CHECK(g.size() == 1);
}

TEST_CASE("table round trip") {
    FiniteQuandle q = hopf_model();
    std::ostringstream os;
    write_table(os, q);
    CHECK(os.str().substr(0, 2) == "6\n");
    std::istringstream is(os.str());
    CHECK(read_table(is).op == q.op);
    std::istringstream bad("2\n0 1\n1");
    CHECK_THROWS(read_table(bad));
    std::istringstream range("2\n0 5\n1 1\n");
    CHECK_THROWS(read_table(range));
}

TEST_CASE("random group property suite") {
    std::mt19937 rng(8675309);
    for (int i = 0; i < 40; ++i) {
        FgAbGroup A = props::random_group(rng);
        std::string why;
        CAPTURE(A.to_string());
        CHECK_MESSAGE(props::group_suite(A, rng, why), why);
    }
}

TEST_CASE("all shapes up to order 16 are classified by Core'") {
    std::string why;
    CHECK_MESSAGE(props::classification_suite(16, why), why);
    // shape enumeration oracle: number of abelian groups of order n summed over n <= 16
    CHECK(props::all_shapes(16).size() == 1 + 1 + 1 + 2 + 1 + 1 + 1 + 3 + 2 + 1 + 1 + 2 + 1 + 1 + 1 + 5);
}

}  // TEST_SUITE
