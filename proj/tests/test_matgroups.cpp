#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "hdx/errors.hpp"
#include "hdx/matgroups.hpp"
#include "hdx/steinberg.hpp"

using namespace hdx;

namespace {

const GroupTable& sl3_5() {
    static const GroupTable g = GroupTable::enumerate(Realization::sl(3), 5);
    return g;
}
const GroupTable& sp4_3() {
    static const GroupTable g = GroupTable::enumerate(Realization::sp4(), 3);
    return g;
}

}  // namespace

TEST_CASE("root matrices in SL3") {
    Field f(5, 2);
    auto re = Realization::sl(3);
    auto t = f.add(f.x(), f.from_int(2));
    Mat m = re.root_matrix(f, re.phi().simples()[0], t);
    Mat expect = identity_matrix(f, 3);
    expect.at(0, 1) = t;
    CHECK(m == expect);
    CHECK(re.root_matrix(f, re.phi().simples()[0], f.zero()) == identity_matrix(f, 3));
    CHECK_THROWS_AS(re.root_matrix(f, Root({2, 2, 0}), t), DomainError);
}

TEST_CASE("additivity and membership exhaustively at m = 1") {
    Field f(5, 1);
    for (auto re : {Realization::sl(3), Realization::sp4(), Realization::sl(4)}) {
        for (const auto& a : re.phi().roots())
            for (int t = 0; t < 5; ++t)
                for (int u = 0; u < 5; ++u) {
                    Mat x = re.root_matrix(f, a, f.from_int(t));
                    CHECK(mat_mul(f, x, re.root_matrix(f, a, f.from_int(u))) == re.root_matrix(f, a, f.from_int(t + u)));
                    CHECK(re.is_member(f, x));
                }
    }
}

TEST_CASE("torus elements") {
    Field f(7, 2);
    std::mt19937_64 rng(8);
    for (auto re : {Realization::sl(3), Realization::sp4()}) {
        for (const auto& a : re.phi().roots()) {
            auto [n1, h1] = re.torus_elems(f, a, f.one());
            CHECK(is_identity(f, h1));
            for (int trial = 0; trial < 5; ++trial) {
                FieldElem t = f.decode(1 + rng() % (f.order() - 1));
                FieldElem u = f.decode(1 + rng() % (f.order() - 1));
                auto ht = re.torus_elems(f, a, t).second;
                auto hti = re.torus_elems(f, a, f.inv(t)).second;
                CHECK(is_identity(f, mat_mul(f, ht, hti)));
                CHECK(mat_mul(f, ht, re.torus_elems(f, a, u).second) == re.torus_elems(f, a, f.mul(t, u)).second);
                CHECK(re.is_member(f, ht));
            }
        }
        CHECK_THROWS_AS(re.torus_elems(f, re.phi().simples()[0], f.zero()), DomainError);
    }
    // n_alpha(1) for alpha_1 in SL2 acts as [[0,1],[-1,0]]
    auto sl2 = Realization::sl(2);
    Field f5(5, 1);
    Mat n = sl2.torus_elems(f5, sl2.phi().simples()[0], f5.one()).first;
    CHECK(f5.to_string(n.at(0, 0)) == "0");
    CHECK(f5.to_string(n.at(0, 1)) == "1");
    CHECK(f5.to_string(n.at(1, 0)) == "4");
    CHECK(f5.to_string(n.at(1, 1)) == "0");
}

TEST_CASE("order formula") {
    auto a2 = RootSystem::build(Family::A, 2);
    auto b2 = RootSystem::build(Family::B, 2);
    CHECK(group_order(a2, 5, 1) == 372000);
    CHECK(group_order(a2, 2, 1) == 168);
    CHECK(group_order(b2, 5, 1) == 9360000);
    for (std::uint64_t q : {3, 5, 7}) {
        CHECK(group_order(a2, static_cast<int>(q), 1) == q * q * q * (q * q * q - 1) * (q * q - 1));
        CHECK(group_order(b2, static_cast<int>(q), 1) == q * q * q * q * (q * q - 1) * (q * q * q * q - 1));
    }
    CHECK(group_order_string(RootSystem::build(Family::E, 8), 5, 3).size() > 100);
    CHECK_THROWS_AS(group_order(RootSystem::build(Family::E, 8), 5, 1), ResourceError);
}

TEST_CASE("group enumeration") {
    CHECK(sl3_5().size() == 372000);
    CHECK(GroupTable::enumerate(Realization::sl(3), 2).size() == 168);
    CHECK(GroupTable::enumerate(Realization::sl(2), 5).size() == 120);
    CHECK(sp4_3().size() == 51840);
    for (std::size_t i = 0; i < sp4_3().size(); i += 997) {
        Mat m = sp4_3().ops().to_mat(sp4_3().field(), sp4_3().element(i));
        CHECK(Realization::sp4().is_member(sp4_3().field(), m));
    }
    EnumBudget tiny;
    tiny.max_elements = 1000;
    CHECK_THROWS_AS(GroupTable::enumerate(Realization::sl(3), 5, tiny), ResourceError);
}

TEST_CASE("centre scan, serial and parallel") {
    auto sl2 = GroupTable::enumerate(Realization::sl(2), 5);
    auto z2 = center(sl2);
    CHECK(z2.elements.size() == 2);
    CHECK(z2.expected == 2);
    CHECK(center_scan(sl3_5()) == center_scan_serial(sl3_5()));
    auto z3 = center(sl3_5());
    CHECK(z3.elements.size() == 1);
    CHECK(z3.expected == 1);
    CHECK(z3.footnote == 3);
    auto zs = center(sp4_3());
    CHECK(zs.elements.size() == 2);
    for (const auto& e : zs.elements) {
        // +-I
        std::set<int> diag;
        for (int i = 0; i < 4; ++i) diag.insert(e.a[i * 4 + i]);
        CHECK(diag.size() == 1);
    }
    auto sl3_7 = GroupTable::enumerate(Realization::sl(3), 7);
    auto z7 = center(sl3_7);
    CHECK(z7.elements.size() == 3);
    CHECK(z7.expected == 3);
    std::vector<std::uint64_t> canon;
    for (std::size_t i = 0; i < sl3_7.size(); ++i) canon.push_back(adjoint_canonical(sl3_7, z7, sl3_7.element(i)));
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    CHECK(canon.size() == sl3_7.size() / 3);
    for (const auto& e : z7.elements)
        CHECK(adjoint_canonical(sl3_7, z7, e) == adjoint_canonical(sl3_7, z7, sl3_7.ops().identity()));
    auto x = sl3_7.element(12345);
    auto cx = sl3_7.ops().decode(adjoint_canonical(sl3_7, z7, x));
    CHECK(adjoint_canonical(sl3_7, z7, cx) == sl3_7.ops().encode(cx));
}

TEST_CASE("structure constants agree with matrices") {
    for (auto re : {Realization::sl(3), Realization::sp4()}) {
        auto rep = verify_commutator(re, 5);
        CHECK(rep.failures == 0);
        CHECK(rep.ambiguous == 0);
        CHECK(rep.pairs == re.phi().size() * (re.phi().size() - 2));
    }
}

TEST_CASE("Sp4 subgroup shapes at m = 1") {
    const auto& g = sp4_3();
    auto alt = b2_alternative_set(g.realization().phi());
    const int p = 3;
    auto h1 = root_subgroup(g, alt.without(0));
    auto h2 = root_subgroup(g, alt.without(1));
    auto h3 = root_subgroup(g, alt.without(2));
    CHECK(h1.size() == 81);
    CHECK(h2.size() == 81);
    CHECK(h3.size() == 9);
    auto at = [](const SmallMat& x, int i, int j) { return static_cast<int>(x.a[i * 4 + j]); };
    for (auto c : h1) {
        auto x = g.ops().decode(c);
        CHECK(at(x, 3, 2) == (p - at(x, 0, 1)) % p);
        CHECK(at(x, 0, 3) == (at(x, 0, 1) * at(x, 1, 3) + at(x, 1, 2)) % p);
        for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 0}, {2, 0}, {2, 1}, {3, 0}, {3, 1}, {2, 3}}) CHECK(at(x, i, j) == 0);
    }
    for (auto c : h2) {
        auto x = g.ops().decode(c);
        CHECK(at(x, 3, 2) == (p - at(x, 0, 1)) % p);
        CHECK(at(x, 3, 0) == ((at(x, 2, 1) - at(x, 0, 1) * at(x, 2, 0)) % p + p) % p);
        for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 2}, {0, 3}, {1, 0}, {1, 2}, {1, 3}, {2, 3}}) CHECK(at(x, i, j) == 0);
    }
    for (auto c : h3) {
        auto x = g.ops().decode(c);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j && !(i == 1 && j == 3) && !(i == 2 && j == 0)) CHECK(at(x, i, j) == 0);
    }
}

TEST_CASE("Sp4 subgroup degrees in the uncapped regime") {
    // H_1 evaluated from the graded box at m = 4: deg l <= 1, deg Q <= 2, deg C <= 3
    Field f(5, 4);
    auto re = Realization::sp4();
    const auto& phi = re.phi();
    auto alt = b2_alternative_set(phi);
    SpanGroup sg(phi, alt.without(0), f, &re);
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = sg.decode(rng() % sg.graded_size());
        Mat m = identity_matrix(f, 4);
        for (const auto& l : sg.to_word(g)) m = mat_mul(f, m, re.root_matrix(f, l.root, l.coeff));
        CHECK(m.at(0, 1).degree() <= 1);
        CHECK(m.at(1, 3).degree() <= 1);
        CHECK(m.at(1, 2).degree() <= 2);
        CHECK(m.at(0, 2).degree() <= 3);
        CHECK(m.at(3, 2) == f.neg(m.at(0, 1)));
        CHECK(m.at(0, 3) == f.add(f.mul(m.at(0, 1), m.at(1, 3)), m.at(1, 2)));
    }
}

TEST_CASE("centre intersections and triangularity") {
    const auto& g = sl3_5();
    auto z = center(g);
    const auto& phi = g.realization().phi();
    auto s = special_set(phi);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(centerint_check(g, z, s.without(i), s.without(j)));
    CHECK(triangularity_check(g));
    const auto& gs = sp4_3();
    auto zs = center(gs);
    auto alt = b2_alternative_set(gs.realization().phi());
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(centerint_check(gs, zs, alt.without(i), alt.without(j)));
    CHECK(triangularity_check(gs));
}
