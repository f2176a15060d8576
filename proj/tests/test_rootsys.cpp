#include <algorithm>
#include <set>

#include "doctest.h"
#include "hdx/errors.hpp"
#include "hdx/rootsys.hpp"

using namespace hdx;

namespace {

std::size_t classical_count(Family f, int d) {
    switch (f) {
        case Family::A: return d * (d + 1);
        case Family::B:
        case Family::C: return 2 * d * d;
        case Family::D: return 2 * d * (d - 1);
        case Family::G: return 12;
        case Family::F: return 48;
        case Family::E: return d == 6 ? 72 : d == 7 ? 126 : 240;
    }
    return 0;
}

const std::vector<std::pair<Family, int>> kSystems = {
    {Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::A, 5}, {Family::B, 2}, {Family::B, 3},
    {Family::B, 4}, {Family::C, 3}, {Family::C, 4}, {Family::D, 4}, {Family::D, 5}, {Family::G, 2},
    {Family::F, 4}, {Family::E, 6}, {Family::E, 7}, {Family::E, 8}};

// Explicit list of B_d / C_d / D_d roots in the x2 scaling.
std::set<Root> explicit_bcd(Family f, int d) {
    std::set<Root> out;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            for (int si : {-2, 2})
                for (int sj : {-2, 2}) {
                    std::vector<int> v(d, 0);
                    v[i] = si;
                    v[j] = sj;
                    out.insert(Root(v));
                }
    if (f != Family::D)
        for (int i = 0; i < d; ++i)
            for (int s : {-1, 1}) {
                std::vector<int> v(d, 0);
                v[i] = s * (f == Family::B ? 2 : 4);
                out.insert(Root(v));
            }
    return out;
}

}  // namespace

TEST_CASE("root counts and structural invariants") {
    for (auto [f, d] : kSystems) {
        CAPTURE(family_char(f));
        CAPTURE(d);
        auto phi = RootSystem::build(f, d);
        CHECK(phi.size() == classical_count(f, d));
        CHECK(phi.simples().size() == static_cast<std::size_t>(d));
        CHECK(vector_rank(phi.simples()) == d);
        for (const auto& r : phi.roots()) {
            CHECK(phi.contains(-r));
            for (int k : {2, 3}) CHECK_FALSE(phi.contains(r * k));
            for (const auto& a : phi.roots()) {
                long num = 2 * r.dot(a);
                REQUIRE(num % a.norm2() == 0);
                CHECK(phi.contains(r - a * static_cast<int>(num / a.norm2())));
            }
            const auto& c = phi.simple_coordinates(r);
            bool nonneg = std::all_of(c.begin(), c.end(), [](int x) { return x >= 0; });
            bool nonpos = std::all_of(c.begin(), c.end(), [](int x) { return x <= 0; });
            CHECK((nonneg || nonpos));
            Root s(std::vector<int>(phi.ambient_dim(), 0));
            for (int i = 0; i < d; ++i) s = s + phi.simples()[i] * c[i];
            CHECK(s == r);
        }
        CHECK(check_root_sum_law(phi));
    }
}

TEST_CASE("classical realizations match explicit lists") {
    for (auto [f, d] : std::vector<std::pair<Family, int>>{{Family::B, 3}, {Family::C, 3}, {Family::D, 4}, {Family::B, 2}}) {
        auto phi = RootSystem::build(f, d);
        std::set<Root> got(phi.roots().begin(), phi.roots().end());
        CHECK(got == explicit_bcd(f, d));
    }
    auto a2 = RootSystem::build(Family::A, 2);
    std::set<Root> expect;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) {
                std::vector<int> v(3, 0);
                v[i] = 2;
                v[j] = -2;
                expect.insert(Root(v));
            }
    CHECK(std::set<Root>(a2.roots().begin(), a2.roots().end()) == expect);
}

TEST_CASE("illegal pairs are rejected") {
    CHECK_THROWS_AS(RootSystem::build(Family::A, 0), DomainError);
    CHECK_THROWS_AS(RootSystem::build(Family::B, 1), DomainError);
    CHECK_THROWS_AS(RootSystem::build(Family::C, 2), DomainError);
    CHECK_THROWS_AS(RootSystem::build(Family::D, 3), DomainError);
    CHECK_THROWS_AS(RootSystem::build(Family::G, 3), DomainError);
    CHECK_THROWS_AS(RootSystem::build(Family::F, 3), DomainError);
    CHECK_THROWS_AS(RootSystem::build(Family::E, 5), DomainError);
    CHECK_THROWS_AS(parse_family("Z"), DomainError);
}

TEST_CASE("special set spans positively and is in general position") {
    for (auto [f, d] : kSystems) {
        if (d < 2) continue;
        CAPTURE(family_char(f));
        CAPTURE(d);
        auto phi = RootSystem::build(f, d);
        auto s = special_set(phi);
        REQUIRE(s.size() == static_cast<std::size_t>(d + 1));
        CHECK(check_positive_span(phi, s.members));
        for (std::size_t k = 0; k <= static_cast<std::size_t>(d); ++k) CHECK(vector_rank(s.without(k)) == d);
    }
    auto a1 = RootSystem::build(Family::A, 1);
    CHECK_THROWS_AS(special_set(a1), DomainError);
}

TEST_CASE("A_d special set ends in e_d - e_1") {
    auto phi = RootSystem::build(Family::A, 4);
    auto s = special_set(phi);
    std::vector<int> v(5, 0);
    v[4] = 2;
    v[0] = -2;
    CHECK(s.members.back() == Root(v));
}

TEST_CASE("positive span examples") {
    auto a2 = RootSystem::build(Family::A, 2);
    const auto& p = a2.simples();
    CHECK(check_positive_span(a2, {p[0], p[1], -(p[0] + p[1])}));
    CHECK_FALSE(check_positive_span(a2, {p[0], p[1]}));
    auto b2 = RootSystem::build(Family::B, 2);
    auto alt = b2_alternative_set(b2);
    CHECK(check_positive_span(b2, alt.members));
    for (std::size_t k = 0; k < 3; ++k) CHECK(vector_rank(alt.without(k)) == 2);
}

TEST_CASE("positive cone matches brute force over the plane") {
    for (auto [f, d] : std::vector<std::pair<Family, int>>{{Family::A, 3}, {Family::B, 3}, {Family::G, 2}, {Family::C, 3}}) {
        auto phi = RootSystem::build(f, d);
        for (const auto& a : phi.roots())
            for (const auto& b : phi.roots()) {
                if (a == b || a == -b) continue;
                auto cone = positive_cone(phi, a, b);
                std::set<Root> brute;
                for (const auto& g : phi.roots()) {
                    auto c = integer_coordinates(g, {a, b});
                    if (!c) {
                        // rational but not integral combinations never arise with nonnegative entries here
                        continue;
                    }
                    if ((*c)[0] >= 0 && (*c)[1] >= 0) brute.insert(g);
                }
                std::set<Root> got;
                for (const auto& t : cone.terms) got.insert(t.root);
                CHECK(got == brute);
            }
    }
}

TEST_CASE("positive cone examples and case classification") {
    auto a2 = RootSystem::build(Family::A, 2);
    auto c = positive_cone(a2, a2.simples()[0], a2.simples()[1]);
    CHECK(c.terms.size() == 3);
    CHECK(c.kind == ConeKind::Case1);

    auto b2 = RootSystem::build(Family::B, 2);
    const Root& lng = b2.simples()[0];
    const Root& sht = b2.simples()[1];
    auto cb = positive_cone(b2, sht, lng);
    REQUIRE(cb.terms.size() == 4);
    CHECK(cb.kind == ConeKind::Case2);
    CHECK_FALSE(cb.mirrored);
    CHECK(cb.terms[3].root == sht * 2 + lng);
    CHECK(positive_cone(b2, lng, sht).mirrored);

    auto ortho = positive_cone(b2, lng, lng + sht * 2);
    CHECK(ortho.terms.size() == 2);
    CHECK(ortho.kind == ConeKind::Commuting);

    auto g2 = RootSystem::build(Family::G, 2);
    const Root& ga = g2.simples()[0];
    const Root& gb = g2.simples()[1];
    CHECK(positive_cone(g2, ga, gb).kind == ConeKind::Case4);
    CHECK(positive_cone(g2, ga, gb).terms.size() == 6);
    // two short roots at 60 degrees
    CHECK(positive_cone(g2, ga, ga + gb).kind == ConeKind::Case3);
    CHECK_THROWS_AS(positive_cone(a2, a2.simples()[0], -a2.simples()[0]), DomainError);
}

TEST_CASE("prefix decomposition") {
    auto a2 = RootSystem::build(Family::A, 2);
    const auto& p = a2.simples();
    CHECK(prefix_decompose(a2, p[0] + p[1], {p[0], p[1]}) == std::vector<Root>{p[0], p[1]});
    CHECK(prefix_decompose(a2, p[0], {p[0]}) == std::vector<Root>{p[0]});
    CHECK_THROWS_AS(prefix_decompose(a2, -p[0], {p[0], p[1]}), DomainError);

    auto b2 = RootSystem::build(Family::B, 2);
    const Root& b = b2.simples()[0];
    const Root& a = b2.simples()[1];
    auto seq = prefix_decompose(b2, a * 2 + b, {a, b});
    // valid orderings by exhaustive prefix check
    std::vector<Root> perm = {a, a, b};
    std::set<std::vector<Root>> valid;
    std::sort(perm.begin(), perm.end());
    do {
        Root s(std::vector<int>(2, 0));
        bool ok = true;
        for (const auto& r : perm) {
            s = s + r;
            ok = ok && b2.contains(s);
        }
        if (ok) valid.insert(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(valid.count(seq) == 1);

    // every root of E6 from the special set
    auto e6 = RootSystem::build(Family::E, 6);
    auto s = special_set(e6);
    for (const auto& g : e6.roots()) {
        auto q = prefix_decompose(e6, g, s.members);
        Root acc(std::vector<int>(8, 0));
        for (const auto& r : q) {
            acc = acc + r;
            CHECK(e6.contains(acc));
        }
        CHECK(acc == g);
    }
}

TEST_CASE("root sum decomposition") {
    auto a2 = RootSystem::build(Family::A, 2);
    const auto& p = a2.simples();
    auto [x, y] = decompose_as_root_sum(a2, p[0]);
    CHECK(x == p[0] + p[1]);
    CHECK(y == -p[1]);
    for (auto [f, d] : std::vector<std::pair<Family, int>>{{Family::B, 2}, {Family::G, 2}, {Family::F, 4}}) {
        auto phi = RootSystem::build(f, d);
        for (const auto& g : phi.roots()) {
            auto [u, v] = decompose_as_root_sum(phi, g);
            CHECK(u + v == g);
            CHECK(phi.contains(u));
            CHECK(phi.contains(v));
            CHECK((u != g && u != -g && v != g && v != -g));
        }
    }
    CHECK_THROWS_AS(decompose_as_root_sum(RootSystem::build(Family::A, 1), RootSystem::build(Family::A, 1).simples()[0]), DomainError);
}

TEST_CASE("heights over arbitrary independent sets") {
    auto b2 = RootSystem::build(Family::B, 2);
    const Root& b = b2.simples()[0];
    const Root& a = b2.simples()[1];
    CHECK(height_over(a * 2 + b, {a, b}) == 3);
    CHECK(b2.height(a * 2 + b) == 3);
    CHECK(height_over(-(a * 2 + b), {a, b}) == 3);
    auto alt = b2_alternative_set(b2);
    CHECK(height_over(-b, {alt.members[0], alt.members[2]}) == 3);
    CHECK_THROWS_AS(height_over(a, {b}), DomainError);
}
