#include <random>

#include "doctest.h"
#include "hdx/errors.hpp"
#include "hdx/field.hpp"

using namespace hdx;

namespace {

// Independent polynomial helpers over F_p, low degree first, trimmed.
using Poly = std::vector<long>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

long md(long a, long p) { return ((a % p) + p) % p; }

Poly poly_sub(Poly a, const Poly& b, long p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = md(a[i] - b[i], p);
    trim(a);
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, long p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = md(r[i + j] + a[i] * b[j], p);
    trim(r);
    return r;
}

long inv_mod(long a, long p) {
    for (long x = 1; x < p; ++x)
        if (md(a * x, p) == 1) return x;
    return 0;
}

std::pair<Poly, Poly> divmod(Poly a, const Poly& b, long p) {
    trim(a);
    Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    long lead_inv = inv_mod(b.back(), p);
    while (a.size() >= b.size() && !a.empty()) {
        std::size_t s = a.size() - b.size();
        long c = md(a.back() * lead_inv, p);
        q[s] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + s] = md(a[i + s] - c * b[i], p);
        trim(a);
    }
    trim(q);
    return {q, a};
}

// Extended Euclid inverse of a modulo f.
Poly euclid_inverse(const Poly& a, const Poly& f, long p) {
    Poly r0 = f, r1 = a, s0 = {}, s1 = {1};
    while (!r1.empty()) {
        auto [q, r] = divmod(r0, r1, p);
        Poly s = poly_sub(s0, poly_mul(q, s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is a nonzero constant
    long c = inv_mod(r0[0], p);
    for (auto& x : s0) x = md(x * c, p);
    return s0;
}

}  // namespace

TEST_CASE("find_irreducible picks the lexicographic minimum") {
    CHECK(find_irreducible(5, 1) == std::vector<int>{0, 1});
    CHECK(find_irreducible(5, 2) == std::vector<int>{2, 0, 1});
    // squares mod 5 are {0,1,4}: x^2+c is irreducible iff -c is a non-residue
    for (int c = 0; c < 2; ++c) CHECK_FALSE(is_irreducible(5, std::vector<int>{c, 0, 1}));
}

TEST_CASE("degree-3 modulus over F_7 has no linear factor") {
    auto f = find_irreducible(7, 3);
    REQUIRE(f.size() == 4);
    CHECK(f[3] == 1);
    for (long r = 0; r < 7; ++r) {
        long v = 0;
        for (int i = 3; i >= 0; --i) v = md(v * r + f[i], 7);
        CHECK(v != 0);
    }
}

TEST_CASE("reducible and non-monic moduli are rejected") {
    CHECK_THROWS_AS(Field(5, std::vector<int>{1, 0, 1}), DomainError);  // x^2+1 = (x-2)(x+2)
    CHECK_THROWS_AS(Field(5, std::vector<int>{2, 0, 2}), DomainError);
    CHECK_THROWS_AS(Field(4, 1), DomainError);
    CHECK_THROWS_AS(Field(5, 0), DomainError);
}

TEST_CASE("x*x = 3 in F_5[x]/(x^2+2)") {
    Field f(5, 2);
    auto x = f.x();
    CHECK(f.mul(x, x) == f.from_int(3));
    CHECK(f.to_string(f.mul(x, x)) == "3,0");
}

TEST_CASE("inverse agrees with extended Euclid") {
    Field f(5, 3);
    Poly mod(f.modulus().begin(), f.modulus().end());
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::uint64_t code = 1 + rng() % (f.order() - 1);
        auto t = f.decode(code);
        auto ti = f.inv(t);
        CHECK(f.mul(t, ti) == f.one());
        Poly a;
        for (int i = 0; i < f.m(); ++i) a.push_back(t.c[i]);
        trim(a);
        Poly e = euclid_inverse(a, mod, 5);
        e.resize(f.m(), 0);
        for (int i = 0; i < f.m(); ++i) CHECK(ti.c[i] == e[i]);
    }
    CHECK_THROWS_AS(f.inv(f.zero()), DomainError);
}

TEST_CASE("field axioms and degree bounds on a sample") {
    Field f(7, 3);
    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = f.decode(rng() % f.order());
        auto b = f.decode(rng() % f.order());
        auto c = f.decode(rng() % f.order());
        CHECK(f.add(a, f.zero()) == a);
        CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
        CHECK(f.add(a, f.neg(a)) == f.zero());
        CHECK(f.add(a, b).degree() <= std::max(a.degree(), b.degree()));
        if (!a.is_zero() && !b.is_zero() && a.degree() + b.degree() < f.m()) CHECK(f.mul(a, b).degree() == a.degree() + b.degree());
        CHECK(f.decode(f.encode(a)) == a);
        CHECK(f.parse(f.to_string(a)) == a);
    }
    CHECK(f.pow(f.x(), f.order() - 1) == f.one());
}

TEST_CASE("degree-capped enumeration sizes") {
    Field f53(5, 3), f52(5, 2);
    CHECK(f53.elements_up_to_degree(-1).size() == 1);
    CHECK(f53.elements_up_to_degree(-1)[0] == f53.zero());
    CHECK(f53.elements_up_to_degree(1).size() == 25);
    CHECK(f52.elements_up_to_degree(3).size() == 25);
    for (int k = -1; k <= 5; ++k) {
        auto es = f53.elements_up_to_degree(k);
        std::uint64_t expect = 1;
        for (int i = 0; i <= std::min(k, 2); ++i) expect *= 5;
        CHECK(es.size() == expect);
        CHECK(f53.count_up_to_degree(k) == expect);
        for (const auto& e : es) CHECK(e.degree() <= k);
    }
    CHECK_THROWS_AS(f53.elements_up_to_degree(-2), DomainError);
}

TEST_CASE("parse rejects malformed input") {
    Field f(5, 2);
    CHECK(f.parse("3,1") == f.add(f.from_int(3), f.x()));
    CHECK_THROWS_AS(f.parse("1,2,3"), DomainError);
    CHECK_THROWS_AS(f.parse("a"), DomainError);
}
