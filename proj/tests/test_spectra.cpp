#include <cmath>

#include "doctest.h"
#include "hdx/errors.hpp"
#include "hdx/spectra.hpp"

using namespace hdx;

namespace {

LinkGraph case2_link(int p, int m) {
    static auto re = Realization::sl(3);
    Field f(p, m);
    SpanGroup sg(re.phi(), {re.phi().simples()[0], re.phi().simples()[1]}, f, &re);
    return direct_link(sg);
}

std::map<std::uint64_t, std::uint64_t> histogram(const std::vector<double>& eig, double scale) {
    std::map<std::uint64_t, std::uint64_t> h;
    for (double e : eig) {
        const double v = e * scale;
        const double r = std::round(v);
        REQUIRE(std::abs(v - r) < 1e-6);
        ++h[static_cast<std::uint64_t>(r)];
    }
    return h;
}

}  // namespace

TEST_CASE("cycle of length 4") {
    auto g = SparseWalkGraph::from_arcs(4, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 0}, {0, 3}});
    CHECK(g.degree() == 2);
    auto eig = dense_spectrum(g);
    REQUIRE(eig.size() == 4);
    CHECK(eig[0] == doctest::Approx(-1));
    CHECK(eig[1] == doctest::Approx(0).epsilon(1e-12));
    CHECK(eig[2] == doctest::Approx(0).epsilon(1e-12));
    CHECK(eig[3] == doctest::Approx(1));
    auto rep = second_eigenvalue(g);
    CHECK(std::abs(rep.lambda2) < 1e-6);
    CHECK_THROWS_AS(SparseWalkGraph::from_arcs(3, {{0, 1}, {1, 0}}), DomainError);
    CHECK_THROWS_AS(SparseWalkGraph::from_arcs(2, {{0, 1}, {1, 1}}), DomainError);
}

TEST_CASE("disconnected graphs are rejected") {
    auto g = SparseWalkGraph::from_arcs(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
    CHECK(g.components() == 2);
    CHECK_THROWS_AS(second_eigenvalue(g), DomainError);
    CHECK_THROWS_AS(square_one_side(g, Side::Left), DomainError);
}

TEST_CASE("square of K_{2,2}") {
    LinkGraph k22{2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, "direct"};
    auto g = SparseWalkGraph::from_link(k22);
    CHECK(g.bipartite());
    auto sq = square_one_side(g, Side::Left);
    CHECK(sq.size() == 2);
    CHECK(sq.degree() == 4);
    for (std::size_t v = 0; v < 2; ++v) {
        REQUIRE(sq.row_end(v) - sq.row_begin(v) == 2);
        CHECK(sq.mult(sq.row_begin(v)) == 2);
        CHECK(sq.mult(sq.row_begin(v) + 1) == 2);
    }
}

TEST_CASE("Case 1 links are complete bipartite") {
    auto re = Realization::sl(4);
    const auto& s = re.phi().simples();
    Field f(5, 2);
    SpanGroup sg(re.phi(), {s[0], s[2]}, f, &re);
    auto lg = direct_link(sg);
    CHECK(lg.left == 25);
    CHECK(lg.right == 25);
    CHECK(lg.degree() == 25);
    auto rep = second_eigenvalue(SparseWalkGraph::from_link(lg));
    CHECK(rep.lambda2 < 1e-6);
}

TEST_CASE("Case 2 link, p = 5, m = 3") {
    auto g = SparseWalkGraph::from_link(case2_link(5, 3));
    CHECK(g.size() == 2 * 3125);
    CHECK(g.degree() == 25);
    auto rep = second_eigenvalue(g, {1e-10});
    CHECK(rep.lambda2 == doctest::Approx(std::sqrt(0.2)).epsilon(1e-7));
    CHECK(rep.lo <= std::sqrt(0.2) + 1e-9);
    CHECK(rep.hi >= std::sqrt(0.2) - 1e-9);
    auto ser = second_eigenvalue_serial(g, {1e-10});
    CHECK(ser.lambda2 == doctest::Approx(rep.lambda2).epsilon(1e-9));
    // p = 7 is strictly better
    auto rep7 = second_eigenvalue(SparseWalkGraph::from_link(case2_link(7, 3)), {1e-10});
    CHECK(rep7.lambda2 == doctest::Approx(std::sqrt(1.0 / 7)).epsilon(1e-7));
    CHECK(rep7.lambda2 < rep.lambda2);
}

TEST_CASE("squaring law and equal sides") {
    auto g = SparseWalkGraph::from_link(case2_link(5, 2));
    auto full = dense_spectrum(g);
    auto left = dense_spectrum(square_one_side(g, Side::Left));
    auto right = dense_spectrum(square_one_side(g, Side::Right));
    CHECK(left.size() == 625);
    const double lambda2 = full[full.size() - 2];
    CHECK(left[left.size() - 2] == doctest::Approx(lambda2 * lambda2).epsilon(1e-9));
    for (std::size_t i = 0; i < left.size(); ++i) CHECK(left[i] == doctest::Approx(right[i]).epsilon(1e-9));
    auto sq = second_eigenvalue(square_one_side(g, Side::Left), {1e-11, 5000, 1, true});
    CHECK(sq.lambda2 == doctest::Approx(lambda2 * lambda2).epsilon(1e-8));
}

TEST_CASE("Case 2 character sums") {
    CHECK(charsum_case2_at(5, {0, 0, 0, 0, 0}) == 25);
    CHECK(charsum_case2_at(5, {0, 0, 1, 0, 0}) == 5);
    auto rep = charsum_case2(5);
    CHECK(rep.denominator == 25);
    CHECK(rep.lambda2 == doctest::Approx(0.2));
    std::uint64_t total = 0;
    for (auto [num, mult] : rep.exact) total += mult;
    CHECK(total == 3125);
    CHECK(rep.exact.at(25) == 1);
    CHECK(rep.exact.rbegin()->first == 25);
    CHECK(std::prev(rep.exact.end(), 2)->first == 5);
    CHECK(charsum_case2(7).lambda2 == doctest::Approx(1.0 / 7));
    CHECK_THROWS_AS(charsum_case2(2), DomainError);
}

TEST_CASE("Case 2 character sums match the dense spectrum of the squared link") {
    auto sq = square_one_side(SparseWalkGraph::from_link(case2_link(3, 3)), Side::Left);
    CHECK(sq.size() == 243);
    auto eig = dense_spectrum(sq);
    CHECK(histogram(eig, 9) == charsum_case2(3).exact);
}

TEST_CASE("Case 2 Cayley side") {
    auto re = Realization::sl(3);
    Field f(5, 3);
    SpanGroup sg(re.phi(), {re.phi().simples()[0], re.phi().simples()[1]}, f, &re);
    auto c = cayley_side(sg);
    CHECK(c.dim == 5);
    CHECK(c.degree() == 625);
    CHECK(cayley_connected(c));
    CHECK(histogram(cayley_spectrum(c), 25) == charsum_case2(5).exact);
    auto rep = cayley_second_eigenvalue(c, {1e-10});
    CHECK(rep.lambda2 == doctest::Approx(0.2).epsilon(1e-8));
    // the implicit operator agrees with the explicitly squared link
    auto sq = square_one_side(SparseWalkGraph::from_link(direct_link(sg)), Side::Left);
    auto rep2 = second_eigenvalue(sq, {1e-10, 5000, 1, true});
    CHECK(rep2.lambda2 == doctest::Approx(rep.lambda2).epsilon(1e-8));
    // serial and parallel operators
    auto a = cayley_operator(c), b = cayley_operator_serial(c);
    std::vector<double> x(a.n), ya, yb;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(double(i));
    a.apply(x, ya);
    b.apply(x, yb);
    for (std::size_t i = 0; i < x.size(); i += 97) CHECK(ya[i] == doctest::Approx(yb[i]).epsilon(1e-12));
}

TEST_CASE("Case 3 character sums") {
    auto sp = Realization::sp4();
    Field f(5, 4);
    SpanGroup sg(sp.phi(), {sp.phi().simples()[0], sp.phi().simples()[1]}, f, &sp);
    const int C = case3_constant(sg);
    CHECK(C != 0);
    // h = C (c^2 - c), h' = 0 vanishes on 2p pairs
    std::array<int, 9> r{};
    r[2] = 5 - C;
    r[5] = 1;
    CHECK(charsum_case3_at(5, C, r) == 10);
    auto rep = charsum_case3(5, C);
    CHECK(rep.lambda2 == doctest::Approx(0.4));
    CHECK(rep.exact.at(25) == 1);
    auto ser = charsum_case3_serial(5, C);
    CHECK(ser.exact == rep.exact);
    for (int c = 1; c < 5; ++c) CHECK(charsum_case3(5, c).lambda2 <= 0.4 + 1e-12);
    CHECK_THROWS_AS(charsum_case3(5, 0), DomainError);
}

TEST_CASE("Case 3 Cayley side matches the character sums") {
    auto sp = Realization::sp4();
    for (int p : {3, 5}) {
        Field f(p, 4);
        SpanGroup sg(sp.phi(), {sp.phi().simples()[0], sp.phi().simples()[1]}, f, &sp);
        auto c = cayley_side(sg, 8);
        CHECK(c.dim == 9);
        CHECK(c.degree() == std::uint64_t(p) * p * p * p);
        CHECK(cayley_connected(c));
        auto exact = charsum_case3(p, case3_constant(sg));
        CHECK(histogram(cayley_spectrum(c), p * p) == exact.exact);
    }
    Field f(3, 4);
    SpanGroup sg(sp.phi(), {sp.phi().simples()[0], sp.phi().simples()[1]}, f, &sp);
    auto rep = cayley_second_eigenvalue(cayley_side(sg), {1e-9});
    CHECK(rep.lambda2 == doctest::Approx(charsum_case3(3, case3_constant(sg)).lambda2).epsilon(1e-7));
}

TEST_CASE("G2 spans are not abelian Cayley graphs") {
    auto g2 = RootSystem::build(Family::G, 2);
    Field f(5, 2);
    SpanGroup sg(g2, {g2.simples()[1], g2.simples()[0]}, f);
    CHECK_THROWS_AS(cayley_side(sg), IntegrityError);
}

TEST_CASE("trickling down and the corollary") {
    CHECK(trickle_bound(0.2, 2) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(trickle_bound(0.3, 1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(trickle_bound(0.1, 3) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK_THROWS_AS(trickle_bound(std::sqrt(0.4), 2), DomainError);
    CHECK_THROWS_AS(trickle_bound(-0.1, 2), DomainError);
    CHECK_FALSE(corollary_bound(5, 2).has_value());
    REQUIRE(corollary_bound(101, 2).has_value());
    CHECK(*corollary_bound(101, 2) == doctest::Approx(1 / (std::sqrt(50.5) - 1)).epsilon(1e-12));
    CHECK(required_p(0.5) == doctest::Approx(18).epsilon(1e-12));
}

TEST_CASE("certificate for the SL3(F5) complex") {
    auto g = GroupTable::enumerate(Realization::sl(3), 5);
    auto k = build_complex(g, special_set(g.realization().phi()), "special");
    auto cert = hdx_certificate(k);
    CHECK(cert.connected);
    REQUIRE(cert.links.size() == 3);
    for (const auto& l : cert.links) {
        CHECK(l.vertices == 50);
        CHECK(l.degree == 5);
        CHECK(l.report.lambda2 == doctest::Approx(cert.links[0].report.lambda2).epsilon(1e-8));
    }
    REQUIRE(cert.trickle.has_value());
    CHECK(*cert.trickle == doctest::Approx(cert.gamma / (1 - cert.gamma)));
    CHECK(cert.pass);
    CHECK_FALSE(cert.corollary.has_value());
    MESSAGE("SL3(F5) link lambda2 = " << cert.gamma << ", trickle = " << *cert.trickle);
}
