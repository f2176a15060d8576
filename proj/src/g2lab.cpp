#include "hdx/g2lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <unordered_map>

#include "hdx/errors.hpp"

namespace hdx {

G2Case parse_g2_case(const std::string& s) {
    if (s == "I" || s == "1" || s == "i") return G2Case::I;
    if (s == "II" || s == "2" || s == "ii") return G2Case::II;
    throw DomainError("unknown G2 case: " + s);
}

std::string to_string(G2Case c) { return c == G2Case::I ? "I" : "II"; }

namespace {

// degree caps i+j per coordinate
const std::vector<int>& heights(G2Case c) {
    static const std::vector<int> one = {1, 2, 3, 4, 5};
    static const std::vector<int> two = {1, 2, 3, 3};
    return c == G2Case::I ? one : two;
}

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

G2Link::G2Link(G2Case c, const Field& f, G2Map map) : case_(c), map_(map), tf_(f) {
    if (f.p() <= 3) throw DomainError("G2 step maps need p > 3");
    for (int h : heights(c)) {
        radix_.push_back(ipow(f.p(), f.cap(h) + 1));
        vertices_ *= radix_.back();
    }
    for (const auto& e : f.elements_up_to_degree(1)) params_.push_back(static_cast<std::uint16_t>(f.encode(e)));
    two_ = tf_.from_int(2);
    three_ = tf_.from_int(3);
}

std::vector<std::uint16_t> G2Link::decode(std::uint64_t v) const {
    std::vector<std::uint16_t> t(radix_.size());
    for (std::size_t i = 0; i < radix_.size(); ++i) {
        t[i] = static_cast<std::uint16_t>(v % radix_[i]);
        v /= radix_[i];
    }
    return t;
}

std::uint64_t G2Link::encode(const std::vector<std::uint16_t>& t) const {
    std::uint64_t v = 0;
    for (std::size_t i = radix_.size(); i-- > 0;) {
        if (t[i] >= radix_[i]) throw IntegrityError("G2 step leaves the degree cap");
        v = v * radix_[i] + t[i];
    }
    return v;
}

G2Link::Coords G2Link::coords_of(std::uint64_t v) const {
    Coords t{};
    for (std::size_t i = 0; i < radix_.size(); ++i) {
        t[i] = static_cast<std::uint16_t>(v % radix_[i]);
        v /= radix_[i];
    }
    return t;
}

std::uint64_t G2Link::step(std::uint64_t v, std::uint16_t f0, std::uint16_t f1) const {
    return step_from(coords_of(v), f0, f1);
}

std::uint64_t G2Link::step_from(const Coords& in, std::uint16_t f0, std::uint16_t f1) const {
    Coords t = in;
    const std::size_t nc = radix_.size();
    const auto& a = tf_;
    const auto f01 = a.mul(f0, f1);
    const auto f001 = a.mul(f0, f01);
    if (case_ == G2Case::I) {
        const auto f0001 = a.mul(f0, f001);
        const auto inner = a.add(a.add(t[3], a.mul(three_, a.mul(t[2], f0))), f0001);
        t[4] = a.add(t[4], a.neg(a.mul(f1, inner)));
        t[3] = a.add(t[3], a.neg(f0001));
        t[2] = a.add(t[2], f001);
        t[1] = a.add(t[1], a.neg(f01));
        t[0] = a.add(t[0], f1);
    } else {
        const auto last = map_ == G2Map::Displayed ? f01 : a.neg(f01);
        t[3] = a.add(t[3], a.mul(three_, a.mul(f1, a.add(t[1], last))));
        t[2] = a.add(t[2], a.mul(three_, f001));
        t[1] = a.add(t[1], a.neg(a.mul(two_, f01)));
        t[0] = a.add(t[0], f1);
    }
    std::uint64_t w = 0;
    for (std::size_t i = nc; i-- > 0;) {
        if (t[i] >= radix_[i]) throw IntegrityError("G2 step leaves the degree cap");
        w = w * radix_[i] + t[i];
    }
    return w;
}

void G2Link::for_each_neighbor(std::uint64_t v, const std::function<void(std::uint64_t)>& fn) const {
    const auto t = coords_of(v);
    for (auto f0 : params_)
        for (auto f1 : params_) fn(step_from(t, f0, f1));
}

SparseWalkGraph build_g2_graph(const G2Link& l, std::uint64_t max_arcs) {
    const auto n = l.vertices();
    if (n * l.degree() > max_arcs || n > 0xffffffffULL) throw ResourceError("G2 graph exceeds the arc budget");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    arcs.reserve(n * l.degree());
    for (std::uint64_t v = 0; v < n; ++v)
        l.for_each_neighbor(v, [&](std::uint64_t w) { arcs.emplace_back(std::uint32_t(v), std::uint32_t(w)); });
    return SparseWalkGraph::from_arcs(n, std::move(arcs));
}

SparseWalkGraph g2_group_graph(G2Case c, const Field& f, std::uint64_t max_arcs) {
    static const RootSystem phi = RootSystem::build(Family::G, 2);
    const Root a = phi.simples()[0];  // short
    const Root b = phi.simples()[1];  // long
    // (beta, alpha): the side is X_{alpha,beta} / X_alpha
    std::vector<Root> psi = c == G2Case::I ? std::vector<Root>{b, a} : std::vector<Root>{-(a + b), a * 2 + b};
    SpanGroup g(phi, psi, f);
    const auto& span = g.span();
    const int ia = span.index_of(psi[1]);
    const int ib = span.index_of(psi[0]);
    std::vector<int> ord;
    for (int k : span.psi_plus())
        if (k != ia) ord.push_back(k);
    ord.push_back(ia);
    std::vector<std::uint64_t> radix;
    std::uint64_t n = 1;
    for (std::size_t i = 0; i + 1 < ord.size(); ++i) {
        radix.push_back(f.count_up_to_degree(g.degree_bound(ord[i])));
        n *= radix.back();
    }
    const auto f0s = f.elements_up_to_degree(g.degree_bound(ia));
    const auto f1s = f.elements_up_to_degree(g.degree_bound(ib));
    const std::uint64_t deg = f0s.size() * f1s.size();
    if (n * deg > max_arcs) throw ResourceError("G2 group graph exceeds the arc budget");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    arcs.reserve(n * deg);
    std::vector<FieldElem> s(ord.size(), f.zero());
    for (std::uint64_t v = 0; v < n; ++v) {
        std::uint64_t r = v;
        for (std::size_t i = 0; i + 1 < ord.size(); ++i) {
            s[i] = f.decode(r % radix[i]);
            r /= radix[i];
        }
        s.back() = f.zero();
        const auto base = g.from_order(s, ord);
        for (const auto& f0 : f0s)
            for (const auto& f1 : f1s) {
                auto h = base;
                g.mul_letter(h, ia, f0);
                g.mul_letter(h, ib, f1);
                const auto t = g.to_order(h, ord);
                std::uint64_t w = 0;
                for (std::size_t i = ord.size() - 1; i-- > 0;) {
                    const auto code = f.encode(t[i]);
                    if (code >= radix[i]) throw IntegrityError("neighbour leaves the graded box");
                    w = w * radix[i] + code;
                }
                arcs.emplace_back(std::uint32_t(v), std::uint32_t(w));
            }
    }
    return SparseWalkGraph::from_arcs(n, std::move(arcs));
}

namespace {

LinearOperator g2_operator_with(const G2Link& l, bool parallel) {
    if (l.vertices() > (std::uint64_t(1) << 28)) throw ResourceError("G2 operator too large");
    LinearOperator op;
    op.n = l.vertices();
    op.apply = [&l, parallel](const std::vector<double>& x, std::vector<double>& y) {
        const auto n = static_cast<std::int64_t>(l.vertices());
        const double inv = 1.0 / double(l.degree());
        y.resize(x.size());
#pragma omp parallel for schedule(static) if (parallel)
        for (std::int64_t v = 0; v < n; ++v) {
            const auto t = l.coords_of(std::uint64_t(v));
            double s = 0;
            for (auto f0 : l.params())
                for (auto f1 : l.params()) s += x[l.step_from(t, f0, f1)];
            y[v] = s * inv;
        }
    };
    return op;
}

}  // namespace

LinearOperator g2_operator(const G2Link& l) { return g2_operator_with(l, true); }
LinearOperator g2_operator_serial(const G2Link& l) { return g2_operator_with(l, false); }

std::uint64_t g2_reachable(const G2Link& l) {
    std::vector<std::uint8_t> seen(l.vertices(), 0);
    std::vector<std::uint64_t> stack = {0};
    seen[0] = 1;
    std::uint64_t count = 1;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        l.for_each_neighbor(v, [&](std::uint64_t w) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        });
    }
    return count;
}

bool g2_symmetric(const G2Link& l, std::uint64_t samples, std::uint64_t seed) {
    const auto n = l.vertices();
    auto check = [&](std::uint64_t v) {
        std::unordered_map<std::uint64_t, std::uint64_t> out;
        l.for_each_neighbor(v, [&](std::uint64_t w) { ++out[w]; });
        for (auto [w, c] : out) {
            std::uint64_t back = 0;
            l.for_each_neighbor(w, [&](std::uint64_t u) { back += u == v; });
            if (back != c) return false;
        }
        return true;
    };
    if (samples >= n) {
        for (std::uint64_t v = 0; v < n; ++v)
            if (!check(v)) return false;
        return true;
    }
    std::mt19937_64 rng(seed);
    if (!check(0)) return false;
    for (std::uint64_t s = 1; s < samples; ++s)
        if (!check(rng() % n)) return false;
    return true;
}

namespace {

// Running sums of the closed-walk systems.
struct WalkState {
    std::uint16_t s1, s2, s3, s4, s5;
};

enum class SystemForm { Derived, Displayed };

std::uint64_t count_system(const G2Link& l, int k, SystemForm form, std::uint64_t budget) {
    if (k < 1) throw DomainError("walk length must be positive");
    const double total = std::pow(double(l.degree()), k);
    if (total > double(budget)) throw ResourceError("walk system exceeds the evaluation budget");
    const auto& a = l.arith();
    const auto& ps = l.params();
    const auto two = a.from_int(2), three = a.from_int(3);
    const bool one = l.which() == G2Case::I;
    std::uint64_t count = 0;
    auto rec = [&](auto&& self, int depth, WalkState st) -> void {
        if (depth == k) {
            if (!st.s1 && !st.s2 && !st.s3 && !(one && st.s4) && !st.s5) ++count;
            return;
        }
        for (auto f : ps)
            for (auto g : ps) {
                const auto fg = a.mul(f, g), ffg = a.mul(f, fg), fffg = a.mul(f, ffg);
                WalkState n = st;
                n.s1 = a.add(st.s1, g);
                n.s2 = a.add(st.s2, fg);
                n.s3 = a.add(st.s3, ffg);
                if (one) {
                    n.s4 = a.add(st.s4, fffg);
                    const auto prev4 = form == SystemForm::Derived ? a.neg(st.s4) : st.s4;
                    const auto inner = a.add(a.add(fffg, prev4), a.mul(three, a.mul(f, st.s3)));
                    n.s5 = a.add(st.s5, a.mul(g, inner));
                } else {
                    const auto prev2 = l.map() == G2Map::Displayed ? st.s2 : a.neg(st.s2);
                    const auto inner = a.add(fg, a.neg(a.mul(two, prev2)));
                    n.s5 = a.add(st.s5, a.mul(g, inner));
                }
                self(self, depth + 1, n);
            }
    };
    rec(rec, 0, WalkState{0, 0, 0, 0, 0});
    return count;
}

std::uint64_t count_trace(const G2Link& l, int k, std::uint64_t start, std::uint64_t budget) {
    if (k < 1) throw DomainError("walk length must be positive");
    if (start >= l.vertices()) throw DomainError("start vertex out of range");
    std::unordered_map<std::uint64_t, std::uint64_t> cur = {{start, 1}}, next;
    std::uint64_t spent = 0;
    for (int i = 0; i + 1 < k; ++i) {
        spent += cur.size() * l.degree();
        if (spent > budget) throw ResourceError("walk count exceeds the evaluation budget");
        next.clear();
        for (auto [v, c] : cur) l.for_each_neighbor(v, [&](std::uint64_t w) { next[w] += c; });
        cur.swap(next);
    }
    if (spent + cur.size() * l.degree() > budget) throw ResourceError("walk count exceeds the evaluation budget");
    std::uint64_t count = 0;
    for (auto [v, c] : cur)
        l.for_each_neighbor(v, [&](std::uint64_t w) {
            if (w == start) count += c;
        });
    return count;
}

}  // namespace

std::uint64_t walk_count(const G2Link& l, int k, WalkMode mode, std::uint64_t start, std::uint64_t budget) {
    if (mode == WalkMode::System) return count_system(l, k, SystemForm::Derived, budget);
    return count_trace(l, k, start, budget);
}

std::uint64_t walk_count_displayed(const G2Link& l, int k, std::uint64_t budget) {
    return count_system(l, k, SystemForm::Displayed, budget);
}

SpectralReport estimate_g2_lambda2(const G2Link& l, const PowerOptions& opt) {
    if (!g2_symmetric(l)) throw DomainError("G2 step map is not symmetric: no real spectrum to estimate");
    auto mv = g2_operator(l);
    LinearOperator op{mv.n, [mv](const std::vector<double>& x, std::vector<double>& y) {
                          mv.apply(x, y);
                          for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.5 * (y[i] + x[i]);
                      }};
    auto r = power_iteration(op, {std::vector<double>(mv.n, 1.0 / std::sqrt(double(mv.n)))}, opt);
    SpectralReport rep;
    rep.method = "power-iteration";
    rep.lambda2 = 2 * r.value - 1;
    rep.lo = 2 * (r.value - r.residual) - 1;
    rep.hi = 2 * (r.value + r.residual) - 1;
    rep.iterations = r.iterations;
    return rep;
}

G2Exploration explore_g2(G2Case c, const Field& f, G2Map map, const G2ExploreOptions& opt) {
    G2Link l(c, f, map);
    G2Exploration ex;
    ex.which = c;
    ex.map = map;
    ex.p = f.p();
    ex.m = f.m();
    ex.vertices = l.vertices();
    ex.degree = l.degree();
    ex.symmetric = g2_symmetric(l, l.vertices() <= 5000 ? l.vertices() : 64);
    if (!ex.symmetric) ex.findings.push_back("step map is not symmetric");
    ex.reachable = g2_reachable(l);
    if (ex.reachable != ex.vertices) ex.findings.push_back("graph is disconnected");

    std::mt19937_64 rng(opt.seed);
    std::vector<std::uint64_t> starts;
    for (int i = 0; i < opt.starts; ++i) starts.push_back(rng() % l.vertices());
    for (int k = 1; k <= opt.max_k; ++k) {
        G2WalkRow row;
        row.k = k;
        row.system = walk_count(l, k, WalkMode::System);
        row.trace = walk_count(l, k, WalkMode::Trace);
        row.displayed = walk_count_displayed(l, k);
        for (auto v : starts) row.transitive = row.transitive && walk_count(l, k, WalkMode::Trace, v) == row.trace;
        if (row.system != row.trace) ex.findings.push_back("walk counts disagree at k=" + std::to_string(k));
        if (row.displayed != row.system) ex.findings.push_back("displayed system differs at k=" + std::to_string(k));
        if (!row.transitive) ex.findings.push_back("closed walks depend on the start vertex at k=" + std::to_string(k));
        ex.walks.push_back(row);
    }
    if (!ex.symmetric) return ex;

    if (l.vertices() <= std::min<std::uint64_t>(opt.max_dense_vertices, 6000)) {
        const auto g = build_g2_graph(l);
        const auto spec = dense_spectrum(g);
        ex.dense_lambda2 = spec.size() >= 2 ? spec[spec.size() - 2] : 0.0;
        bool ok = true;
        for (const auto& row : ex.walks) {
            double total = 0;
            for (double e : spec) total += std::pow(e * double(l.degree()), row.k);
            const double want = double(l.vertices()) * double(row.trace);
            ok = ok && std::abs(total - want) <= 1e-6 * std::max(1.0, want);
        }
        ex.trace_identity = ok;
        if (f.m() == 1) {
            const auto h = dense_spectrum(g2_group_graph(c, f));
            bool same = h.size() == spec.size();
            for (std::size_t i = 0; same && i < h.size(); ++i) same = std::abs(h[i] - spec[i]) <= 1e-9;
            ex.matches_group = same;
            if (!same) ex.findings.push_back("spectrum differs from the collection-built side");
        }
    }
    if (ex.reachable == ex.vertices && l.vertices() <= opt.max_power_vertices) ex.lambda2 = estimate_g2_lambda2(l, opt.power);
    return ex;
}

}  // namespace hdx
