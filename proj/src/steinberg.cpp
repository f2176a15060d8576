#include "hdx/steinberg.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>

#include "hdx/errors.hpp"

namespace hdx {

namespace {

constexpr std::array<int, 6> kCandidates = {1, -1, 2, -2, 3, -3};

FieldElem ipow(const Field& f, const FieldElem& a, int e) {
    FieldElem r = f.one();
    for (int k = 0; k < e; ++k) r = f.mul(r, a);
    return r;
}

// Mixed terms i*P[k] + j*P[d] inside P, product order (i+j ascending, i descending).
std::vector<CommTerm> mixed_targets(const Rank2Span& span, int k, int d) {
    std::vector<CommTerm> out;
    for (int s = 2; s <= 5; ++s)
        for (int i = s - 1; i >= 1; --i) {
            int j = s - i;
            int t = span.index_of(span.root(k) * i + span.root(d) * j);
            if (t >= 0) out.push_back({i, j, t, 0});
        }
    return out;
}

// Fixed G2 constants in local coordinates (a short, b long):
// (later, earlier) -> list of ((i, j) on (later, earlier), C).
struct G2Entry {
    std::pair<int, int> later, earlier;
    std::vector<std::pair<std::pair<int, int>, int>> terms;
};
const std::vector<G2Entry>& g2_table() {
    static const std::vector<G2Entry> t = {
        {{0, 1}, {1, 0}, {{{1, 1}, 1}, {{1, 2}, 1}, {{1, 3}, 1}, {{2, 3}, -1}}},
        {{1, 1}, {1, 0}, {{{1, 1}, 2}, {{1, 2}, 3}, {{2, 1}, -3}}},
        {{2, 1}, {1, 0}, {{{1, 1}, 3}}},
        {{3, 1}, {0, 1}, {{{1, 1}, 1}}},
        {{2, 1}, {1, 1}, {{{1, 1}, -3}}},
    };
    return t;
}

struct Model {
    Realization real;
    std::vector<Root> image;  // model root for each index of P
};

Realization default_realization(const RootSystem& phi, bool& ok) {
    ok = true;
    if (phi.family() == Family::A && phi.rank() + 1 <= 5) return Realization::sl(phi.rank() + 1);
    if (phi.family() == Family::B && phi.rank() == 2) return Realization::sp4();
    ok = false;
    return Realization::sl(3);
}

Model make_model(const RootSystem& phi, const Rank2Span& span, const Realization* actual, std::string& source) {
    if (actual && actual->realizes(phi)) {
        source = actual->name() + " realization";
        return {*actual, span.positive()};
    }
    bool ok = false;
    Realization def = default_realization(phi, ok);
    if (ok) {
        source = def.name() + " realization";
        return {def, span.positive()};
    }
    Realization model = span.type() == SpanType::A2 ? Realization::sl(3) : Realization::sp4();
    const auto& ms = model.phi().simples();
    // A2: a -> alpha_1, b -> alpha_2; B2: a (short) -> alpha_2, b (long) -> alpha_1
    const Root& ma = span.type() == SpanType::A2 ? ms[0] : ms[1];
    const Root& mb = span.type() == SpanType::A2 ? ms[1] : ms[0];
    std::vector<Root> image;
    for (std::size_t k = 0; k < span.size(); ++k) {
        auto [na, nb] = span.local_coords(static_cast<int>(k));
        image.push_back(ma * na + mb * nb);
    }
    source = model.name() + " model";
    return {model, std::move(image)};
}

}  // namespace

StructureConstantTable StructureConstantTable::calibrate(const RootSystem& phi, const Rank2Span& span,
                                                         const Realization* actual) {
    StructureConstantTable tab;
    tab.size_ = span.size();
    tab.table_.assign(tab.size_ * tab.size_, {});
    const int n = static_cast<int>(span.size());

    if (span.type() == SpanType::A1 || span.type() == SpanType::A1xA1) {
        tab.source_ = "abelian";
        return tab;
    }
    if (span.type() == SpanType::G2) {
        tab.source_ = "g2 table";
        auto find = [&](std::pair<int, int> c) {
            for (int k = 0; k < n; ++k)
                if (span.local_coords(k) == c) return k;
            throw IntegrityError("G2 local root missing");
        };
        for (const auto& e : g2_table()) {
            int k = find(e.later), d = find(e.earlier);
            auto& cell = tab.table_[static_cast<std::size_t>(k) * n + d];
            for (const auto& [ij, c] : e.terms) {
                auto [i, j] = ij;
                std::pair<int, int> tc{i * e.later.first + j * e.earlier.first, i * e.later.second + j * e.earlier.second};
                cell.push_back({i, j, find(tc), c});
            }
        }
        return tab;
    }

    Model model = make_model(phi, span, actual, tab.source_);
    static const Field cal(7, 2);
    auto xm = [&](int k, const FieldElem& t) { return model.real.root_matrix(cal, model.image[k], t); };
    auto commutator_matrix = [&](int k, int d, const FieldElem& t, const FieldElem& u) {
        Mat g = mat_mul(cal, xm(k, cal.neg(t)), xm(d, cal.neg(u)));
        g = mat_mul(cal, g, xm(k, t));
        return mat_mul(cal, g, xm(d, u));
    };
    std::mt19937_64 rng(12345);
    for (int k = 0; k < n; ++k)
        for (int d = 0; d < k; ++d) {
            auto targets = mixed_targets(span, k, d);
            if (targets.empty()) {
                if (!is_identity(cal, commutator_matrix(k, d, cal.one(), cal.one())))
                    throw IntegrityError("calibration: commuting pair does not commute in " + tab.source_);
                continue;
            }
            const Mat want = commutator_matrix(k, d, cal.one(), cal.one());
            std::vector<std::vector<int>> matches;
            std::size_t combos = 1;
            for (std::size_t q = 0; q < targets.size(); ++q) combos *= kCandidates.size();
            for (std::size_t code = 0; code < combos; ++code) {
                std::vector<int> cs;
                std::size_t c = code;
                Mat prod = identity_matrix(cal, model.real.n());
                for (const auto& tg : targets) {
                    int v = kCandidates[c % kCandidates.size()];
                    c /= kCandidates.size();
                    cs.push_back(v);
                    prod = mat_mul(cal, prod, xm(tg.target, cal.from_int(v)));
                }
                if (prod == want) matches.push_back(cs);
            }
            if (matches.size() != 1)
                throw IntegrityError("calibration: " + std::to_string(matches.size()) + " constant assignments fit in " + tab.source_);
            for (std::size_t q = 0; q < targets.size(); ++q) targets[q].c = matches[0][q];
            for (int trial = 0; trial < 20; ++trial) {
                FieldElem t = cal.decode(rng() % cal.order()), u = cal.decode(rng() % cal.order());
                Mat prod = identity_matrix(cal, model.real.n());
                for (const auto& tg : targets) {
                    FieldElem v = cal.scale(cal.mul(ipow(cal, t, tg.i), ipow(cal, u, tg.j)), tg.c);
                    prod = mat_mul(cal, prod, xm(tg.target, v));
                }
                if (!(prod == commutator_matrix(k, d, t, u)))
                    throw IntegrityError("calibration: commutator is not of the form C t^i u^j in " + tab.source_);
            }
            tab.table_[static_cast<std::size_t>(k) * n + d] = std::move(targets);
        }
    return tab;
}

SpanGroup::SpanGroup(const RootSystem& phi, std::vector<Root> psi, const Field& f, const Realization* actual,
                     std::pair<int, int> weights)
    : span_(phi, std::move(psi)), field_(f), table_(StructureConstantTable::calibrate(phi, span_, actual)) {
    if (weights.first < 0 || weights.second < 0) throw DomainError("SpanGroup: negative degree weight");
    digits_.assign(span_.size(), 0);
    for (int k : span_.psi_plus()) {
        auto [i, j] = span_.psi_coords(k);
        digits_[k] = f.cap(i * weights.first + j * weights.second) + 1;
    }
}

void SpanGroup::mul_letter(Coeffs& g, int d, const FieldElem& u) const {
    if (u.is_zero()) return;
    const int n = static_cast<int>(g.size());
    std::array<std::pair<int, FieldElem>, 8> suffix;
    int count = 0;
    for (int k = d + 1; k < n; ++k)
        if (!g[k].is_zero()) {
            suffix[count++] = {k, g[k]};
            g[k] = field_.zero();
        }
    g[d] = field_.add(g[d], u);
    for (int q = 0; q < count; ++q) {
        const auto& [k, c] = suffix[q];
        mul_letter(g, k, c);
        for (const auto& term : table_.terms(k, d)) {
            FieldElem v = field_.mul(ipow(field_, c, term.i), ipow(field_, u, term.j));
            mul_letter(g, term.target, field_.scale(v, term.c));
        }
    }
}

SpanGroup::Coeffs SpanGroup::collect(const Word& w) const {
    Coeffs g = identity();
    for (const auto& letter : w) {
        int k = span_.index_of(letter.root);
        if (k < 0) throw DomainError("collect: " + letter.root.to_string() + " is outside the span " + span_.label());
        mul_letter(g, k, letter.coeff);
    }
    return g;
}

SpanGroup::Coeffs SpanGroup::multiply(const Coeffs& g, const Coeffs& h) const {
    if (g.size() != span_.size() || h.size() != span_.size()) throw DomainError("multiply: element of a different span");
    Coeffs r = g;
    for (std::size_t k = 0; k < h.size(); ++k) mul_letter(r, static_cast<int>(k), h[k]);
    return r;
}

SpanGroup::Coeffs SpanGroup::inverse(const Coeffs& g) const {
    Coeffs r = identity();
    for (int k = static_cast<int>(g.size()) - 1; k >= 0; --k) mul_letter(r, k, field_.neg(g[k]));
    return r;
}

Word SpanGroup::to_word(const Coeffs& g) const {
    Word w;
    for (std::size_t k = 0; k < g.size(); ++k)
        if (!g[k].is_zero()) w.push_back({span_.root(static_cast<int>(k)), g[k]});
    return w;
}

SpanGroup::Coeffs SpanGroup::from_order(const std::vector<FieldElem>& s, const std::vector<int>& order) const {
    if (s.size() != order.size()) throw DomainError("from_order: size mismatch");
    Coeffs g = identity();
    for (std::size_t q = 0; q < order.size(); ++q) mul_letter(g, order[q], s[q]);
    return g;
}

std::vector<FieldElem> SpanGroup::to_order(const Coeffs& g, const std::vector<int>& order) const {
    std::vector<FieldElem> s(order.size(), field_.zero());
    int maxh = 0;
    for (std::size_t k = 0; k < span_.size(); ++k) maxh = std::max(maxh, span_.local_height(static_cast<int>(k)));
    for (int h = 1; h <= maxh; ++h) {
        Coeffs r = multiply(inverse(from_order(s, order)), g);
        for (std::size_t q = 0; q < order.size(); ++q)
            if (span_.local_height(order[q]) == h) s[q] = r[order[q]];
    }
    if (!(from_order(s, order) == g)) throw DomainError("to_order: ordering does not cover the element");
    return s;
}

bool SpanGroup::well_bounded(const Coeffs& g) const {
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (digits_[k] == 0) {
            if (!g[k].is_zero()) return false;
        } else if (g[k].degree() >= digits_[k]) {
            return false;
        }
    }
    return true;
}

std::uint64_t SpanGroup::graded_size() const {
    std::uint64_t s = 1;
    for (int k : span_.psi_plus())
        for (int q = 0; q < digits_[k]; ++q) s *= static_cast<std::uint64_t>(field_.p());
    return s;
}

std::uint64_t SpanGroup::encode(const Coeffs& g) const {
    std::uint64_t code = 0;
    for (int k : span_.psi_plus()) {
        std::uint64_t radix = 1;
        for (int q = 0; q < digits_[k]; ++q) radix *= static_cast<std::uint64_t>(field_.p());
        code = code * radix + field_.encode(g[k]);
    }
    return code;
}

SpanGroup::Coeffs SpanGroup::decode(std::uint64_t code) const {
    Coeffs g = identity();
    const auto& pp = span_.psi_plus();
    for (auto it = pp.rbegin(); it != pp.rend(); ++it) {
        std::uint64_t radix = 1;
        for (int q = 0; q < digits_[*it]; ++q) radix *= static_cast<std::uint64_t>(field_.p());
        g[*it] = field_.decode(code % radix);
        code /= radix;
    }
    return g;
}

Word commutator(const RootSystem& phi, const RootElem& a, const RootElem& b, const Field& f, const Realization* actual) {
    if ((a.root + b.root).is_zero()) throw DomainError("commutator of opposite root subgroups");
    if (a.root == b.root) return {};
    SpanGroup sg(phi, {a.root, b.root}, f, actual);
    Word w = {{a.root, f.neg(a.coeff)}, {b.root, f.neg(b.coeff)}, a, b};
    auto g = sg.collect(w);
    auto cone = positive_cone(phi, a.root, b.root);
    std::vector<int> order;
    for (const auto& t : cone.terms)
        if (t.i > 0 && t.j > 0) order.push_back(sg.span().index_of(t.root));
    if (order.empty()) {
        if (!(g == sg.identity())) throw IntegrityError("commutator: nonzero result without mixed terms");
        return {};
    }
    auto s = sg.to_order(g, order);
    Word out;
    for (std::size_t q = 0; q < order.size(); ++q)
        if (!s[q].is_zero()) out.push_back({sg.span().root(order[q]), s[q]});
    return out;
}

std::vector<ConstantEntry> commutator_constants(const RootSystem& phi, const Root& a, const Root& b, const Realization* actual) {
    static const Field f7(7, 1);
    auto cone = positive_cone(phi, a, b);
    Word w = commutator(phi, {a, f7.one()}, {b, f7.one()}, f7, actual);
    std::vector<ConstantEntry> out;
    for (const auto& t : cone.terms) {
        if (t.i == 0 || t.j == 0) continue;
        int c = 0;
        for (const auto& l : w)
            if (l.root == t.root) c = l.coeff.c[0];
        if (c > 3) c -= 7;
        out.push_back({t.i, t.j, c});
    }
    return out;
}

void for_each_graded_element(const SpanGroup& g, const std::function<void(const SpanGroup::Coeffs&)>& fn) {
    const std::uint64_t n = g.graded_size();
    for (std::uint64_t c = 0; c < n; ++c) fn(g.decode(c));
}

ClosureResult closure(const SpanGroup& g, const std::vector<SpanGroup::Coeffs>& generators, bool keep_codes) {
    const std::uint64_t n = g.graded_size();
    std::vector<bool> visited(n, false), frontier(n, false);
    ClosureResult res;
    const std::uint64_t id = g.encode(g.identity());
    visited[id] = frontier[id] = true;
    res.size = 1;
    bool any = true;
    while (any) {
        any = false;
        std::vector<bool> next(n, false);
        for (std::uint64_t c = 0; c < n; ++c) {
            if (!frontier[c]) continue;
            auto x = g.decode(c);
            for (const auto& gen : generators) {
                auto y = g.multiply(x, gen);
                if (!g.well_bounded(y)) {
                    res.escaped = true;
                    continue;
                }
                std::uint64_t code = g.encode(y);
                if (!visited[code]) {
                    visited[code] = next[code] = true;
                    ++res.size;
                    any = true;
                }
            }
        }
        frontier.swap(next);
    }
    if (keep_codes)
        for (std::uint64_t c = 0; c < n; ++c)
            if (visited[c]) res.codes.push_back(c);
    return res;
}

PcgsResult generated_subgroup_order(const SpanGroup& g, const std::vector<SpanGroup::Coeffs>& generators) {
    const Field& f = g.field();
    const int p = f.p();
    const int n = static_cast<int>(g.size());
    int maxh = 0;
    for (int k = 0; k < n; ++k) maxh = std::max(maxh, g.span().local_height(k));

    auto layer = [&](const SpanGroup::Coeffs& x, int h) {
        std::vector<int> v;
        for (int k = 0; k < n; ++k)
            if (g.span().local_height(k) == h)
                for (int q = 0; q < f.m(); ++q) v.push_back(x[k].c[q]);
        return v;
    };
    auto power = [&](const SpanGroup::Coeffs& x, int e) {
        SpanGroup::Coeffs r = g.identity();
        for (int q = 0; q < e; ++q) r = g.multiply(r, x);
        return r;
    };
    struct Basis {
        SpanGroup::Coeffs elem, inv;
        int pivot;
    };
    std::vector<std::vector<Basis>> basis(maxh + 1);

    PcgsResult res;
    // returns true and the normalized element when x adds a new basis vector
    auto sift = [&](SpanGroup::Coeffs x, SpanGroup::Coeffs& out, int& out_h) {
        for (int h = 1; h <= maxh; ++h) {
            for (const auto& b : basis[h]) {
                int c = layer(x, h)[b.pivot];
                if (c != 0) x = g.multiply(x, power(b.inv, c));
            }
            auto v = layer(x, h);
            auto it = std::find_if(v.begin(), v.end(), [](int e) { return e != 0; });
            if (it != v.end()) {
                int lead = *it;
                int inv = 1;
                while ((lead * inv) % p != 1) ++inv;
                out = power(x, inv);
                out_h = h;
                return true;
            }
        }
        return false;
    };

    std::vector<SpanGroup::Coeffs> queue(generators.begin(), generators.end());
    while (!queue.empty()) {
        auto x = queue.back();
        queue.pop_back();
        SpanGroup::Coeffs nb;
        int h = 0;
        if (!sift(x, nb, h)) continue;
        auto v = layer(nb, h);
        int pivot = static_cast<int>(std::find_if(v.begin(), v.end(), [](int e) { return e != 0; }) - v.begin());
        if (!g.well_bounded(nb)) res.escaped = true;
        SpanGroup::Coeffs nb_inv = g.inverse(nb);
        for (int hh = 1; hh <= maxh; ++hh)
            for (const auto& b : basis[hh]) {
                auto c = g.multiply(g.multiply(nb_inv, b.inv), g.multiply(nb, b.elem));
                queue.push_back(c);
            }
        queue.push_back(power(nb, p));
        basis[h].push_back({nb, nb_inv, pivot});
        ++res.log_p_order;
    }
    return res;
}

std::vector<SpanGroup::Coeffs> graded_generators(const SpanGroup& g, int d1, int d2) {
    const auto& psi = g.span().psi();
    const Field& f = g.field();
    std::vector<SpanGroup::Coeffs> gens;
    for (std::size_t r = 0; r < psi.size(); ++r) {
        int d = f.cap(r == 0 ? d1 : d2);
        int k = g.span().index_of(psi[r]);
        for (int e = 0; e <= d; ++e) {
            auto x = g.identity();
            x[k] = f.monomial(e);
            gens.push_back(x);
        }
    }
    return gens;
}

int powerspan_rank(int i, int j, int d1, int d2, const Field& f) {
    if (i < 0 || j < 0 || d1 < 0 || d2 < 0) throw DomainError("powerspan: negative argument");
    if (std::max(i, j) >= f.p()) throw DomainError("powerspan: exponents must be below the characteristic");
    const int d = i * d1 + j * d2;
    if (d > f.m() - 1) throw DomainError("powerspan: i*d1 + j*d2 exceeds m-1");
    const int p = f.p(), m = f.m();
    std::vector<std::vector<int>> rows;
    auto fs = f.elements_up_to_degree(d1);
    auto gs = f.elements_up_to_degree(d2);
    for (const auto& a : fs) {
        FieldElem ai = ipow(f, a, i);
        for (const auto& b : gs) {
            FieldElem v = f.mul(ai, ipow(f, b, j));
            rows.emplace_back(v.c.begin(), v.c.begin() + m);
        }
    }
    int rank = 0;
    for (int col = 0; col < m && rank < static_cast<int>(rows.size()); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        int inv = 1;
        while ((rows[rank][col] * inv) % p != 1) ++inv;
        for (auto& x : rows[rank]) x = (x * inv) % p;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(r) == rank || rows[r][col] == 0) continue;
            int c = rows[r][col];
            for (int q = 0; q < m; ++q) rows[r][q] = ((rows[r][q] - c * rows[rank][q]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

bool powerspan_check(int i, int j, int d1, int d2, const Field& f) {
    return powerspan_rank(i, j, d1, d2, f) == i * d1 + j * d2 + 1;
}

}  // namespace hdx
