#include "hdx/rootsys.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "hdx/errors.hpp"

namespace hdx {

Family parse_family(const std::string& s) {
    if (s.size() == 1) {
        switch (s[0]) {
            case 'A': case 'a': return Family::A;
            case 'B': case 'b': return Family::B;
            case 'C': case 'c': return Family::C;
            case 'D': case 'd': return Family::D;
            case 'E': case 'e': return Family::E;
            case 'F': case 'f': return Family::F;
            case 'G': case 'g': return Family::G;
            default: break;
        }
    }
    throw DomainError("unknown root system family: " + s);
}

char family_char(Family f) noexcept { return "ABCDEFG"[static_cast<int>(f)]; }

long Root::dot(const Root& o) const noexcept {
    long s = 0;
    for (std::size_t i = 0; i < v_.size() && i < o.v_.size(); ++i) s += static_cast<long>(v_[i]) * o.v_[i];
    return s;
}

bool Root::is_zero() const noexcept {
    return std::all_of(v_.begin(), v_.end(), [](int x) { return x == 0; });
}

Root Root::operator-() const {
    std::vector<int> w(v_);
    for (auto& x : w) x = -x;
    return Root(std::move(w));
}

Root Root::operator+(const Root& o) const {
    std::vector<int> w(v_);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += o.v_[i];
    return Root(std::move(w));
}

Root Root::operator-(const Root& o) const {
    std::vector<int> w(v_);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= o.v_[i];
    return Root(std::move(w));
}

Root Root::operator*(int k) const {
    std::vector<int> w(v_);
    for (auto& x : w) x *= k;
    return Root(std::move(w));
}

std::string Root::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v_.size(); ++i) os << (i ? "," : "") << v_[i];
    os << ')';
    return os.str();
}

std::size_t RootHash::operator()(const Root& r) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int x : r.coords()) {
        h ^= static_cast<std::size_t>(x + 64);
        h *= 0x100000001b3ULL;
    }
    return h;
}

int vector_rank(const std::vector<Root>& vs) {
    if (vs.empty()) return 0;
    const std::size_t n = vs.front().dim();
    std::vector<std::vector<__int128>> m;
    for (const auto& v : vs) m.emplace_back(v.coords().begin(), v.coords().end());
    // fraction-free elimination
    int rank = 0;
    __int128 prev = 1;
    for (std::size_t col = 0; col < n && rank < static_cast<int>(m.size()); ++col) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][col] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            for (std::size_t c = col + 1; c < n; ++c)
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            m[r][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

std::optional<std::vector<int>> integer_coordinates(const Root& g, const std::vector<Root>& basis) {
    if (basis.empty()) {
        if (g.is_zero()) return std::vector<int>{};
        return std::nullopt;
    }
    const auto n = static_cast<Eigen::Index>(g.dim());
    const auto k = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd a(n, k);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        b(i) = g[i];
        for (Eigen::Index j = 0; j < k; ++j) a(i, j) = basis[j][i];
    }
    Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    std::vector<int> c(basis.size());
    Root acc(std::vector<int>(g.dim(), 0));
    for (Eigen::Index j = 0; j < k; ++j) {
        c[j] = static_cast<int>(std::lround(x(j)));
        acc = acc + basis[j] * c[j];
    }
    if (!(acc == g)) return std::nullopt;
    return c;
}

int height_over(const Root& g, const std::vector<Root>& psi) {
    auto c = integer_coordinates(g, psi);
    if (!c) throw DomainError("root " + g.to_string() + " is not an integer combination of the given set");
    int h = 0;
    for (int x : *c) h += std::abs(x);
    return h;
}

namespace {

Root unit(std::size_t dim, std::initializer_list<std::pair<std::size_t, int>> entries) {
    std::vector<int> v(dim, 0);
    for (auto [i, x] : entries) v[i] += x;
    return Root(std::move(v));
}

// Simple roots (scaled by 2) for each supported type.
std::vector<Root> standard_simples(Family f, int d) {
    std::vector<Root> s;
    auto chain = [&](std::size_t dim, int count) {
        for (int i = 0; i < count; ++i) s.push_back(unit(dim, {{i, 2}, {i + 1, -2}}));
    };
    switch (f) {
        case Family::A:
            chain(d + 1, d);
            break;
        case Family::B:
            chain(d, d - 1);
            s.push_back(unit(d, {{d - 1, 2}}));
            break;
        case Family::C:
            chain(d, d - 1);
            s.push_back(unit(d, {{d - 1, 4}}));
            break;
        case Family::D:
            chain(d, d - 1);
            s.push_back(unit(d, {{d - 2, 2}, {d - 1, 2}}));
            break;
        case Family::G:
            s.push_back(unit(3, {{0, 2}, {1, -2}}));
            s.push_back(unit(3, {{0, -4}, {1, 2}, {2, 2}}));
            break;
        case Family::F:
            s.push_back(unit(4, {{1, 2}, {2, -2}}));
            s.push_back(unit(4, {{2, 2}, {3, -2}}));
            s.push_back(unit(4, {{3, 2}}));
            s.push_back(Root({1, -1, -1, -1}));
            break;
        case Family::E: {
            s.push_back(Root({1, -1, -1, -1, -1, -1, -1, 1}));
            s.push_back(unit(8, {{0, 2}, {1, 2}}));
            for (int i = 1; i < 7; ++i) s.push_back(unit(8, {{static_cast<std::size_t>(i), 2}, {static_cast<std::size_t>(i - 1), -2}}));
            s.resize(d);
            break;
        }
    }
    return s;
}

bool legal(Family f, int d) {
    switch (f) {
        case Family::A: return d >= 1;
        case Family::B: return d >= 2;
        case Family::C: return d >= 3;
        case Family::D: return d >= 4;
        case Family::E: return d >= 6 && d <= 8;
        case Family::F: return d == 4;
        case Family::G: return d == 2;
    }
    return false;
}

}  // namespace

RootSystem RootSystem::build(Family family, int rank) {
    if (!legal(family, rank) || rank > 64)
        throw DomainError(std::string("illegal root system ") + family_char(family) + std::to_string(rank));
    auto simples = standard_simples(family, rank);

    // Phi is the orbit of the simple roots under the simple reflections.
    std::unordered_map<Root, std::vector<int>, RootHash> coords;
    std::deque<Root> queue;
    for (int i = 0; i < rank; ++i) {
        std::vector<int> c(rank, 0);
        c[i] = 1;
        coords.emplace(simples[i], c);
        queue.push_back(simples[i]);
    }
    while (!queue.empty()) {
        Root r = queue.front();
        queue.pop_front();
        const auto c = coords.at(r);
        for (int i = 0; i < rank; ++i) {
            const auto& a = simples[i];
            long k = 2 * r.dot(a) / a.norm2();
            if (k == 0) continue;
            Root w = r - a * static_cast<int>(k);
            if (coords.count(w)) continue;
            auto wc = c;
            wc[i] -= static_cast<int>(k);
            coords.emplace(w, std::move(wc));
            queue.push_back(std::move(w));
        }
    }

    std::vector<Root> roots;
    roots.reserve(coords.size());
    for (auto& [r, c] : coords) roots.push_back(r);
    auto sign_height = [&](const Root& r) {
        const auto& c = coords.at(r);
        return std::accumulate(c.begin(), c.end(), 0);
    };
    std::sort(roots.begin(), roots.end(), [&](const Root& x, const Root& y) {
        int hx = sign_height(x), hy = sign_height(y);
        bool px = hx > 0, py = hy > 0;
        if (px != py) return px;
        if (std::abs(hx) != std::abs(hy)) return std::abs(hx) < std::abs(hy);
        const auto& cx = coords.at(x);
        const auto& cy = coords.at(y);
        if (px) return cx > cy;
        return cx < cy;
    });
    RootSystem phi(family, rank, std::move(roots), std::move(simples));
    for (const auto& r : phi.roots_) phi.simple_coords_.push_back(coords.at(r));
    return phi;
}

RootSystem::RootSystem(Family f, int rank, std::vector<Root> roots, std::vector<Root> simples)
    : family_(f), rank_(rank), roots_(std::move(roots)), simples_(std::move(simples)) {
    for (std::size_t i = 0; i < roots_.size(); ++i) index_.emplace(roots_[i], static_cast<int>(i));
}

std::string RootSystem::label() const { return std::string(1, family_char(family_)) + std::to_string(rank_); }

int RootSystem::index_of(const Root& r) const {
    auto it = index_.find(r);
    return it == index_.end() ? -1 : it->second;
}

const std::vector<int>& RootSystem::simple_coordinates(const Root& r) const {
    int i = index_of(r);
    if (i < 0) throw DomainError("not a root of " + label() + ": " + r.to_string());
    return simple_coords_[i];
}

bool RootSystem::is_positive(const Root& r) const {
    const auto& c = simple_coordinates(r);
    return std::accumulate(c.begin(), c.end(), 0) > 0;
}

int RootSystem::height(const Root& r) const {
    int h = 0;
    for (int x : simple_coordinates(r)) h += std::abs(x);
    return h;
}

Root RootSystem::simple_sum() const {
    Root s(std::vector<int>(ambient_dim(), 0));
    for (const auto& a : simples_) s = s + a;
    return s;
}

std::vector<Root> GeneratingSet::without(std::size_t k) const { return without(std::vector<std::size_t>{k}); }

std::vector<Root> GeneratingSet::without(const std::vector<std::size_t>& ks) const {
    std::vector<Root> out;
    for (std::size_t i = 0; i < members.size(); ++i)
        if (std::find(ks.begin(), ks.end(), i) == ks.end()) out.push_back(members[i]);
    return out;
}

GeneratingSet special_set(const RootSystem& phi) {
    if (phi.rank() < 2) throw DomainError("special set requires rank at least 2");
    Root top = -phi.simple_sum();
    if (!phi.contains(top)) throw IntegrityError("sum of simple roots is not a root in " + phi.label());
    GeneratingSet s{phi.simples()};
    s.members.push_back(top);
    return s;
}

GeneratingSet b2_alternative_set(const RootSystem& phi) {
    if (phi.family() != Family::B || phi.rank() != 2) throw DomainError("alternative set is defined for B2 only");
    const Root& b = phi.simples()[0];  // long
    const Root& a = phi.simples()[1];  // short
    return GeneratingSet{{-(a * 2) - b, b, a}};
}

std::vector<Root> positive_closure(const RootSystem& phi, const std::vector<Root>& s) {
    std::unordered_set<Root, RootHash> seen;
    std::vector<Root> out;
    std::deque<Root> queue;
    for (const auto& a : s) {
        if (!phi.contains(a)) throw DomainError("not a root: " + a.to_string());
        if (seen.insert(a).second) {
            out.push_back(a);
            queue.push_back(a);
        }
    }
    while (!queue.empty()) {
        Root r = queue.front();
        queue.pop_front();
        for (const auto& a : s) {
            Root w = r + a;
            if (phi.contains(w) && seen.insert(w).second) {
                out.push_back(w);
                queue.push_back(std::move(w));
            }
        }
    }
    return out;
}

bool check_positive_span(const RootSystem& phi, const std::vector<Root>& s) {
    return positive_closure(phi, s).size() == phi.size();
}

std::string to_string(ConeKind k) {
    switch (k) {
        case ConeKind::Commuting: return "commuting";
        case ConeKind::Case1: return "case1";
        case ConeKind::Case2: return "case2";
        case ConeKind::Case3: return "case3";
        case ConeKind::Case4: return "case4";
    }
    return "?";
}

PositiveCone positive_cone(const RootSystem& phi, const Root& a, const Root& b) {
    if ((a + b).is_zero()) throw DomainError("positive cone of an opposite pair");
    if (!phi.contains(a) || !phi.contains(b)) throw DomainError("positive cone arguments must be roots");
    PositiveCone cone;
    std::vector<std::pair<int, int>> mixed;
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j) {
            if (i == 0 && j == 0) continue;
            Root r = a * i + b * j;
            if (!phi.contains(r)) continue;
            cone.terms.push_back({i, j, r});
            if (i > 0 && j > 0) mixed.emplace_back(i, j);
        }
    std::sort(cone.terms.begin(), cone.terms.end(), [](const ConeTerm& x, const ConeTerm& y) {
        if (x.i + x.j != y.i + y.j) return x.i + x.j < y.i + y.j;
        return x.i > y.i;
    });
    std::sort(mixed.begin(), mixed.end());
    using P = std::vector<std::pair<int, int>>;
    if (a == b || mixed.empty()) {
        cone.kind = ConeKind::Commuting;
    } else if (mixed == P{{1, 1}}) {
        cone.kind = ConeKind::Case1;
    } else if (mixed == P{{1, 1}, {2, 1}}) {
        cone.kind = ConeKind::Case2;
    } else if (mixed == P{{1, 1}, {1, 2}}) {
        cone.kind = ConeKind::Case2;
        cone.mirrored = true;
    } else if (mixed == P{{1, 1}, {1, 2}, {2, 1}}) {
        cone.kind = ConeKind::Case3;
    } else if (mixed == P{{1, 1}, {2, 1}, {3, 1}, {3, 2}}) {
        cone.kind = ConeKind::Case4;
    } else if (mixed == P{{1, 1}, {1, 2}, {1, 3}, {2, 3}}) {
        cone.kind = ConeKind::Case4;
        cone.mirrored = true;
    } else {
        throw IntegrityError("unrecognised rank-2 cone in " + phi.label());
    }
    return cone;
}

std::vector<Root> prefix_decompose(const RootSystem& phi, const Root& g, const std::vector<Root>& a_set) {
    auto closure = positive_closure(phi, a_set);
    std::unordered_set<Root, RootHash> reach(closure.begin(), closure.end());
    if (!reach.count(g)) throw DomainError(g.to_string() + " is not in the N-span of the given roots");
    std::vector<Root> peeled;
    Root cur = g;
    while (std::find(a_set.begin(), a_set.end(), cur) == a_set.end()) {
        bool stepped = false;
        for (auto it = a_set.rbegin(); it != a_set.rend(); ++it) {
            const Root& a = *it;
            if (cur.dot(a) <= 0) continue;
            Root rest = cur - a;
            if (!reach.count(rest)) continue;
            peeled.push_back(a);
            cur = rest;
            stepped = true;
            break;
        }
        if (!stepped) throw IntegrityError("prefix decomposition stalled at " + cur.to_string());
    }
    peeled.push_back(cur);
    std::reverse(peeled.begin(), peeled.end());
    return peeled;
}

std::pair<Root, Root> decompose_as_root_sum(const RootSystem& phi, const Root& g) {
    if (phi.rank() < 2) throw DomainError("root decomposition requires rank at least 2");
    if (!phi.contains(g)) throw DomainError("not a root: " + g.to_string());
    for (const auto& b : phi.roots()) {
        if (b == g || b == -g || b.dot(g) >= 0) continue;
        Root nb = -b;
        Root d = g - nb;
        if (phi.contains(d)) return {d, nb};
    }
    throw IntegrityError("no decomposition found for " + g.to_string());
}

bool check_root_sum_law(const RootSystem& phi) {
    for (const auto& a : phi.roots())
        for (const auto& b : phi.roots()) {
            long ip = a.dot(b);
            if (ip < 0) {
                Root s = a + b;
                if (!s.is_zero() && !phi.contains(s)) return false;
            } else if (ip > 0) {
                Root s = a - b;
                if (!s.is_zero() && !phi.contains(s)) return false;
            }
        }
    return true;
}

}  // namespace hdx
