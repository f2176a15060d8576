#include "hdx/matgroups.hpp"

#include <algorithm>
#include <fstream>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <numeric>
#include <random>

#include "hdx/errors.hpp"
#include "hdx/steinberg.hpp"

namespace hdx {

SmallMatOps::SmallMatOps(int n, int p) : n_(n), p_(p) {
    if (n < 2 || n > 5) throw DomainError("SmallMatOps: 2 <= n <= 5");
    long double bits = n * n * std::log2(static_cast<long double>(p));
    if (bits >= 64) throw DomainError("SmallMatOps: p^(n^2) does not fit in 64 bits");
}

SmallMat SmallMatOps::identity() const {
    SmallMat x;
    for (int i = 0; i < n_; ++i) x.a[i * n_ + i] = 1;
    return x;
}

SmallMat SmallMatOps::mul(const SmallMat& x, const SmallMat& y) const noexcept {
    SmallMat z;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            int s = 0;
            for (int k = 0; k < n_; ++k) s += x.a[i * n_ + k] * y.a[k * n_ + j];
            z.a[i * n_ + j] = static_cast<std::uint8_t>(s % p_);
        }
    return z;
}

std::uint64_t SmallMatOps::encode(const SmallMat& x) const noexcept {
    std::uint64_t c = 0;
    for (int i = 0; i < n_ * n_; ++i) c = c * p_ + x.a[i];
    return c;
}

SmallMat SmallMatOps::decode(std::uint64_t c) const noexcept {
    SmallMat x;
    for (int i = n_ * n_ - 1; i >= 0; --i) {
        x.a[i] = static_cast<std::uint8_t>(c % p_);
        c /= p_;
    }
    return x;
}

SmallMat SmallMatOps::from_mat(const Mat& m) const {
    if (m.n != n_) throw DomainError("from_mat: size mismatch");
    SmallMat x;
    for (int i = 0; i < n_ * n_; ++i) {
        if (m.e[i].degree() > 0) throw DomainError("from_mat: entry outside the prime field");
        x.a[i] = m.e[i].c[0];
    }
    return x;
}

Mat SmallMatOps::to_mat(const Field& f, const SmallMat& x) const {
    Mat m(n_);
    for (int i = 0; i < n_ * n_; ++i) m.e[i] = f.from_int(x.a[i]);
    return m;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

void CodeIndex::reserve(std::size_t n) {
    std::size_t cap = 16;
    while (cap < 2 * n) cap <<= 1;
    codes_.assign(cap, 0);
    idx_.assign(cap, 0);
    mask_ = cap - 1;
}

std::uint32_t CodeIndex::insert(std::uint64_t code, std::uint32_t idx) {
    std::uint64_t h = mix(code) & mask_;
    while (codes_[h] != 0) {
        if (codes_[h] == code) return idx_[h];
        h = (h + 1) & mask_;
    }
    codes_[h] = code;
    idx_[h] = idx;
    return idx;
}

std::int64_t CodeIndex::find(std::uint64_t code) const {
    if (codes_.empty()) return -1;
    std::uint64_t h = mix(code) & mask_;
    while (codes_[h] != 0) {
        if (codes_[h] == code) return idx_[h];
        h = (h + 1) & mask_;
    }
    return -1;
}

namespace {

std::vector<int> invariant_degrees(const RootSystem& phi) {
    const int d = phi.rank();
    std::vector<int> deg;
    switch (phi.family()) {
        case Family::A:
            for (int i = 2; i <= d + 1; ++i) deg.push_back(i);
            break;
        case Family::B:
        case Family::C:
            for (int i = 1; i <= d; ++i) deg.push_back(2 * i);
            break;
        case Family::D:
            for (int i = 1; i < d; ++i) deg.push_back(2 * i);
            deg.push_back(d);
            break;
        case Family::G: deg = {2, 6}; break;
        case Family::F: deg = {2, 6, 8, 12}; break;
        case Family::E:
            if (d == 6) deg = {2, 5, 6, 8, 9, 12};
            if (d == 7) deg = {2, 6, 8, 10, 12, 14, 18};
            if (d == 8) deg = {2, 8, 12, 14, 18, 20, 24, 30};
            break;
    }
    return deg;
}

boost::multiprecision::cpp_int order_big(const RootSystem& phi, int p, int m) {
    using boost::multiprecision::cpp_int;
    cpp_int q = 1;
    for (int i = 0; i < m; ++i) q *= p;
    cpp_int r = 1;
    for (std::size_t i = 0; i < phi.size() / 2; ++i) r *= q;
    for (int e : invariant_degrees(phi)) {
        cpp_int qe = 1;
        for (int i = 0; i < e; ++i) qe *= q;
        r *= qe - 1;
    }
    return r;
}

}  // namespace

std::string group_order_string(const RootSystem& phi, int p, int m) { return order_big(phi, p, m).str(); }

std::uint64_t group_order(const RootSystem& phi, int p, int m) {
    auto r = order_big(phi, p, m);
    if (r > std::numeric_limits<std::uint64_t>::max()) throw ResourceError("group order exceeds 64 bits: " + r.str());
    return static_cast<std::uint64_t>(r);
}

EnumBudget default_budget() {
    EnumBudget b;
    if (const char* env = std::getenv("HDX_BUDGET_MB")) {
        char* end = nullptr;
        unsigned long long mb = std::strtoull(env, &end, 10);
        if (end != env && mb > 0) b.max_bytes = static_cast<std::uint64_t>(mb) << 20;
    }
    return b;
}

GroupTable::GroupTable(Realization re, int p) : re_(std::move(re)), field_(p, 1), ops_(re_.n(), p) {}

SmallMat GroupTable::root_element(const Root& alpha, int t) const {
    return ops_.from_mat(re_.root_matrix(field_, alpha, field_.from_int(t)));
}

GroupTable GroupTable::enumerate(const Realization& re, int p, const EnumBudget& budget) {
    const std::uint64_t predicted = group_order(re.phi(), p, 1);
    const std::uint64_t bytes = predicted * (sizeof(std::uint64_t) + 4 * (sizeof(std::uint64_t) + sizeof(std::uint32_t)));
    if (predicted > budget.max_elements || (budget.max_bytes && bytes > budget.max_bytes))
        throw ResourceError("group of order " + std::to_string(predicted) + " (~" + std::to_string(bytes >> 20) +
                            " MB) exceeds the enumeration budget");
    GroupTable g(re, p);
    for (const auto& a : re.phi().simples()) {
        g.gens_.push_back(g.root_element(a, 1));
        g.gens_.push_back(g.root_element(-a, 1));
    }
    g.codes_.reserve(predicted);
    g.index_.reserve(predicted);

    // each generator is I + N with a sparse N: right multiplication adds
    // multiples of columns, so codes update digit by digit
    const int n = re.n();
    std::vector<std::uint64_t> weight(n * n);
    for (int i = n * n - 1, w = 0; i >= 0; --i, ++w) weight[i] = w == 0 ? 1 : weight[i + 1] * p;
    struct Op {
        int src, dst, v;
    };
    std::vector<std::vector<Op>> ops;
    for (const auto& s : g.gens_) {
        std::vector<Op> o;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int v = (s.a[i * n + j] - (i == j ? 1 : 0) + p) % p;
                if (v) o.push_back({i, j, v});
            }
        ops.push_back(std::move(o));
    }

    g.codes_.push_back(g.ops_.encode(g.ops_.identity()));
    g.index_.insert(g.codes_[0], 0);
    for (std::size_t head = 0; head < g.codes_.size(); ++head) {
        const std::uint64_t code = g.codes_[head];
        const SmallMat x = g.ops_.decode(code);
        for (const auto& o : ops) {
            std::int64_t delta = 0;
            for (const auto& op : o)
                for (int r = 0; r < n; ++r) {
                    int pos = r * n + op.dst;
                    int old_digit = x.a[pos];
                    int new_digit = (old_digit + op.v * x.a[r * n + op.src]) % p;
                    delta += (static_cast<std::int64_t>(new_digit) - old_digit) * static_cast<std::int64_t>(weight[pos]);
                }
            const std::uint64_t c = code + static_cast<std::uint64_t>(delta);
            auto idx = static_cast<std::uint32_t>(g.codes_.size());
            if (g.index_.insert(c, idx) == idx) g.codes_.push_back(c);
        }
        if (g.codes_.size() > predicted) throw IntegrityError("enumeration exceeded the order formula");
    }
    if (g.codes_.size() != predicted)
        throw IntegrityError("enumerated " + std::to_string(g.codes_.size()) + " elements, order formula gives " +
                             std::to_string(predicted));
    return g;
}

namespace {

bool central(const GroupTable& g, const SmallMat& x) {
    for (const auto& s : g.generators())
        if (!(g.ops().mul(x, s) == g.ops().mul(s, x))) return false;
    return true;
}

}  // namespace

std::vector<std::uint64_t> center_scan_serial(const GroupTable& g) {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (central(g, g.element(i))) out.push_back(g.code(i));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> center_scan(const GroupTable& g) {
    std::vector<std::uint64_t> out;
    const auto n = static_cast<std::int64_t>(g.size());
#pragma omp parallel
    {
        std::vector<std::uint64_t> local;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < n; ++i)
            if (central(g, g.element(i))) local.push_back(g.code(i));
#pragma omp critical
        out.insert(out.end(), local.begin(), local.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

CenterDesc center(const GroupTable& g) {
    CenterDesc z;
    for (auto c : center_scan(g)) z.elements.push_back(g.ops().decode(c));
    const int q = g.field().p();
    if (g.realization().kind() == Realization::Kind::SL) {
        z.expected = std::gcd(g.realization().n(), q - 1);
        z.footnote = g.realization().n();
    } else {
        z.expected = q % 2 == 0 ? 1 : 2;
        z.footnote = 2;
    }
    return z;
}

std::uint64_t adjoint_canonical(const GroupTable& g, const CenterDesc& z, const SmallMat& x) {
    std::uint64_t best = g.ops().encode(x);
    for (const auto& e : z.elements) best = std::min(best, g.ops().encode(g.ops().mul(x, e)));
    return best;
}

std::vector<std::uint64_t> subgroup_closure(const GroupTable& g, const std::vector<SmallMat>& gens) {
    std::vector<std::uint64_t> codes = {g.ops().encode(g.ops().identity())};
    CodeIndex idx;
    idx.reserve(1024);
    idx.insert(codes[0], 0);
    for (std::size_t head = 0; head < codes.size(); ++head) {
        SmallMat x = g.ops().decode(codes[head]);
        for (const auto& s : gens) {
            std::uint64_t c = g.ops().encode(g.ops().mul(x, s));
            auto id = static_cast<std::uint32_t>(codes.size());
            if (idx.insert(c, id) != id) continue;
            codes.push_back(c);
            if (codes.size() * 2 > idx.capacity()) {
                CodeIndex bigger;
                bigger.reserve(codes.size() * 2);
                for (std::uint32_t k = 0; k < codes.size(); ++k) bigger.insert(codes[k], k);
                idx = std::move(bigger);
            }
        }
    }
    std::sort(codes.begin(), codes.end());
    return codes;
}

std::vector<std::uint64_t> root_subgroup(const GroupTable& g, const std::vector<Root>& psi) {
    std::vector<SmallMat> gens;
    for (const auto& r : psi) gens.push_back(g.root_element(r, 1));
    return subgroup_closure(g, gens);
}

CommutatorReport verify_commutator(const Realization& re, int trials, std::uint64_t seed) {
    CommutatorReport rep;
    const auto& phi = re.phi();
    static const Field cal(7, 2);
    static const Field f(5, 3);
    std::mt19937_64 rng(seed);
    auto matrix_commutator = [&](const Field& fld, const Root& a, const Root& b, const FieldElem& t, const FieldElem& u) {
        Mat g = mat_mul(fld, re.root_matrix(fld, a, fld.neg(t)), re.root_matrix(fld, b, fld.neg(u)));
        g = mat_mul(fld, g, re.root_matrix(fld, a, t));
        return mat_mul(fld, g, re.root_matrix(fld, b, u));
    };
    for (const auto& a : phi.roots())
        for (const auto& b : phi.roots()) {
            if (a == b || a == -b) continue;
            ++rep.pairs;
            auto cone = positive_cone(phi, a, b);
            std::vector<ConeTerm> mixed;
            for (const auto& t : cone.terms)
                if (t.i > 0 && t.j > 0) mixed.push_back(t);
            // uniqueness of the constant assignment at t = u = 1
            const Mat want = matrix_commutator(cal, a, b, cal.one(), cal.one());
            std::size_t combos = 1, fits = 0;
            for (std::size_t q = 0; q < mixed.size(); ++q) combos *= 6;
            static constexpr int cands[6] = {1, -1, 2, -2, 3, -3};
            for (std::size_t code = 0; code < combos; ++code) {
                std::size_t c = code;
                Mat prod = identity_matrix(cal, re.n());
                for (const auto& t : mixed) {
                    prod = mat_mul(cal, prod, re.root_matrix(cal, t.root, cal.from_int(cands[c % 6])));
                    c /= 6;
                }
                if (prod == want) ++fits;
            }
            if (fits != 1) ++rep.ambiguous;
            for (int trial = 0; trial < trials; ++trial) {
                ++rep.trials;
                FieldElem t = f.decode(rng() % f.order()), u = f.decode(rng() % f.order());
                Word w = commutator(phi, {a, t}, {b, u}, f, &re);
                Mat lhs = identity_matrix(f, re.n());
                for (const auto& l : w) lhs = mat_mul(f, lhs, re.root_matrix(f, l.root, l.coeff));
                if (!(lhs == matrix_commutator(f, a, b, t, u))) ++rep.failures;
            }
        }
    return rep;
}

bool centerint_check(const GroupTable& g, const CenterDesc& z, const std::vector<Root>& psi, const std::vector<Root>& psi2) {
    auto zx = [&](const std::vector<Root>& roots) {
        std::vector<std::uint64_t> out;
        for (auto c : root_subgroup(g, roots))
            for (const auto& e : z.elements) out.push_back(g.ops().encode(g.ops().mul(g.ops().decode(c), e)));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    std::vector<Root> common;
    for (const auto& r : psi)
        if (std::find(psi2.begin(), psi2.end(), r) != psi2.end()) common.push_back(r);
    auto x1 = zx(psi), x2 = zx(psi2), x12 = zx(common);
    std::vector<std::uint64_t> inter;
    std::set_intersection(x1.begin(), x1.end(), x2.begin(), x2.end(), std::back_inserter(inter));
    return inter == x12;
}

bool triangularity_check(const GroupTable& g) {
    const int n = g.ops().n();
    std::vector<int> pos(n);
    std::iota(pos.begin(), pos.end(), 0);
    if (g.realization().kind() == Realization::Kind::Sp4) pos = {0, 1, 3, 2};
    std::vector<Root> plus, minus;
    for (const auto& r : g.realization().phi().roots()) (g.realization().phi().is_positive(r) ? plus : minus).push_back(r);
    auto up = root_subgroup(g, plus), down = root_subgroup(g, minus);
    auto shape_ok = [&](const std::vector<std::uint64_t>& codes, bool upper) {
        for (auto c : codes) {
            SmallMat x = g.ops().decode(c);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    int v = x.a[i * n + j];
                    int pi = pos[i], pj = pos[j];
                    if (pi == pj && v != 1) return false;
                    if ((upper ? pi > pj : pi < pj) && v != 0) return false;
                }
        }
        return true;
    };
    std::vector<std::uint64_t> inter;
    std::set_intersection(up.begin(), up.end(), down.begin(), down.end(), std::back_inserter(inter));
    return shape_ok(up, true) && shape_ok(down, false) && inter.size() == 1 &&
           inter[0] == g.ops().encode(g.ops().identity());
}

void save_group_table(const GroupTable& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write " + path);
    auto put = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof v); };
    out.write("HDXGRP01", 8);
    put(static_cast<std::uint64_t>(g.field().p()));
    const auto name = g.realization().name();
    put(name.size());
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) put(g.code(i));
    if (!out) throw ResourceError("write failed: " + path);
}

}  // namespace hdx
