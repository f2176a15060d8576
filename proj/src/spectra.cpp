#include "hdx/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <numeric>
#include <random>

#include "hdx/errors.hpp"

namespace hdx {

namespace {

int mod(long v, int p) {
    long r = v % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void project_out(std::vector<double>& x, const std::vector<std::vector<double>>& basis) {
    for (const auto& q : basis) {
        const double c = dot(x, q);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * q[i];
    }
}

std::vector<double> constant_unit(std::size_t n) { return std::vector<double>(n, 1.0 / std::sqrt(double(n))); }

}  // namespace

SparseWalkGraph SparseWalkGraph::from_arcs(std::size_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs) {
    for (auto [a, b] : arcs)
        if (a >= n || b >= n) throw DomainError("arc endpoint out of range");
    std::sort(arcs.begin(), arcs.end());
    SparseWalkGraph g;
    g.start_.assign(n + 1, 0);
    for (std::size_t i = 0; i < arcs.size();) {
        std::size_t j = i;
        while (j < arcs.size() && arcs[j] == arcs[i]) ++j;
        g.col_.push_back(arcs[i].second);
        g.mult_.push_back(static_cast<std::uint32_t>(j - i));
        ++g.start_[arcs[i].first + 1];
        i = j;
    }
    std::partial_sum(g.start_.begin(), g.start_.end(), g.start_.begin());
    std::vector<std::uint64_t> rows(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t a = g.start_[v]; a < g.start_[v + 1]; ++a) rows[v] += g.mult_[a];
    g.degree_ = n ? rows[0] : 0;
    for (auto r : rows)
        if (r != g.degree_) throw DomainError("walk graph must be regular");
    // symmetry: the multiplicity of (a, b) equals that of (b, a)
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t a = g.start_[v]; a < g.start_[v + 1]; ++a) {
            const auto w = g.col_[a];
            auto first = g.col_.begin() + static_cast<std::ptrdiff_t>(g.start_[w]);
            auto last = g.col_.begin() + static_cast<std::ptrdiff_t>(g.start_[w + 1]);
            auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(v));
            if (it == last || *it != v || g.mult_[it - g.col_.begin()] != g.mult_[a])
                throw DomainError("walk graph must be symmetric");
        }
    return g;
}

SparseWalkGraph SparseWalkGraph::from_link(const LinkGraph& l) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    arcs.reserve(2 * l.edges.size());
    const auto off = static_cast<std::uint32_t>(l.left);
    for (auto [a, b] : l.edges) {
        arcs.emplace_back(a, off + b);
        arcs.emplace_back(off + b, a);
    }
    auto g = from_arcs(l.left + l.right, std::move(arcs));
    g.side_.assign(l.left + l.right, 0);
    std::fill(g.side_.begin() + static_cast<std::ptrdiff_t>(l.left), g.side_.end(), 1);
    return g;
}

void SparseWalkGraph::apply(const std::vector<double>& x, std::vector<double>& y) const {
    const auto n = static_cast<std::int64_t>(size());
    y.resize(size());
    const double inv = 1.0 / double(degree_);
#pragma omp parallel for schedule(static)
    for (std::int64_t v = 0; v < n; ++v) {
        double s = 0;
        for (std::size_t a = start_[v]; a < start_[v + 1]; ++a) s += mult_[a] * x[col_[a]];
        y[v] = s * inv;
    }
}

void SparseWalkGraph::apply_serial(const std::vector<double>& x, std::vector<double>& y) const {
    y.resize(size());
    const double inv = 1.0 / double(degree_);
    for (std::size_t v = 0; v < size(); ++v) {
        double s = 0;
        for (std::size_t a = start_[v]; a < start_[v + 1]; ++a) s += mult_[a] * x[col_[a]];
        y[v] = s * inv;
    }
}

std::size_t SparseWalkGraph::components() const {
    std::vector<std::uint32_t> parent(size());
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t v = 0; v < size(); ++v)
        for (std::size_t a = start_[v]; a < start_[v + 1]; ++a) {
            auto r1 = find(static_cast<std::uint32_t>(v)), r2 = find(col_[a]);
            if (r1 != r2) parent[std::max(r1, r2)] = std::min(r1, r2);
        }
    std::size_t c = 0;
    for (std::uint32_t v = 0; v < size(); ++v) c += find(v) == v;
    return c;
}

bool SparseWalkGraph::connected() const { return components() == 1; }

SparseWalkGraph square_one_side(const SparseWalkGraph& g, Side side) {
    if (!g.bipartite()) throw DomainError("square_one_side needs a bipartite graph");
    const std::uint8_t want = side == Side::Left ? 0 : 1;
    std::vector<std::uint32_t> local(g.size(), 0), members;
    for (std::uint32_t v = 0; v < g.size(); ++v)
        if (g.side_[v] == want) {
            local[v] = static_cast<std::uint32_t>(members.size());
            members.push_back(v);
        }
    SparseWalkGraph sq;
    sq.degree_ = g.degree_ * g.degree_;
    sq.start_.assign(members.size() + 1, 0);
    std::vector<std::uint64_t> acc(members.size(), 0);
    std::vector<std::uint32_t> touched;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto u = members[i];
        for (std::size_t a = g.start_[u]; a < g.start_[u + 1]; ++a) {
            const auto w = g.col_[a];
            for (std::size_t b = g.start_[w]; b < g.start_[w + 1]; ++b) {
                const auto t = local[g.col_[b]];
                if (acc[t] == 0) touched.push_back(t);
                acc[t] += std::uint64_t(g.mult_[a]) * g.mult_[b];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (auto t : touched) {
            sq.col_.push_back(t);
            sq.mult_.push_back(static_cast<std::uint32_t>(acc[t]));
            acc[t] = 0;
        }
        sq.start_[i + 1] = sq.col_.size();
        touched.clear();
    }
    return sq;
}

PowerResult power_iteration(const LinearOperator& op, const std::vector<std::vector<double>>& deflate,
                            const PowerOptions& opt) {
    const std::size_t n = op.n;
    std::vector<std::vector<double>> basis;
    for (auto q : deflate) {
        project_out(q, basis);
        const double nq = std::sqrt(dot(q, q));
        if (nq < 1e-12) continue;
        for (auto& v : q) v /= nq;
        basis.push_back(std::move(q));
    }
    PowerResult res;
    if (basis.size() >= n) return res;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = dist(rng);
    project_out(x, basis);
    double nx = std::sqrt(dot(x, x));
    for (auto& v : x) v /= nx;
    for (res.iterations = 1; res.iterations <= opt.max_iter; ++res.iterations) {
        op.apply(x, y);
        project_out(y, basis);
        res.value = dot(x, y);
        double r2 = 0;
        for (std::size_t i = 0; i < n; ++i) r2 += (y[i] - res.value * x[i]) * (y[i] - res.value * x[i]);
        res.residual = std::sqrt(r2);
        const double ny = std::sqrt(dot(y, y));
        if (res.residual <= opt.tol || ny == 0) break;
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    }
    res.iterations = std::min(res.iterations, opt.max_iter);
    return res;
}

namespace {

SpectralReport second_eigenvalue_with(const SparseWalkGraph& g, const PowerOptions& opt, bool parallel) {
    if (!g.connected()) throw DomainError("graph is disconnected: eigenvalue 1 is repeated");
    const std::size_t n = g.size();
    auto mv = [&g, parallel](const std::vector<double>& x, std::vector<double>& y) {
        if (parallel)
            g.apply(x, y);
        else
            g.apply_serial(x, y);
    };
    std::vector<std::vector<double>> deflate = {constant_unit(n)};
    LinearOperator op{n, {}};
    SpectralReport rep;
    rep.method = "power-iteration";
    if (g.bipartite()) {
        std::vector<double> sign(n);
        for (std::size_t v = 0; v < n; ++v) sign[v] = g.sides()[v] ? -1.0 : 1.0;
        deflate.push_back(sign);
        op.apply = [mv](const std::vector<double>& x, std::vector<double>& y) {
            std::vector<double> t;
            mv(x, t);
            mv(t, y);
        };
        auto r = power_iteration(op, deflate, opt);
        rep.lambda2 = std::sqrt(std::max(0.0, r.value));
        rep.lo = std::sqrt(std::max(0.0, r.value - r.residual));
        rep.hi = std::sqrt(std::max(0.0, r.value + r.residual));
        rep.iterations = r.iterations;
    } else if (opt.psd) {
        op.apply = mv;
        auto r = power_iteration(op, deflate, opt);
        rep.lambda2 = r.value;
        rep.lo = r.value - r.residual;
        rep.hi = r.value + r.residual;
        rep.iterations = r.iterations;
    } else {
        op.apply = [mv](const std::vector<double>& x, std::vector<double>& y) {
            mv(x, y);
            for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.5 * (y[i] + x[i]);
        };
        auto r = power_iteration(op, deflate, opt);
        rep.lambda2 = 2 * r.value - 1;
        rep.lo = 2 * (r.value - r.residual) - 1;
        rep.hi = 2 * (r.value + r.residual) - 1;
        rep.iterations = r.iterations;
    }
    return rep;
}

}  // namespace

SpectralReport second_eigenvalue(const SparseWalkGraph& g, const PowerOptions& opt) {
    return second_eigenvalue_with(g, opt, true);
}
SpectralReport second_eigenvalue_serial(const SparseWalkGraph& g, const PowerOptions& opt) {
    return second_eigenvalue_with(g, opt, false);
}

std::vector<double> dense_spectrum(const SparseWalkGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    if (n > 6000) throw ResourceError("dense spectrum limited to 6000 vertices");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index v = 0; v < n; ++v)
        for (std::size_t a = g.row_begin(v); a < g.row_end(v); ++a)
            m(v, g.col(a)) += double(g.mult(a)) / double(g.degree());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t CayleySide::vertices() const {
    std::uint64_t n = 1;
    for (int i = 0; i < dim; ++i) n *= static_cast<std::uint64_t>(p);
    return n;
}

CayleySide cayley_side(const SpanGroup& g, int samples, std::uint64_t seed) {
    const auto& span = g.span();
    if (span.psi().size() != 2) throw DomainError("Cayley side needs two roots");
    const Field& f = g.field();
    const int p = f.p();
    const int ia = span.index_of(span.psi()[1]);
    const int ib = span.index_of(span.psi()[0]);
    std::vector<int> ord;
    for (int k : span.psi_plus())
        if (k != ia) ord.push_back(k);
    ord.push_back(ia);
    std::vector<int> nd;
    int dim = 0;
    for (std::size_t i = 0; i + 1 < ord.size(); ++i) {
        nd.push_back(g.degree_bound(ord[i]) + 1);
        dim += nd.back();
    }
    CayleySide c;
    c.p = p;
    c.dim = dim;

    auto to_coeffs = [&](const std::vector<std::uint8_t>& digits) {
        std::vector<FieldElem> s(ord.size(), f.zero());
        int pos = 0;
        for (std::size_t i = 0; i + 1 < ord.size(); ++i)
            for (int j = 0; j < nd[i]; ++j) s[i].c[j] = digits[pos++];
        return s;
    };
    auto to_digits = [&](const std::vector<FieldElem>& s) {
        std::vector<std::uint8_t> d;
        for (std::size_t i = 0; i + 1 < ord.size(); ++i) {
            if (s[i].degree() >= nd[i]) throw IntegrityError("neighbour leaves the graded box");
            for (int j = 0; j < nd[i]; ++j) d.push_back(s[i].c[j]);
        }
        return d;
    };
    const auto f0s = f.elements_up_to_degree(g.degree_bound(ia));
    const auto f1s = f.elements_up_to_degree(g.degree_bound(ib));
    auto steps_from = [&](const std::vector<std::uint8_t>& v) {
        const auto base = g.from_order(to_coeffs(v), ord);
        std::vector<std::vector<std::uint8_t>> out;
        out.reserve(f0s.size() * f1s.size());
        for (const auto& f0 : f0s)
            for (const auto& f1 : f1s) {
                auto h = base;
                g.mul_letter(h, ia, f0);
                g.mul_letter(h, ib, f1);
                auto d = to_digits(g.to_order(h, ord));
                for (int i = 0; i < dim; ++i) d[i] = static_cast<std::uint8_t>(mod(int(d[i]) - v[i], p));
                out.push_back(std::move(d));
            }
        return out;
    };
    c.steps = steps_from(std::vector<std::uint8_t>(dim, 0));
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        std::vector<std::uint8_t> v(dim);
        for (auto& d : v) d = static_cast<std::uint8_t>(rng() % p);
        if (steps_from(v) != c.steps) throw IntegrityError("steps depend on the start vertex: not an abelian Cayley graph");
    }
    // linearity in f1: step(f0, sum a_j x^j) = sum a_j step(f0, x^j)
    const int nb = g.degree_bound(ib) + 1;
    for (std::size_t i0 = 0; i0 < f0s.size(); ++i0) {
        std::vector<std::vector<std::uint8_t>> basis;
        for (int j = 0; j < nb; ++j) {
            std::size_t i1 = 0;
            while (!(f1s[i1] == f.monomial(j))) ++i1;
            basis.push_back(c.steps[i0 * f1s.size() + i1]);
        }
        for (std::size_t i1 = 0; i1 < f1s.size(); ++i1) {
            std::vector<std::uint8_t> want(dim, 0);
            for (int j = 0; j < nb; ++j)
                for (int k = 0; k < dim; ++k) want[k] = static_cast<std::uint8_t>((want[k] + f1s[i1].c[j] * basis[j][k]) % p);
            if (want != c.steps[i0 * f1s.size() + i1]) throw IntegrityError("steps are not linear in f1");
        }
        c.subspaces.push_back(std::move(basis));
    }
    return c;
}

namespace {

// Index translation by a fixed vector in F_p^k, through tables over chunks of digits.
class Translator {
   public:
    Translator(int p, int dim, const std::vector<std::uint8_t>& u) {
        int per = 1;
        while (per < dim && std::pow(double(p), per + 1) <= 4096) ++per;
        for (int lo = 0; lo < dim; lo += per) {
            const int hi = std::min(dim, lo + per);
            std::uint64_t size = 1, weight = 1;
            for (int i = 0; i < lo; ++i) weight *= p;
            for (int i = lo; i < hi; ++i) size *= p;
            std::vector<std::uint64_t> table(size);
            for (std::uint64_t v = 0; v < size; ++v) {
                std::uint64_t rest = v, out = 0, w = 1;
                for (int i = lo; i < hi; ++i) {
                    out += static_cast<std::uint64_t>((rest % p + u[i]) % p) * w;
                    rest /= p;
                    w *= p;
                }
                table[v] = out * weight;
            }
            chunks_.push_back({weight, size, std::move(table)});
        }
    }
    std::uint64_t operator()(std::uint64_t idx) const {
        std::uint64_t out = 0;
        for (const auto& c : chunks_) out += c.table[(idx / c.weight) % c.size];
        return out;
    }

   private:
    struct Chunk {
        std::uint64_t weight;
        std::uint64_t size;
        std::vector<std::uint64_t> table;
    };
    std::vector<Chunk> chunks_;
};

// x := average of x over the cosets of the line spanned by u.
void line_average(const Translator& tr, int p, std::vector<double>& x, std::vector<std::uint8_t>& seen) {
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<std::uint64_t> orbit(p);
    for (std::uint64_t v = 0; v < x.size(); ++v) {
        if (seen[v]) continue;
        double s = 0;
        std::uint64_t w = v;
        int len = 0;
        do {
            orbit[len++] = w;
            seen[w] = 1;
            s += x[w];
            w = tr(w);
        } while (w != v);
        s /= len;
        for (int i = 0; i < len; ++i) x[orbit[i]] = s;
    }
}

struct CayleyPlan {
    int p;
    std::vector<std::vector<Translator>> lines;
};

std::shared_ptr<CayleyPlan> make_plan(const CayleySide& c) {
    auto plan = std::make_shared<CayleyPlan>();
    plan->p = c.p;
    for (const auto& sub : c.subspaces) {
        std::vector<Translator> ts;
        for (const auto& u : sub) ts.emplace_back(c.p, c.dim, u);
        plan->lines.push_back(std::move(ts));
    }
    return plan;
}

}  // namespace

LinearOperator cayley_operator_serial(const CayleySide& c) {
    auto plan = make_plan(c);
    LinearOperator op;
    op.n = c.vertices();
    op.apply = [plan](const std::vector<double>& x, std::vector<double>& y) {
        y.assign(x.size(), 0.0);
        std::vector<double> t;
        std::vector<std::uint8_t> seen(x.size());
        for (const auto& sub : plan->lines) {
            t = x;
            for (const auto& tr : sub) line_average(tr, plan->p, t, seen);
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += t[i];
        }
        const double inv = 1.0 / double(plan->lines.size());
        for (auto& v : y) v *= inv;
    };
    return op;
}

LinearOperator cayley_operator(const CayleySide& c) {
    auto plan = make_plan(c);
    LinearOperator op;
    op.n = c.vertices();
    op.apply = [plan](const std::vector<double>& x, std::vector<double>& y) {
        y.assign(x.size(), 0.0);
        const auto subs = static_cast<std::int64_t>(plan->lines.size());
#pragma omp parallel
        {
            std::vector<double> t, acc(x.size(), 0.0);
            std::vector<std::uint8_t> seen(x.size());
#pragma omp for schedule(dynamic, 1)
            for (std::int64_t s = 0; s < subs; ++s) {
                t = x;
                for (const auto& tr : plan->lines[s]) line_average(tr, plan->p, t, seen);
                for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += t[i];
            }
#pragma omp critical(hdx_cayley_reduce)
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += acc[i];
        }
        const double inv = 1.0 / double(plan->lines.size());
        for (auto& v : y) v *= inv;
    };
    return op;
}

bool cayley_connected(const CayleySide& c) {
    std::vector<std::vector<int>> rows;
    for (const auto& s : c.steps) rows.emplace_back(s.begin(), s.end());
    int rank = 0;
    for (int col = 0; col < c.dim && rank < static_cast<int>(rows.size()); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        int inv = 1;
        while (rows[rank][col] * inv % c.p != 1) ++inv;
        for (auto& v : rows[rank]) v = v * inv % c.p;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(r) == rank || rows[r][col] == 0) continue;
            const int k = rows[r][col];
            for (int j = 0; j < c.dim; ++j) rows[r][j] = mod(rows[r][j] - k * rows[rank][j], c.p);
        }
        ++rank;
    }
    return rank == c.dim;
}

SpectralReport cayley_second_eigenvalue(const CayleySide& c, const PowerOptions& opt) {
    if (!cayley_connected(c)) throw DomainError("Cayley graph is disconnected");
    auto op = cayley_operator(c);
    auto r = power_iteration(op, {constant_unit(op.n)}, opt);
    SpectralReport rep;
    rep.method = "power-iteration";
    rep.lambda2 = r.value;
    rep.lo = r.value - r.residual;
    rep.hi = r.value + r.residual;
    rep.iterations = r.iterations;
    return rep;
}

std::vector<double> cayley_spectrum(const CayleySide& c) {
    const std::uint64_t n = c.vertices();
    if (n > (std::uint64_t(1) << 26)) throw ResourceError("Cayley spectrum too large");
    std::vector<std::complex<double>> a(n);
    for (const auto& s : c.steps) {
        std::uint64_t idx = 0, w = 1;
        for (int i = 0; i < c.dim; ++i, w *= c.p) idx += s[i] * w;
        a[idx] += 1.0 / double(c.steps.size());
    }
    const int p = c.p;
    std::vector<std::complex<double>> root(p), buf(p);
    for (int k = 0; k < p; ++k) root[k] = std::polar(1.0, 2 * M_PI * k / p);
    std::uint64_t stride = 1;
    for (int axis = 0; axis < c.dim; ++axis, stride *= p) {
        for (std::uint64_t base = 0; base < n; ++base) {
            if ((base / stride) % p != 0) continue;
            for (int r = 0; r < p; ++r) {
                std::complex<double> s = 0;
                for (int k = 0; k < p; ++k) s += a[base + k * stride] * root[(r * k) % p];
                buf[r] = s;
            }
            for (int r = 0; r < p; ++r) a[base + r * stride] = buf[r];
        }
    }
    std::vector<double> out(n);
    for (std::uint64_t i = 0; i < n; ++i) out[i] = a[i].real();
    return out;
}

namespace {

using Mask = std::vector<std::uint64_t>;

int words(int p) { return (p * p + 63) / 64; }

std::uint64_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, int w) {
    std::uint64_t s = 0;
    for (int i = 0; i < w; ++i) s += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    return s;
}

SpectralReport finish_exact(std::map<std::uint64_t, std::uint64_t> hist, std::uint64_t max_nontrivial, int p) {
    SpectralReport rep;
    rep.method = "exact-charsum";
    rep.exact = std::move(hist);
    rep.denominator = static_cast<std::uint64_t>(p) * p;
    rep.lambda2 = double(max_nontrivial) / double(rep.denominator);
    rep.lo = rep.hi = rep.lambda2;
    return rep;
}

// Zero set over (c,d) of a + b c + e d + q1 c^2 + q2 c d + q3 d^2, packed into w words per entry.
std::vector<std::uint64_t> zero_masks(int p, bool quadratic, const std::array<int, 3>& qscale) {
    const int w = words(p);
    const std::uint64_t n = quadratic ? std::uint64_t(p) * p * p * p * p * p : std::uint64_t(p) * p * p;
    std::vector<std::uint64_t> out(n * w, 0);
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        std::uint64_t rest = idx;
        int k[6] = {0, 0, 0, 0, 0, 0};
        for (int i = 0; i < (quadratic ? 6 : 3); ++i) {
            k[i] = static_cast<int>(rest % p);
            rest /= p;
        }
        for (int c = 0; c < p; ++c)
            for (int d = 0; d < p; ++d) {
                long v = k[0] + long(k[1]) * c + long(k[2]) * d;
                if (quadratic) v += long(qscale[0]) * k[3] * c * c + long(qscale[1]) * k[4] * c * d + long(qscale[2]) * k[5] * d * d;
                if (mod(v, p) == 0) {
                    const int bit = c * p + d;
                    out[idx * w + bit / 64] |= std::uint64_t(1) << (bit % 64);
                }
            }
    }
    return out;
}

}  // namespace

std::uint64_t charsum_case2_at(int p, const std::array<int, 5>& r) {
    std::uint64_t n = 0;
    for (int c = 0; c < p; ++c)
        for (int d = 0; d < p; ++d)
            n += mod(r[0] + r[2] * c + r[3] * d, p) == 0 && mod(r[1] + r[3] * c + r[4] * d, p) == 0;
    return n;
}

std::uint64_t charsum_case3_at(int p, int cc, const std::array<int, 9>& r) {
    std::uint64_t n = 0;
    const long C = mod(cc, p);
    for (long c = 0; c < p; ++c)
        for (long d = 0; d < p; ++d) {
            const long h = r[0] + r[2] * c + r[3] * d + C * r[5] * c * c + 2 * C * r[6] * c * d + C * r[7] * d * d;
            const long h2 = r[1] + r[3] * c + r[4] * d + C * r[6] * c * c + 2 * C * r[7] * c * d + C * r[8] * d * d;
            n += mod(h, p) == 0 && mod(h2, p) == 0;
        }
    return n;
}

SpectralReport charsum_case2(int p) {
    if (p <= 2 || !is_prime(p)) throw DomainError("charsum needs an odd prime");
    const int w = words(p);
    // h = r1 + r3 c + r4 d and h' = r2 + r4 c + r5 d share r4
    const auto masks = zero_masks(p, false, {0, 0, 0});
    auto at = [&](int a, int b, int e) { return &masks[(std::uint64_t(a) + std::uint64_t(b) * p + std::uint64_t(e) * p * p) * w]; };
    std::map<std::uint64_t, std::uint64_t> hist;
    std::uint64_t best = 0;
    for (int r1 = 0; r1 < p; ++r1)
        for (int r2 = 0; r2 < p; ++r2)
            for (int r3 = 0; r3 < p; ++r3)
                for (int r4 = 0; r4 < p; ++r4)
                    for (int r5 = 0; r5 < p; ++r5) {
                        const auto n = popcount_and(at(r1, r3, r4), at(r2, r4, r5), w);
                        ++hist[n];
                        if (r1 | r2 | r3 | r4 | r5) best = std::max(best, n);
                    }
    return finish_exact(std::move(hist), best, p);
}

namespace {

SpectralReport charsum_case3_with(int p, int cc, bool parallel) {
    if (p <= 2 || !is_prime(p)) throw DomainError("charsum needs an odd prime");
    const int C = mod(cc, p);
    if (C == 0) throw DomainError("Case 3 constant must be nonzero mod p");
    const int w = words(p);
    // h uses (r1, r3, r4, r6, r7, r8), h' uses (r2, r4, r5, r7, r8, r9)
    const auto masks = zero_masks(p, true, {C, mod(2 * C, p), C});
    const std::uint64_t p2 = std::uint64_t(p) * p, p3 = p2 * p;
    auto at = [&](int k0, int k1, int k2, int k3, int k4, int k5) {
        const std::uint64_t idx = k0 + k1 * std::uint64_t(p) + k2 * p2 + k3 * p3 + k4 * p3 * p + k5 * p3 * p2;
        return &masks[idx * w];
    };
    const auto shared = static_cast<std::int64_t>(p3);  // (r4, r7, r8)
    std::vector<std::uint64_t> counts(p2 + 1, 0);
    std::uint64_t best = 0;
    auto block = [&](std::int64_t s, std::vector<std::uint64_t>& local, std::uint64_t& local_best) {
        const int r4 = static_cast<int>(s % p), r7 = static_cast<int>(s / p % p), r8 = static_cast<int>(s / p2);
        for (int r1 = 0; r1 < p; ++r1)
            for (int r3 = 0; r3 < p; ++r3)
                for (int r6 = 0; r6 < p; ++r6) {
                    const auto* hm = at(r1, r3, r4, r6, r7, r8);
                    for (int r2 = 0; r2 < p; ++r2)
                        for (int r5 = 0; r5 < p; ++r5)
                            for (int r9 = 0; r9 < p; ++r9) {
                                const auto n = popcount_and(hm, at(r2, r4, r5, r7, r8, r9), w);
                                ++local[n];
                                if (r1 | r2 | r3 | r4 | r5 | r6 | r7 | r8 | r9) local_best = std::max(local_best, n);
                            }
                }
    };
    if (parallel) {
#pragma omp parallel
        {
            std::vector<std::uint64_t> local(p2 + 1, 0);
            std::uint64_t local_best = 0;
#pragma omp for schedule(dynamic, 1)
            for (std::int64_t s = 0; s < shared; ++s) block(s, local, local_best);
#pragma omp critical(hdx_charsum_reduce)
            {
                for (std::size_t i = 0; i < local.size(); ++i) counts[i] += local[i];
                best = std::max(best, local_best);
            }
        }
    } else {
        for (std::int64_t s = 0; s < shared; ++s) block(s, counts, best);
    }
    std::map<std::uint64_t, std::uint64_t> hist;
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i]) hist[i] = counts[i];
    return finish_exact(std::move(hist), best, p);
}

}  // namespace

SpectralReport charsum_case3(int p, int c) { return charsum_case3_with(p, c, true); }
SpectralReport charsum_case3_serial(int p, int c) { return charsum_case3_with(p, c, false); }

int case3_constant(const SpanGroup& g) {
    const auto& span = g.span();
    if (span.type() != SpanType::B2) throw DomainError("Case 3 constant needs a B2 span");
    const int p = g.field().p();
    int c11 = 0, c12 = 0;
    for (const auto& t : g.constants().terms(1, 0)) {
        if (t.i == 1 && t.j == 1) c11 = t.c;
        if (t.i == 1 && t.j == 2) c12 = t.c;
    }
    if (mod(c11, p) == 0 || mod(c12, p) == 0) throw IntegrityError("B2 commutator constants vanish mod p");
    const int c11sq = mod(c11 * c11, p);
    int inv = 1;
    while (c11sq * inv % p != 1) ++inv;
    return mod(c12 * inv, p);
}

double trickle_bound(double gamma, int d) {
    if (d < 1) throw DomainError("dimension must be positive");
    if (!(gamma >= 0) || gamma > 1.0 / d) throw DomainError("trickling down needs 0 <= gamma <= 1/d");
    return gamma / (1 - (d - 1) * gamma);
}

std::optional<double> corollary_bound(int p, int d) {
    const double den = std::sqrt(p / 2.0) - d + 1;
    if (den <= 0) return std::nullopt;
    const double v = 1 / den;
    if (v > 1) return std::nullopt;
    return v;
}

double required_p(double lambda) {
    if (!(lambda > 0)) throw DomainError("lambda must be positive");
    return 2 * (1 + lambda) * (1 + lambda) / (lambda * lambda);
}

Certificate hdx_certificate(const CosetComplex& k, const PowerOptions& opt) {
    Certificate cert;
    const int d = k.types() - 1;
    if (d != 2) throw DomainError("certificate supports 2-dimensional complexes");
    cert.connectivity = connectivity_check(k);
    cert.connected = cert.connectivity.ok();
    for (int t = 0; t < k.types(); ++t) {
        LinkSpectrum ls;
        ls.type = t;
        const auto lg = link_graph(k, {{t, 0}});
        const auto g = SparseWalkGraph::from_link(lg);
        ls.vertices = g.size();
        ls.degree = g.degree();
        if (!g.connected()) {
            cert.note = "link of type " + std::to_string(t) + " is disconnected";
            cert.links.push_back(ls);
            continue;
        }
        ls.report = second_eigenvalue(g, opt);
        cert.gamma = std::max(cert.gamma, ls.report.hi);
        cert.links.push_back(ls);
    }
    cert.corollary = corollary_bound(k.meta().p, d);
    if (cert.connected && cert.note.empty()) {
        if (cert.gamma <= 1.0 / d) {
            cert.trickle = trickle_bound(cert.gamma, d);
            cert.pass = *cert.trickle < 1;
        } else {
            cert.note = "link lambda2 exceeds 1/d; trickling down does not apply";
        }
    } else if (cert.note.empty()) {
        cert.note = "disconnected link";
    }
    if (!cert.corollary) {
        cert.note += std::string(cert.note.empty() ? "" : "; ") + "p too small for the corollary bound (needs p >= " +
                     std::to_string(static_cast<int>(std::ceil(2.0 * d * d))) + ")";
    }
    return cert;
}

}  // namespace hdx
