#include "hdx/complex.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>

#include "hdx/errors.hpp"
#include "hdx/matrix.hpp"

namespace hdx {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::size_t components() {
        std::size_t c = 0;
        for (std::uint32_t i = 0; i < parent.size(); ++i) c += find(i) == i;
        return c;
    }
};

std::vector<std::uint32_t> relabel(std::vector<std::uint64_t>& keys) {
    std::vector<std::uint64_t> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::uint32_t> out(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
        out[i] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
    keys = std::move(sorted);
    return out;
}

LinkGraph make_link(std::vector<std::uint64_t> lk, std::vector<std::uint64_t> rk, std::string provenance) {
    LinkGraph lg;
    auto l = relabel(lk);
    auto r = relabel(rk);
    lg.left = lk.size();
    lg.right = rk.size();
    lg.edges.resize(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) lg.edges[i] = {l[i], r[i]};
    std::sort(lg.edges.begin(), lg.edges.end());
    lg.provenance = std::move(provenance);
    return lg;
}

// True when the faces (group indices) restricted to the types outside `mask`
// span a connected skeleton.
bool link_connected(const CosetComplex& k, std::span<const std::uint32_t> faces, unsigned mask) {
    std::vector<std::uint64_t> keys;
    keys.reserve(faces.size() * k.types());
    for (auto g : faces)
        for (int t = 0; t < k.types(); ++t)
            if (!(mask >> t & 1u)) keys.push_back(std::uint64_t(t) << 32 | k.vertex(t, g));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    auto id = [&](int t, std::uint32_t g) {
        std::uint64_t key = std::uint64_t(t) << 32 | k.vertex(t, g);
        return static_cast<std::uint32_t>(std::lower_bound(keys.begin(), keys.end(), key) - keys.begin());
    };
    UnionFind uf(keys.size());
    for (auto g : faces) {
        int first = -1;
        for (int t = 0; t < k.types(); ++t) {
            if (mask >> t & 1u) continue;
            if (first < 0)
                first = t;
            else
                uf.unite(id(first, g), id(t, g));
        }
    }
    return uf.components() == 1;
}

// Faces grouped by the vertices of the types in `mask`.
struct FaceGroups {
    std::vector<std::uint32_t> members;
    std::vector<std::size_t> start;
};

FaceGroups group_faces(const CosetComplex& k, unsigned mask) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(k.group_size());
    for (std::uint32_t g = 0; g < k.group_size(); ++g) {
        std::uint64_t key = 0;
        for (int t = 0; t < k.types(); ++t)
            if (mask >> t & 1u) key = key * k.vertex_count(t) + k.vertex(t, g);
        keyed[g] = {key, g};
    }
    std::sort(keyed.begin(), keyed.end());
    FaceGroups fg;
    fg.members.resize(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first) fg.start.push_back(i);
        fg.members[i] = keyed[i].second;
    }
    fg.start.push_back(keyed.size());
    return fg;
}

Face face_of(const CosetComplex& k, std::uint32_t g, unsigned mask) {
    Face f;
    for (int t = 0; t < k.types(); ++t)
        if (mask >> t & 1u) f.emplace_back(t, k.vertex(t, g));
    return f;
}

std::vector<unsigned> link_masks(const CosetComplex& k) {
    std::vector<unsigned> masks;
    for (unsigned mask = 1; mask < (1u << k.types()); ++mask) {
        int bits = std::popcount(mask);
        if (bits <= k.types() - 2) masks.push_back(mask);
    }
    std::stable_sort(masks.begin(), masks.end(),
                     [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
    return masks;
}

bool skeleton_connected(const CosetComplex& k) {
    std::vector<std::uint32_t> offset(k.types() + 1, 0);
    for (int t = 0; t < k.types(); ++t) offset[t + 1] = offset[t] + static_cast<std::uint32_t>(k.vertex_count(t));
    UnionFind uf(offset.back());
    for (std::uint32_t g = 0; g < k.group_size(); ++g)
        for (int t = 1; t < k.types(); ++t) uf.unite(offset[0] + k.vertex(0, g), offset[t] + k.vertex(t, g));
    return uf.components() == 1;
}

Mat word_matrix(const Realization& re, const Field& f, const Word& w) {
    Mat m = identity_matrix(f, re.n());
    for (const auto& e : w) m = mat_mul(f, m, re.root_matrix(f, e.root, e.coeff));
    return m;
}

// Cosets of X_{psi_1} (left) and X_{psi_0} (right) for every box element,
// keyed by the normal form with the dropped root placed last.
void direct_keys(const SpanGroup& g, const std::function<void(const SpanGroup::Coeffs&, std::uint64_t, std::uint64_t)>& fn) {
    const auto& span = g.span();
    if (span.psi().size() != 2) throw DomainError("direct link needs two roots");
    const int i0 = span.index_of(span.psi()[0]);
    const int i1 = span.index_of(span.psi()[1]);
    auto order_last = [&](int last) {
        std::vector<int> ord;
        for (int k : span.psi_plus())
            if (k != last) ord.push_back(k);
        ord.push_back(last);
        return ord;
    };
    const auto ord_l = order_last(i1), ord_r = order_last(i0);
    const std::uint64_t q = g.field().order();
    auto key = [&](const std::vector<FieldElem>& s) {
        std::uint64_t k = 0;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) k = k * q + g.field().encode(s[i]);
        return k;
    };
    for_each_graded_element(g, [&](const SpanGroup::Coeffs& c) {
        fn(c, key(g.to_order(c, ord_l)), key(g.to_order(c, ord_r)));
    });
}

using MatKey = std::array<std::uint64_t, 3>;

std::vector<MatKey> box_matrices(const Realization& re, const Field& f, const std::vector<Root>& psi) {
    int bits = 1;
    while ((std::uint64_t(1) << bits) < f.order()) ++bits;
    const int n = re.n();
    if (n * n * bits > 192) throw ResourceError("matrix key too wide");
    auto pack = [&](const Mat& m) {
        MatKey k{};
        int pos = 0;
        for (int i = 0; i < n * n; ++i, pos += bits) {
            std::uint64_t v = f.encode(m.e[i]);
            k[pos / 64] |= v << (pos % 64);
            if (pos % 64 + bits > 64) k[pos / 64 + 1] |= v >> (64 - pos % 64);
        }
        return k;
    };
    std::vector<MatKey> out;
    if (psi.empty()) {
        out.push_back(pack(identity_matrix(f, n)));
        return out;
    }
    SpanGroup sg(re.phi(), psi, f, &re);
    out.reserve(sg.graded_size());
    for_each_graded_element(sg, [&](const SpanGroup::Coeffs& c) { out.push_back(pack(word_matrix(re, f, sg.to_word(c)))); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Root> common_roots(const std::vector<Root>& a, const std::vector<Root>& b) {
    std::vector<Root> out;
    for (const auto& r : a)
        if (std::find(b.begin(), b.end(), r) != b.end()) out.push_back(r);
    return out;
}

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw IntegrityError("truncated complex file");
    return v;
}
template <class T>
void put_vec(std::ostream& os, const std::vector<T>& v) {
    put<std::uint64_t>(os, v.size());
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}
template <class T>
std::vector<T> get_vec(std::istream& is, std::uint64_t limit) {
    auto n = get<std::uint64_t>(is);
    if (n > limit) throw IntegrityError("corrupt complex file");
    std::vector<T> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    if (!is) throw IntegrityError("truncated complex file");
    return v;
}
void put_str(std::ostream& os, const std::string& s) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}
std::string get_str(std::istream& is) {
    auto n = get<std::uint32_t>(is);
    if (n > 4096) throw IntegrityError("corrupt complex file");
    std::string s(n, '\0');
    is.read(s.data(), n);
    if (!is) throw IntegrityError("truncated complex file");
    return s;
}

constexpr char kMagic[8] = {'H', 'D', 'X', 'C', 'P', 'L', 'X', '1'};

}  // namespace

std::size_t CosetComplex::total_vertices() const {
    std::size_t n = 0;
    for (const auto& r : reps_) n += r.size();
    return n;
}

std::span<const std::uint32_t> CosetComplex::vertex_faces(int t, std::uint32_t v) const {
    const auto& s = bucket_start_[t];
    return {bucket_[t].data() + s[v], s[v + 1] - s[v]};
}

void CosetComplex::finish() {
    const int T = types();
    bucket_start_.assign(T, {});
    bucket_.assign(T, {});
    for (int t = 0; t < T; ++t) {
        auto& start = bucket_start_[t];
        start.assign(reps_[t].size() + 1, 0);
        for (auto v : coset_of_[t]) ++start[v + 1];
        std::partial_sum(start.begin(), start.end(), start.begin());
        auto fill = start;
        bucket_[t].resize(group_size_);
        for (std::uint32_t g = 0; g < group_size_; ++g) bucket_[t][fill[coset_of_[t][g]]++] = g;
    }
    unsigned __int128 span = 1;
    for (int t = 0; t < T; ++t) span *= std::max<std::size_t>(reps_[t].size(), 1);
    if (span >> 64) throw ResourceError("face keys exceed 64 bits");
    std::vector<std::uint64_t> keys(group_size_);
    for (std::size_t g = 0; g < group_size_; ++g) {
        std::uint64_t key = 0;
        for (int t = 0; t < T; ++t) key = key * reps_[t].size() + coset_of_[t][g];
        keys[g] = key;
    }
    std::sort(keys.begin(), keys.end());
    face_count_ = static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

CosetComplex CosetComplex::build(const GroupTable& g, std::vector<std::vector<std::uint64_t>> subgroups, Meta meta) {
    const std::size_t n = g.size();
    const int T = static_cast<int>(subgroups.size());
    if (T < 1) throw DomainError("complex needs at least one type");
    if (n >= kUnset) throw ResourceError("group too large for 32-bit indices");
    const std::uint64_t bytes = std::uint64_t(T) * n * 12 + n * 8;
    if (auto b = default_budget(); b.max_bytes && bytes > b.max_bytes)
        throw ResourceError("coset tables need " + std::to_string(bytes >> 20) + " MB, over the budget");

    CosetComplex k;
    k.meta_ = std::move(meta);
    k.group_size_ = n;
    const auto& ops = g.ops();
    for (auto& s : subgroups) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    k.coset_of_.assign(T, std::vector<std::uint32_t>(n, kUnset));
    k.reps_.assign(T, {});
    for (int t = 0; t < T; ++t) {
        std::vector<SmallMat> hs;
        for (auto c : subgroups[t]) hs.push_back(ops.decode(c));
        auto& cos = k.coset_of_[t];
        for (std::size_t gi = 0; gi < n; ++gi) {
            if (cos[gi] != kUnset) continue;
            const auto id = static_cast<std::uint32_t>(k.reps_[t].size());
            const SmallMat x = g.element(gi);
            std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
            for (const auto& h : hs) {
                const std::uint64_t c = ops.encode(ops.mul(x, h));
                const auto idx = g.index_of_code(c);
                if (idx < 0) throw IntegrityError("subgroup element outside the group");
                cos[idx] = id;
                best = std::min(best, c);
            }
            k.reps_[t].push_back(best);
        }
    }
    std::vector<std::uint64_t> inter = subgroups[0];
    for (int t = 1; t < T; ++t) {
        std::vector<std::uint64_t> next;
        std::set_intersection(inter.begin(), inter.end(), subgroups[t].begin(), subgroups[t].end(),
                              std::back_inserter(next));
        inter = std::move(next);
    }
    k.trivial_intersection_ = inter.size() == 1 && inter[0] == ops.encode(ops.identity());
    k.subgroups_ = std::move(subgroups);
    k.finish();
    return k;
}

void CosetComplex::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DomainError("cannot write " + path);
    os.write(kMagic, sizeof kMagic);
    put_str(os, meta_.realization);
    put_str(os, meta_.set);
    put<std::int32_t>(os, meta_.p);
    put<std::int32_t>(os, meta_.m);
    put<std::uint64_t>(os, group_size_);
    put<std::uint8_t>(os, trivial_intersection_);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(types()));
    for (int t = 0; t < types(); ++t) {
        put_vec(os, subgroups_[t]);
        put_vec(os, reps_[t]);
        put_vec(os, coset_of_[t]);
    }
    if (!os) throw ResourceError("write failed: " + path);
}

CosetComplex CosetComplex::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DomainError("cannot read " + path);
    char magic[sizeof kMagic];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw IntegrityError("not a complex file: " + path);
    CosetComplex k;
    k.meta_.realization = get_str(is);
    k.meta_.set = get_str(is);
    k.meta_.p = get<std::int32_t>(is);
    k.meta_.m = get<std::int32_t>(is);
    k.group_size_ = get<std::uint64_t>(is);
    k.trivial_intersection_ = get<std::uint8_t>(is) != 0;
    const auto T = get<std::uint32_t>(is);
    if (T == 0 || T > 16 || k.group_size_ >= kUnset) throw IntegrityError("corrupt complex file");
    for (std::uint32_t t = 0; t < T; ++t) {
        k.subgroups_.push_back(get_vec<std::uint64_t>(is, k.group_size_));
        k.reps_.push_back(get_vec<std::uint64_t>(is, k.group_size_));
        k.coset_of_.push_back(get_vec<std::uint32_t>(is, k.group_size_));
        if (k.coset_of_.back().size() != k.group_size_) throw IntegrityError("corrupt complex file");
        for (auto v : k.coset_of_.back())
            if (v >= k.reps_.back().size()) throw IntegrityError("corrupt complex file");
    }
    k.finish();
    return k;
}

CosetComplex build_complex(const GroupTable& g, const GeneratingSet& s, const std::string& set_name) {
    std::vector<std::vector<std::uint64_t>> subs;
    for (std::size_t t = 0; t < s.size(); ++t) subs.push_back(root_subgroup(g, s.without(t)));
    return CosetComplex::build(g, std::move(subs), {g.realization().name(), set_name, g.field().p(), 1});
}

std::vector<std::uint32_t> faces_through(const CosetComplex& k, const Face& sigma) {
    std::vector<std::uint32_t> out;
    if (sigma.empty()) {
        out.resize(k.group_size());
        std::iota(out.begin(), out.end(), 0u);
        return out;
    }
    unsigned seen = 0;
    for (auto [t, v] : sigma) {
        if (t < 0 || t >= k.types() || (seen >> t & 1u)) throw DomainError("face types must be distinct and valid");
        if (v >= k.vertex_count(t)) throw DomainError("vertex id out of range");
        seen |= 1u << t;
    }
    for (auto g : k.vertex_faces(sigma[0].first, sigma[0].second)) {
        bool all = true;
        for (std::size_t i = 1; i < sigma.size() && all; ++i) all = k.vertex(sigma[i].first, g) == sigma[i].second;
        if (all) out.push_back(g);
    }
    if (out.empty()) throw DomainError("not a face of the complex");
    return out;
}

std::size_t LinkGraph::degree() const {
    std::vector<std::size_t> dl(left, 0), dr(right, 0);
    for (auto [a, b] : edges) {
        ++dl[a];
        ++dr[b];
    }
    if (dl.empty() || dr.empty()) return 0;
    const std::size_t d = dl[0];
    for (auto x : dl)
        if (x != d) return 0;
    for (auto x : dr)
        if (x != d) return 0;
    return d;
}

LinkGraph link_graph(const CosetComplex& k, const Face& sigma) {
    unsigned mask = 0;
    for (auto [t, v] : sigma)
        if (t >= 0 && t < k.types()) mask |= 1u << t;
    std::vector<int> rest;
    for (int t = 0; t < k.types(); ++t)
        if (!(mask >> t & 1u)) rest.push_back(t);
    if (rest.size() != 2) throw DomainError("link graph needs a face missing exactly two types");
    const auto faces = faces_through(k, sigma);
    std::vector<std::uint64_t> lk, rk;
    for (auto g : faces) {
        lk.push_back(k.vertex(rest[0], g));
        rk.push_back(k.vertex(rest[1], g));
    }
    return make_link(std::move(lk), std::move(rk), "extracted");
}

LinkGraph direct_link(const SpanGroup& g) {
    std::vector<std::uint64_t> lk, rk;
    direct_keys(g, [&](const SpanGroup::Coeffs&, std::uint64_t l, std::uint64_t r) {
        lk.push_back(l);
        rk.push_back(r);
    });
    return make_link(std::move(lk), std::move(rk), "direct");
}

bool link_matches_direct(const CosetComplex& k, const GroupTable& g, const GeneratingSet& s, int t) {
    if (k.types() != 3 || s.size() != 3) throw DomainError("link comparison needs a 2-dimensional complex");
    std::vector<int> rest;
    for (int u = 0; u < 3; ++u)
        if (u != t) rest.push_back(u);
    const auto& re = g.realization();
    const auto id = static_cast<std::uint32_t>(g.index_of(g.ops().identity()));
    const Face sigma = {{t, k.vertex(t, id)}};
    const LinkGraph extracted = link_graph(k, sigma);

    SpanGroup sg(re.phi(), s.without(static_cast<std::size_t>(t)), g.field(), &re);
    std::vector<std::pair<std::uint64_t, std::uint32_t>> lmap, rmap;
    std::vector<std::uint64_t> lk, rk;
    bool inside = true;
    direct_keys(sg, [&](const SpanGroup::Coeffs& c, std::uint64_t l, std::uint64_t r) {
        const auto idx = g.index_of(g.ops().from_mat(word_matrix(re, g.field(), sg.to_word(c))));
        if (idx < 0 || k.vertex(t, static_cast<std::size_t>(idx)) != sigma[0].second) {
            inside = false;
            return;
        }
        const auto vl = k.vertex(rest[0], static_cast<std::size_t>(idx));
        const auto vr = k.vertex(rest[1], static_cast<std::size_t>(idx));
        lmap.emplace_back(l, vl);
        rmap.emplace_back(r, vr);
        lk.push_back(vl);
        rk.push_back(vr);
    });
    if (!inside) return false;
    // coset labels of the two constructions must correspond one to one
    auto bijective = [](std::vector<std::pair<std::uint64_t, std::uint32_t>> m) {
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
        for (std::size_t i = 1; i < m.size(); ++i)
            if (m[i].first == m[i - 1].first) return false;
        std::vector<std::uint32_t> img;
        for (auto& e : m) img.push_back(e.second);
        std::sort(img.begin(), img.end());
        return std::adjacent_find(img.begin(), img.end()) == img.end();
    };
    if (!bijective(lmap) || !bijective(rmap)) return false;
    const LinkGraph mapped = make_link(std::move(lk), std::move(rk), "direct");
    return mapped.left == extracted.left && mapped.right == extracted.right && mapped.edges == extracted.edges;
}

ConnectivityReport connectivity_check_serial(const CosetComplex& k) {
    ConnectivityReport rep;
    rep.complex_connected = skeleton_connected(k);
    for (unsigned mask : link_masks(k)) {
        if (std::popcount(mask) == 1) {
            const int t = std::countr_zero(mask);
            for (std::uint32_t v = 0; v < k.vertex_count(t); ++v) {
                ++rep.links_checked;
                if (!link_connected(k, k.vertex_faces(t, v), mask) && rep.links_disconnected++ == 0)
                    rep.witness = {{t, v}};
            }
            continue;
        }
        const auto fg = group_faces(k, mask);
        for (std::size_t i = 0; i + 1 < fg.start.size(); ++i) {
            std::span<const std::uint32_t> faces(fg.members.data() + fg.start[i], fg.start[i + 1] - fg.start[i]);
            ++rep.links_checked;
            if (!link_connected(k, faces, mask) && rep.links_disconnected++ == 0) rep.witness = face_of(k, faces[0], mask);
        }
    }
    return rep;
}

ConnectivityReport connectivity_check(const CosetComplex& k) {
    ConnectivityReport rep;
    rep.complex_connected = skeleton_connected(k);
    std::size_t witness_at = std::numeric_limits<std::size_t>::max();
    std::size_t base = 0;
    for (unsigned mask : link_masks(k)) {
        FaceGroups fg;
        const int t = std::countr_zero(mask);
        const bool single = std::popcount(mask) == 1;
        if (!single) fg = group_faces(k, mask);
        const auto count = static_cast<std::int64_t>(single ? k.vertex_count(t) : fg.start.size() - 1);
        std::size_t bad = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : bad)
        for (std::int64_t i = 0; i < count; ++i) {
            std::span<const std::uint32_t> faces =
                single ? k.vertex_faces(t, static_cast<std::uint32_t>(i))
                       : std::span<const std::uint32_t>(fg.members.data() + fg.start[i], fg.start[i + 1] - fg.start[i]);
            if (link_connected(k, faces, mask)) continue;
            ++bad;
#pragma omp critical(hdx_witness)
            if (base + static_cast<std::size_t>(i) < witness_at) {
                witness_at = base + static_cast<std::size_t>(i);
                rep.witness = face_of(k, faces[0], mask);
            }
        }
        rep.links_checked += static_cast<std::size_t>(count);
        rep.links_disconnected += bad;
        base += static_cast<std::size_t>(count);
    }
    return rep;
}

std::vector<TypeDegree> degree_stats(const CosetComplex& k) {
    std::vector<TypeDegree> out;
    for (int t = 0; t < k.types(); ++t) {
        TypeDegree d;
        d.type = t;
        d.vertices = k.vertex_count(t);
        d.min_faces = std::numeric_limits<std::size_t>::max();
        for (std::uint32_t v = 0; v < d.vertices; ++v) {
            const auto n = k.vertex_faces(t, v).size();
            d.min_faces = std::min(d.min_faces, n);
            d.max_faces = std::max(d.max_faces, n);
        }
        if (d.vertices == 0) d.min_faces = 0;
        out.push_back(d);
    }
    return out;
}

bool subgroup_intersection_check(const GroupTable& g, const std::vector<Root>& psi, const std::vector<Root>& psi2) {
    auto x1 = root_subgroup(g, psi), x2 = root_subgroup(g, psi2), x12 = root_subgroup(g, common_roots(psi, psi2));
    std::vector<std::uint64_t> inter;
    std::set_intersection(x1.begin(), x1.end(), x2.begin(), x2.end(), std::back_inserter(inter));
    return inter == x12;
}

bool subgroup_intersection_enumerated(const Realization& re, const Field& f, const std::vector<Root>& psi,
                                      const std::vector<Root>& psi2) {
    auto x1 = box_matrices(re, f, psi), x2 = box_matrices(re, f, psi2);
    auto x12 = box_matrices(re, f, common_roots(psi, psi2));
    std::vector<MatKey> inter;
    std::set_intersection(x1.begin(), x1.end(), x2.begin(), x2.end(), std::back_inserter(inter));
    return inter == x12;
}

namespace {

// x_g(t) = I + t X_g on element codes, with the entry that reads t back off a
// product ordered by height.
struct UnipotentOp {
    struct Entry {
        int i, j;
        std::uint16_t c;
    };
    std::vector<Entry> nz;
    int si = 0, sj = 0;
    std::uint16_t sinv = 0;
    std::uint32_t limit = 1;
    int height = 0;
};

constexpr int kMaxN = 5;
using CodeMat = std::array<std::uint16_t, kMaxN * kMaxN>;

std::vector<UnipotentOp> unipotent_ops(const Realization& re, const TableField& tf, const std::vector<Root>& psi) {
    std::vector<UnipotentOp> ops;
    if (psi.empty()) return ops;
    const Field& f = tf.field();
    const int n = re.n();
    const FieldElem probe = f.m() > 1 ? f.decode(static_cast<std::uint64_t>(f.p())) : f.from_int(2);
    const auto pc = static_cast<std::uint16_t>(f.encode(probe));
    for (const auto& g : positive_closure(re.phi(), psi)) {
        UnipotentOp op;
        const Mat one = re.root_matrix(f, g, f.one());
        const Mat at = re.root_matrix(f, g, probe);
        std::vector<int> reads(n, 0), writes(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto c = static_cast<std::uint16_t>(f.encode(one.at(i, j)));
                if (i == j) c = tf.add(c, tf.neg(1));
                const auto want = tf.add(i == j ? 1 : 0, tf.mul(pc, c));
                if (f.encode(at.at(i, j)) != want) throw IntegrityError("root matrix not linear in t");
                if (c) {
                    op.nz.push_back({i, j, c});
                    reads[j] = writes[i] = 1;
                }
            }
        if (op.nz.empty()) throw IntegrityError("trivial root matrix");
        for (int i = 0; i < n; ++i)
            if (reads[i] && writes[i]) throw IntegrityError("root matrix is not square-zero");
        op.si = op.nz[0].i;
        op.sj = op.nz[0].j;
        for (int x = 1; x < tf.q(); ++x)
            if (tf.mul(op.nz[0].c, static_cast<std::uint16_t>(x)) == 1) op.sinv = static_cast<std::uint16_t>(x);
        op.height = height_over(g, psi);
        const int cap = std::min(op.height, f.m() - 1);
        for (int d = 0; d <= cap; ++d) op.limit *= static_cast<std::uint32_t>(f.p());
        ops.push_back(std::move(op));
    }
    std::stable_sort(ops.begin(), ops.end(), [](const auto& a, const auto& b) { return a.height < b.height; });
    return ops;
}

std::uint64_t box_size(const std::vector<UnipotentOp>& ops) {
    std::uint64_t s = 1;
    for (const auto& o : ops) s *= o.limit;
    return s;
}

bool is_identity_code(const CodeMat& m, int n) {
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m[i * kMaxN + j] != (i == j ? 1 : 0)) return false;
    return true;
}

// Strips x_g(t_g) off the left in height order; member when every t_g fits its
// box and nothing is left over.
bool box_member(CodeMat r, int n, const TableField& tf, const std::vector<UnipotentOp>& ops) {
    for (const auto& o : ops) {
        const auto t = tf.mul(r[o.si * kMaxN + o.sj], o.sinv);
        if (t >= o.limit) return false;
        if (!t) continue;
        for (const auto& e : o.nz) {
            const auto s = tf.neg(tf.mul(t, e.c));
            for (int k = 0; k < n; ++k) r[e.i * kMaxN + k] = tf.add(r[e.i * kMaxN + k], tf.mul(s, r[e.j * kMaxN + k]));
        }
    }
    return is_identity_code(r, n);
}

struct IntersectionTally {
    std::uint64_t members = 0;
    std::uint64_t stray = 0;
};

// Elements of the box whose first coordinate is `t0`.
IntersectionTally scan_slice(std::uint32_t t0, int n, const TableField& tf, const std::vector<UnipotentOp>& a,
                             const std::vector<UnipotentOp>& b, const std::vector<UnipotentOp>& ab) {
    IntersectionTally out;
    std::vector<std::uint32_t> t(a.size(), 0);
    t[0] = t0;
    for (;;) {
        CodeMat m{};
        for (int i = 0; i < n; ++i) m[i * kMaxN + i] = 1;
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (!t[k]) continue;
            for (const auto& e : a[k].nz) {
                const auto s = tf.mul(static_cast<std::uint16_t>(t[k]), e.c);
                for (int r = 0; r < n; ++r) m[r * kMaxN + e.j] = tf.add(m[r * kMaxN + e.j], tf.mul(s, m[r * kMaxN + e.i]));
            }
        }
        if (box_member(m, n, tf, b)) {
            ++out.members;
            if (!box_member(m, n, tf, ab)) ++out.stray;
        }
        std::size_t k = 1;
        while (k < a.size() && ++t[k] == a[k].limit) t[k++] = 0;
        if (k == a.size()) break;
    }
    return out;
}

bool intersection_scan(const Realization& re, const Field& f, const std::vector<Root>& psi, const std::vector<Root>& psi2,
                       bool parallel) {
    if (re.n() > kMaxN) throw DomainError("matrix size above 5");
    const TableField tf(f);
    auto a = unipotent_ops(re, tf, psi), b = unipotent_ops(re, tf, psi2);
    const auto ab = unipotent_ops(re, tf, common_roots(psi, psi2));
    if (box_size(b) < box_size(a)) std::swap(a, b);
    const int n = re.n();
    if (a.empty()) {
        CodeMat id{};
        for (int i = 0; i < n; ++i) id[i * kMaxN + i] = 1;
        return box_member(id, n, tf, b) && box_size(ab) == 1;
    }
    std::uint64_t members = 0, stray = 0;
    const auto slices = static_cast<long>(a[0].limit);
#pragma omp parallel for schedule(dynamic) reduction(+ : members, stray) if (parallel)
    for (long t0 = 0; t0 < slices; ++t0) {
        const auto s = scan_slice(static_cast<std::uint32_t>(t0), n, tf, a, b, ab);
        members += s.members;
        stray += s.stray;
    }
    return stray == 0 && members == box_size(ab);
}

}  // namespace

bool subgroup_intersection_check(const Realization& re, const Field& f, const std::vector<Root>& psi,
                                 const std::vector<Root>& psi2) {
    return intersection_scan(re, f, psi, psi2, true);
}

bool subgroup_intersection_check_serial(const Realization& re, const Field& f, const std::vector<Root>& psi,
                                        const std::vector<Root>& psi2) {
    return intersection_scan(re, f, psi, psi2, false);
}

struct AdjointBuilder {
    static AdjointComplex run(const CosetComplex& k, const GroupTable& g, const CenterDesc& z) {
        const auto& ops = g.ops();
        const std::uint64_t id_code = ops.encode(ops.identity());
        for (int t = 0; t < k.types(); ++t)
            for (const auto& e : z.elements) {
                const auto c = ops.encode(e);
                if (c != id_code && std::binary_search(k.subgroup(t).begin(), k.subgroup(t).end(), c))
                    throw IntegrityError("centre meets H_" + std::to_string(t));
            }
        AdjointComplex out;
        out.center_size = z.elements.size();
        CosetComplex& a = out.complex;
        a.meta_ = k.meta_;
        a.meta_.realization += "/Z";
        const int T = k.types();
        // universal vertex -> adjoint vertex
        std::vector<std::vector<std::uint32_t>> adj(T);
        a.reps_.assign(T, {});
        for (int t = 0; t < T; ++t) {
            std::vector<std::uint64_t> keys(k.vertex_count(t));
            for (std::uint32_t v = 0; v < keys.size(); ++v) {
                const SmallMat x = ops.decode(k.vertex_rep(t, v));
                std::uint32_t best = v;
                for (const auto& e : z.elements) {
                    const auto idx = g.index_of(ops.mul(x, e));
                    if (idx < 0) throw IntegrityError("centre element outside the group");
                    best = std::min(best, k.vertex(t, static_cast<std::size_t>(idx)));
                }
                keys[v] = best;
            }
            adj[t] = relabel(keys);
            a.reps_[t].assign(keys.size(), std::numeric_limits<std::uint64_t>::max());
            for (std::uint32_t v = 0; v < adj[t].size(); ++v)
                a.reps_[t][adj[t][v]] = std::min(a.reps_[t][adj[t][v]], k.vertex_rep(t, v));
        }
        a.coset_of_.assign(T, {});
        for (std::size_t gi = 0; gi < k.group_size(); ++gi) {
            const SmallMat x = g.element(gi);
            if (adjoint_canonical(g, z, x) != g.code(gi)) continue;
            for (int t = 0; t < T; ++t) a.coset_of_[t].push_back(adj[t][k.vertex(t, gi)]);
        }
        a.group_size_ = a.coset_of_[0].size();
        a.subgroups_.assign(T, {});
        for (int t = 0; t < T; ++t) {
            for (auto c : k.subgroup(t)) a.subgroups_[t].push_back(adjoint_canonical(g, z, ops.decode(c)));
            std::sort(a.subgroups_[t].begin(), a.subgroups_[t].end());
        }
        std::vector<std::uint64_t> inter = a.subgroups_[0];
        for (int t = 1; t < T; ++t) {
            std::vector<std::uint64_t> next;
            std::set_intersection(inter.begin(), inter.end(), a.subgroups_[t].begin(), a.subgroups_[t].end(),
                                  std::back_inserter(next));
            inter = std::move(next);
        }
        a.trivial_intersection_ = inter.size() == 1 && inter[0] == id_code;
        a.finish();

        // elements of G fixing every identity vertex of the adjoint complex
        const auto id = static_cast<std::size_t>(g.index_of(ops.identity()));
        std::vector<std::uint64_t> fixers;
        for (std::size_t gi = 0; gi < k.group_size(); ++gi) {
            bool all = true;
            for (int t = 0; t < T && all; ++t) all = adj[t][k.vertex(t, gi)] == adj[t][k.vertex(t, id)];
            if (all) fixers.push_back(g.code(gi));
        }
        std::vector<std::uint64_t> zc;
        for (const auto& e : z.elements) zc.push_back(ops.encode(e));
        std::sort(zc.begin(), zc.end());
        std::sort(fixers.begin(), fixers.end());
        out.center_intersection = fixers == zc;
        return out;
    }
};

AdjointComplex adjoint_complex(const CosetComplex& k, const GroupTable& g, const CenterDesc& z) {
    return AdjointBuilder::run(k, g, z);
}

}  // namespace hdx
