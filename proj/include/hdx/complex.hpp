#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hdx/matgroups.hpp"
#include "hdx/steinberg.hpp"

namespace hdx {

/// A face as (type, vertex id) pairs with distinct types.
using Face = std::vector<std::pair<int, std::uint32_t>>;

/// CC(G, (H_0..H_d)) over an enumerated group: one maximal face per group
/// element g, with vertex coset_of[t][g] = g H_t in part t.
class CosetComplex {
   public:
    struct Meta {
        std::string realization;
        std::string set;
        int p = 0;
        int m = 1;
    };

    /// `subgroups[t]` holds the sorted codes of H_t. Throws ResourceError when
    /// the coset tables exceed the memory budget.
    static CosetComplex build(const GroupTable& g, std::vector<std::vector<std::uint64_t>> subgroups, Meta meta);

    const Meta& meta() const noexcept { return meta_; }
    int types() const noexcept { return static_cast<int>(coset_of_.size()); }
    std::size_t group_size() const noexcept { return group_size_; }
    std::size_t face_count() const noexcept { return face_count_; }
    std::size_t vertex_count(int t) const { return reps_[t].size(); }
    std::size_t total_vertices() const;
    std::uint32_t vertex(int t, std::size_t g) const { return coset_of_[t][g]; }
    /// Minimal code over the coset.
    std::uint64_t vertex_rep(int t, std::uint32_t v) const { return reps_[t][v]; }
    /// Group indices of the maximal faces through vertex v of type t.
    std::span<const std::uint32_t> vertex_faces(int t, std::uint32_t v) const;
    const std::vector<std::uint64_t>& subgroup(int t) const { return subgroups_[t]; }
    /// Intersection of all H_t is trivial.
    bool trivial_intersection() const noexcept { return trivial_intersection_; }
    /// Face count equals |G| and the intersection of the H_t is trivial.
    bool simply_transitive() const noexcept { return trivial_intersection_ && face_count_ == group_size_; }

    void save(const std::string& path) const;
    static CosetComplex load(const std::string& path);

   private:
    friend struct AdjointBuilder;
    void finish();

    Meta meta_;
    std::size_t group_size_ = 0;
    std::size_t face_count_ = 0;
    bool trivial_intersection_ = false;
    std::vector<std::vector<std::uint64_t>> subgroups_;
    std::vector<std::vector<std::uint32_t>> coset_of_;
    std::vector<std::vector<std::uint64_t>> reps_;
    std::vector<std::vector<std::uint32_t>> bucket_start_;
    std::vector<std::vector<std::uint32_t>> bucket_;
};

/// H_t = X_{S \ {s_t}} at m = 1.
CosetComplex build_complex(const GroupTable& g, const GeneratingSet& s, const std::string& set_name);

/// Group indices of the maximal faces containing sigma; every face for the
/// empty sigma. Throws DomainError when sigma is not a face.
std::vector<std::uint32_t> faces_through(const CosetComplex& k, const Face& sigma);

/// Bipartite multigraph, one edge per maximal face.
struct LinkGraph {
    std::size_t left = 0;
    std::size_t right = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // sorted
    std::string provenance;
    std::size_t degree() const;  // common degree, 0 when irregular
};

/// Link of a face whose type misses exactly two types t1 < t2: left vertices
/// are type t1, right type t2, relabelled in order of their ids.
LinkGraph link_graph(const CosetComplex& k, const Face& sigma);

/// CC(X_Psi, (X_{Psi \ {psi_0}}, X_{Psi \ {psi_1}})) for a two-root Psi from
/// normal forms: left vertices are cosets of X_{psi_1}, right of X_{psi_0}.
LinkGraph direct_link(const SpanGroup& g);

/// The link of the identity vertex of type t equals the direct construction
/// over X_{S \ {s_t}}, edge for edge, once the direct cosets are mapped to the
/// complex's vertices through matrices (d = 2 only).
bool link_matches_direct(const CosetComplex& k, const GroupTable& g, const GeneratingSet& s, int t);

struct ConnectivityReport {
    bool complex_connected = false;
    std::size_t links_checked = 0;
    std::size_t links_disconnected = 0;
    Face witness;  // first disconnected link found
    bool ok() const noexcept { return complex_connected && links_disconnected == 0; }
};
/// 1-skeleton of the complex and of every link of dimension >= 1.
ConnectivityReport connectivity_check(const CosetComplex& k);
ConnectivityReport connectivity_check_serial(const CosetComplex& k);

struct TypeDegree {
    int type = 0;
    std::size_t vertices = 0;
    std::size_t min_faces = 0;
    std::size_t max_faces = 0;
};
std::vector<TypeDegree> degree_stats(const CosetComplex& k);

/// X_Psi cap X_Psi' = X_{Psi cap Psi'} in the enumerated group (m = 1).
bool subgroup_intersection_check(const GroupTable& g, const std::vector<Root>& psi, const std::vector<Root>& psi2);
/// Same over F_{p^m}: streams the smaller graded box as matrices and tests
/// membership in the other by peeling root elements in height order. Counts the
/// common members against |X_{Psi cap Psi'}|. OpenMP over the first coordinate.
bool subgroup_intersection_check(const Realization& re, const Field& f, const std::vector<Root>& psi,
                                 const std::vector<Root>& psi2);
bool subgroup_intersection_check_serial(const Realization& re, const Field& f, const std::vector<Root>& psi,
                                        const std::vector<Root>& psi2);
/// Reference: enumerates both boxes as sorted matrix sets and intersects.
bool subgroup_intersection_enumerated(const Realization& re, const Field& f, const std::vector<Root>& psi,
                                      const std::vector<Root>& psi2);

struct AdjointComplex {
    CosetComplex complex;
    std::size_t center_size = 0;
    /// Elements fixing the identity vertex of every type are exactly Z.
    bool center_intersection = false;
};
/// CC(G/Z, (Z H_t / Z)). Throws IntegrityError when Z meets some H_t.
AdjointComplex adjoint_complex(const CosetComplex& k, const GroupTable& g, const CenterDesc& z);

}  // namespace hdx
