#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hdx/spectra.hpp"

namespace hdx {

/// I: alpha, beta simple at 150 degrees. II: short roots at 120 degrees.
enum class G2Case { I, II };
G2Case parse_g2_case(const std::string& s);
std::string to_string(G2Case c);

/// The X_{a,b} / X_a side of the squared G2 link with the displayed step maps:
///   I:  (t01+f1, t11-f0f1, t21+f0^2f1, t31-f0^3f1, t32-f1(t31+3t21f0+f0^3f1))
///   II: (t01+f1, t11-2f0f1, t21+3f0^2f1, t12+3f1(t11+f0f1))
/// with f0, f1 of degree <= min(1, m-1) and deg t_ij <= min(i+j, m-1).
/// The displayed Case II map does not give a symmetric multigraph; Amended
/// replaces its last coordinate by t12 + 3f1(t11 - f0f1), which does and whose
/// spectrum agrees with the collection-built side.
enum class G2Map { Displayed, Amended };

class G2Link {
   public:
    /// Throws DomainError for p <= 3.
    G2Link(G2Case c, const Field& f, G2Map map = G2Map::Displayed);

    G2Case which() const noexcept { return case_; }
    G2Map map() const noexcept { return map_; }
    const TableField& arith() const noexcept { return tf_; }
    int coords() const noexcept { return static_cast<int>(radix_.size()); }
    std::uint64_t vertices() const noexcept { return vertices_; }
    /// Number of (f0, f1) pairs.
    std::uint64_t degree() const noexcept { return params_.size() * params_.size(); }
    /// Codes of the degree <= min(1, m-1) polynomials.
    const std::vector<std::uint16_t>& params() const noexcept { return params_; }

    std::vector<std::uint16_t> decode(std::uint64_t v) const;
    std::uint64_t encode(const std::vector<std::uint16_t>& t) const;
    /// Neighbour for (f0, f1) given as codes. Throws IntegrityError when a
    /// coordinate leaves its degree cap.
    std::uint64_t step(std::uint64_t v, std::uint16_t f0, std::uint16_t f1) const;
    using Coords = std::array<std::uint16_t, 5>;
    Coords coords_of(std::uint64_t v) const;
    std::uint64_t step_from(const Coords& t, std::uint16_t f0, std::uint16_t f1) const;
    void for_each_neighbor(std::uint64_t v, const std::function<void(std::uint64_t)>& fn) const;

   private:
    G2Case case_;
    G2Map map_;
    TableField tf_;
    std::vector<std::uint64_t> radix_;  // p^{cap+1} per coordinate
    std::uint64_t vertices_ = 1;
    std::vector<std::uint16_t> params_;
    std::uint16_t two_, three_;
};

/// Out-arcs of every vertex as a walk graph. Throws ResourceError above
/// `max_arcs` and DomainError when the arc multiset is not symmetric.
SparseWalkGraph build_g2_graph(const G2Link& l, std::uint64_t max_arcs = 50'000'000);
/// The same side built through collection in the G2 span group instead of the
/// displayed maps: vertices are normal forms with a last, steps g x_a(f0) x_b(f1) X_a.
SparseWalkGraph g2_group_graph(G2Case c, const Field& f, std::uint64_t max_arcs = 5'000'000);
/// Implicit walk operator (y = mean over steps of x at the neighbour). OpenMP
/// kernel and serial reference.
LinearOperator g2_operator(const G2Link& l);
LinearOperator g2_operator_serial(const G2Link& l);
/// Vertices reachable from vertex 0.
std::uint64_t g2_reachable(const G2Link& l);
/// Arc multiplicities agree in both directions at `samples` random vertices
/// (every vertex when samples >= vertices()).
bool g2_symmetric(const G2Link& l, std::uint64_t samples = 64, std::uint64_t seed = 11);

enum class WalkMode { System, Trace };
/// Closed k-walks from a vertex. System: tuples (f_i, g_i) solving the equations
/// obtained by composing the step map from the origin. Trace: k-step return count
/// on the graph from `start`. Throws ResourceError over `budget` evaluations.
std::uint64_t walk_count(const G2Link& l, int k, WalkMode mode, std::uint64_t start = 0,
                         std::uint64_t budget = 2'000'000'000ULL);
/// Solutions of the Case I system in the form displayed in the further-questions
/// section (Case II coincides with the derived system).
std::uint64_t walk_count_displayed(const G2Link& l, int k, std::uint64_t budget = 2'000'000'000ULL);

/// Top nontrivial eigenvalue of the walk operator with enclosure (exploratory).
/// Throws DomainError when the map fails g2_symmetric.
SpectralReport estimate_g2_lambda2(const G2Link& l, const PowerOptions& opt = {});

struct G2WalkRow {
    int k = 0;
    std::uint64_t system = 0;     // derived system, from the origin
    std::uint64_t trace = 0;      // graph count from the origin
    std::uint64_t displayed = 0;  // system in its displayed form
    bool transitive = true;       // trace count equal from every sampled start
};

struct G2Exploration {
    G2Case which = G2Case::I;
    G2Map map = G2Map::Displayed;
    int p = 0, m = 0;
    std::uint64_t vertices = 0, degree = 0;
    bool symmetric = false;
    std::uint64_t reachable = 0;  // from the origin
    std::vector<G2WalkRow> walks;
    /// Small graphs only: closed-walk totals against the dense spectrum.
    std::optional<bool> trace_identity;
    std::optional<double> dense_lambda2;
    /// m = 1: full spectrum equal to the collection-built side within 1e-9.
    std::optional<bool> matches_group;
    std::optional<SpectralReport> lambda2;  // symmetric maps within `max_power_vertices`
    std::vector<std::string> findings;
};

struct G2ExploreOptions {
    int max_k = 2;
    int starts = 10;
    std::uint64_t seed = 5;
    std::uint64_t max_power_vertices = 400'000;
    std::uint64_t max_dense_vertices = 6000;
    PowerOptions power{};
};

G2Exploration explore_g2(G2Case c, const Field& f, G2Map map = G2Map::Displayed, const G2ExploreOptions& opt = {});

}  // namespace hdx
