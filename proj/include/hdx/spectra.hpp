#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hdx/complex.hpp"
#include "hdx/steinberg.hpp"

namespace hdx {

enum class Side { Left, Right };

/// Regular multigraph in CSR form; arcs carry multiplicities and every row
/// sums to the common degree.
class SparseWalkGraph {
   public:
    /// `arcs` lists each undirected edge in both directions (a loop once).
    static SparseWalkGraph from_arcs(std::size_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs);
    /// Left vertices first, then right; side flag 0 / 1.
    static SparseWalkGraph from_link(const LinkGraph& l);

    std::size_t size() const noexcept { return start_.size() - 1; }
    std::uint64_t degree() const noexcept { return degree_; }
    bool bipartite() const noexcept { return !side_.empty(); }
    const std::vector<std::uint8_t>& sides() const noexcept { return side_; }
    std::size_t arc_count() const noexcept { return col_.size(); }

    std::size_t row_begin(std::size_t v) const { return start_[v]; }
    std::size_t row_end(std::size_t v) const { return start_[v + 1]; }
    std::uint32_t col(std::size_t a) const { return col_[a]; }
    std::uint32_t mult(std::size_t a) const { return mult_[a]; }

    /// y = (A / degree) x
    void apply(const std::vector<double>& x, std::vector<double>& y) const;
    void apply_serial(const std::vector<double>& x, std::vector<double>& y) const;

    bool connected() const;
    std::size_t components() const;

   private:
    friend SparseWalkGraph square_one_side(const SparseWalkGraph& g, Side side);

    std::vector<std::size_t> start_;
    std::vector<std::uint32_t> col_;
    std::vector<std::uint32_t> mult_;
    std::vector<std::uint8_t> side_;
    std::uint64_t degree_ = 0;
};

/// Two-step walks restricted to one side of a bipartite graph. Throws
/// DomainError for a graph without bipartition.
SparseWalkGraph square_one_side(const SparseWalkGraph& g, Side side);

struct SpectralReport {
    double lambda2 = 0;  // second largest eigenvalue of the walk matrix
    double lo = 0;       // certified enclosure of the computed eigenvalue
    double hi = 0;
    std::string method;  // "power-iteration", "dense", "exact-charsum"
    std::size_t iterations = 0;
    /// Exact spectrum as counts over `denominator`: numerator -> multiplicity.
    std::map<std::uint64_t, std::uint64_t> exact;
    std::uint64_t denominator = 0;
};

struct PowerOptions {
    double tol = 1e-9;
    std::size_t max_iter = 5000;
    std::uint64_t seed = 12345;
    /// Operator known to be positive semidefinite (squared graphs): no shift.
    bool psd = false;
};

/// Symmetric operator on R^n given by its action.
struct LinearOperator {
    std::size_t n = 0;
    std::function<void(const std::vector<double>&, std::vector<double>&)> apply;
};

struct PowerResult {
    double value = 0;     // Rayleigh quotient
    double residual = 0;  // |Ax - value x| for unit x
    std::size_t iterations = 0;
};
/// Dominant eigenvalue of a positive semidefinite operator on the orthogonal
/// complement of `deflate` (orthonormalised internally).
PowerResult power_iteration(const LinearOperator& op, const std::vector<std::vector<double>>& deflate,
                            const PowerOptions& opt = {});

/// Power iteration with deflation of the constant vector and, for bipartite
/// graphs, the sign vector. Throws DomainError when g is disconnected.
SpectralReport second_eigenvalue(const SparseWalkGraph& g, const PowerOptions& opt = {});
/// Same through the serial matvec.
SpectralReport second_eigenvalue_serial(const SparseWalkGraph& g, const PowerOptions& opt = {});

/// All eigenvalues of the walk matrix, ascending (dense; small graphs only).
std::vector<double> dense_spectrum(const SparseWalkGraph& g);

/// One side X_{a,b} / X_a of CC(a,b)^2 as a Cayley multigraph on F_p^k, with
/// a = psi[1] and b = psi[0] of the span group: vertices are the normal-form
/// digits of the coset representatives with a placed last, and every step
/// g -> g x_a(f0) x_b(f1) X_a is a translation.
struct CayleySide {
    int p = 0;
    int dim = 0;                                  // k
    std::vector<std::vector<std::uint8_t>> steps;  // p^{2 (cap+1)} translation vectors, with repeats
    /// Per f0, a basis of the subspace {step(f0, f1)}.
    std::vector<std::vector<std::vector<std::uint8_t>>> subspaces;
    std::uint64_t vertices() const;
    std::uint64_t degree() const { return steps.size(); }
};
/// Derives the steps through collection and verifies that they do not depend
/// on the start vertex (`samples` random vertices) and are linear in f1.
/// Throws IntegrityError when either property fails.
CayleySide cayley_side(const SpanGroup& g, int samples = 16, std::uint64_t seed = 7);

/// Walk operator of the Cayley side, applied as an average of subspace projections.
LinearOperator cayley_operator(const CayleySide& c);
LinearOperator cayley_operator_serial(const CayleySide& c);
/// Steps span F_p^k.
bool cayley_connected(const CayleySide& c);
/// Power iteration for the top nontrivial eigenvalue of the Cayley side.
SpectralReport cayley_second_eigenvalue(const CayleySide& c, const PowerOptions& opt = {});
/// Every eigenvalue E_s exp(2 pi i r.s / p), by a separable DFT of the step
/// measure. Indexed by r in mixed radix.
std::vector<double> cayley_spectrum(const CayleySide& c);

/// Eigenvalues of the Case 2 Cayley graph on F_p^5: for each r, the count of
/// (c,d) with h = h' = 0, over p^2.
SpectralReport charsum_case2(int p);
/// Case 3 on F_p^9 with the quadratic terms scaled by C (nonzero mod p).
SpectralReport charsum_case3(int p, int c);
SpectralReport charsum_case3_serial(int p, int c);
/// Count of (c,d) with h = h' = 0 for one r.
std::uint64_t charsum_case2_at(int p, const std::array<int, 5>& r);
std::uint64_t charsum_case3_at(int p, int c, const std::array<int, 9>& r);

/// The constant C of the Case 3 generating set, read from the calibrated
/// table of a B2 span: C = c_{21} / c_{11}^2 for [x_b(u), x_a(t)].
int case3_constant(const SpanGroup& g);

/// gamma / (1 - (d-1) gamma). Throws DomainError unless 0 <= gamma <= 1/d.
double trickle_bound(double gamma, int d);
/// 1 / (sqrt(p/2) - d + 1); nullopt when the denominator is not positive or the value exceeds 1.
std::optional<double> corollary_bound(int p, int d);
/// 2 (1 + lambda)^2 / lambda^2.
double required_p(double lambda);

struct LinkSpectrum {
    int type = 0;
    std::size_t vertices = 0;
    std::size_t degree = 0;
    SpectralReport report;
};
struct Certificate {
    bool supported = true;  // false for G2
    std::string note;
    bool connected = false;
    ConnectivityReport connectivity;
    std::vector<LinkSpectrum> links;
    double gamma = 0;  // max link lambda2
    std::optional<double> trickle;
    std::optional<double> corollary;
    bool pass = false;
};
/// Connectivity of every link, lambda2 of one vertex link per type, and the
/// trickling-down bound (d = 2 complexes).
Certificate hdx_certificate(const CosetComplex& k, const PowerOptions& opt = {});

}  // namespace hdx
