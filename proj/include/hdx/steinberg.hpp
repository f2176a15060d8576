#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hdx/field.hpp"
#include "hdx/rank2.hpp"
#include "hdx/realization.hpp"

namespace hdx {

struct RootElem {
    Root root;
    FieldElem coeff;
};
using Word = std::vector<RootElem>;

/// One factor of [x_g(t), x_d(u)] = prod x_{i g + j d}(c t^i u^j).
struct CommTerm {
    int i;
    int j;
    int target;  // index into the span's positive system
    int c;
};

/// Commutator constants for every pair of the span's positive system, stored for
/// the orientation used by collection: [x_k(t), x_d(u)] with k later than d.
class StructureConstantTable {
   public:
    /// A2 and B2 constants are read off matrices: the given realization when it
    /// realizes `phi`, otherwise the SL3 / Sp4 model through local coordinates.
    /// G2 uses the fixed rank-2 table. Throws IntegrityError when no assignment
    /// in {+-1,+-2,+-3} reproduces the matrices.
    static StructureConstantTable calibrate(const RootSystem& phi, const Rank2Span& span,
                                            const Realization* actual = nullptr);

    const std::vector<CommTerm>& terms(int later, int earlier) const {
        return table_[static_cast<std::size_t>(later) * size_ + earlier];
    }
    const std::string& source() const noexcept { return source_; }

   private:
    std::size_t size_ = 0;
    std::vector<std::vector<CommTerm>> table_;
    std::string source_;
};

/// The graded unipotent group X_Psi for a rank <= 2 span, computed by collection.
/// Elements are coefficient vectors over the span's positive system P in its
/// internal order: g = prod_k x_{P[k]}(g[k]).
class SpanGroup {
   public:
    using Coeffs = std::vector<FieldElem>;

    /// The graded box bounds deg t_g by min(i w1 + j w2, m-1) for g = i psi1 + j psi2;
    /// the default weights give ht_Psi.
    SpanGroup(const RootSystem& phi, std::vector<Root> psi, const Field& f, const Realization* actual = nullptr,
              std::pair<int, int> weights = {1, 1});

    const Rank2Span& span() const noexcept { return span_; }
    const Field& field() const noexcept { return field_; }
    const StructureConstantTable& constants() const noexcept { return table_; }
    std::size_t size() const noexcept { return span_.size(); }

    Coeffs identity() const { return Coeffs(span_.size(), field_.zero()); }
    /// g := g * x_{P[k]}(u)
    void mul_letter(Coeffs& g, int k, const FieldElem& u) const;
    /// Throws DomainError for a letter outside P.
    Coeffs collect(const Word& w) const;
    Coeffs multiply(const Coeffs& g, const Coeffs& h) const;
    Coeffs inverse(const Coeffs& g) const;
    Word to_word(const Coeffs& g) const;

    /// Coefficients s (aligned with `order`, indices into P) such that
    /// prod over order of x(s) equals g. `order` must list every index where
    /// g can be nonzero, closed under commutators.
    std::vector<FieldElem> to_order(const Coeffs& g, const std::vector<int>& order) const;
    Coeffs from_order(const std::vector<FieldElem>& s, const std::vector<int>& order) const;

    /// Degree bound of the graded box for index k of P (-1 outside Psi^+).
    int degree_bound(int k) const { return digits_[k] - 1; }
    /// Degree bound min(ht_Psi, m-1) holds for every Psi^+ coordinate and all
    /// other coordinates vanish.
    bool well_bounded(const Coeffs& g) const;

    /// Dense index of a well-bounded element (mixed radix over Psi^+ digits).
    std::uint64_t encode(const Coeffs& g) const;
    Coeffs decode(std::uint64_t code) const;
    /// prod over Psi^+ of p^{bound+1}
    std::uint64_t graded_size() const;

   private:
    Rank2Span span_;
    const Field& field_;
    StructureConstantTable table_;
    std::vector<int> digits_;  // per P index: number of base-p digits in the graded box
};

/// [a, b] = a^-1 b^-1 a b as prod x_{i a + j b}(C t^i u^j) over the mixed terms
/// of the cone, ordered by i+j. Empty when no mixed term occurs.
Word commutator(const RootSystem& phi, const RootElem& a, const RootElem& b, const Field& f,
                const Realization* actual = nullptr);

struct ConstantEntry {
    int i;
    int j;
    int c;
};
/// C^{a,b}_{ij} in {+-1,+-2,+-3} for the mixed cone terms.
std::vector<ConstantEntry> commutator_constants(const RootSystem& phi, const Root& a, const Root& b,
                                                const Realization* actual = nullptr);

/// Every element of X_Psi with deg(t_g) <= min(ht_Psi(g), m-1), as internal coefficient vectors.
void for_each_graded_element(const SpanGroup& g, const std::function<void(const SpanGroup::Coeffs&)>& fn);

/// Closure of a generator set under multiplication, restricted to the graded
/// box of X_Psi. Returns the element count; `escaped` is set when a product
/// leaves the graded box (the subgroup is then larger than X_Psi's grading).
struct ClosureResult {
    std::uint64_t size = 0;
    bool escaped = false;
    std::vector<std::uint64_t> codes;  // sorted, filled when keep_codes
};
ClosureResult closure(const SpanGroup& g, const std::vector<SpanGroup::Coeffs>& generators, bool keep_codes = false);

/// |<generators>| = p^log_p_order, found by sifting into a polycyclic sequence
/// along the height filtration (no enumeration). `escaped` as for closure.
struct PcgsResult {
    int log_p_order = 0;
    bool escaped = false;
};
PcgsResult generated_subgroup_order(const SpanGroup& g, const std::vector<SpanGroup::Coeffs>& generators);

/// Generators x_a(x^k), k <= d1, and x_b(x^k), k <= d2 (degree-capped), of
/// the pair <X_{a,d1}, X_{b,d2}> for the two roots of the span.
std::vector<SpanGroup::Coeffs> graded_generators(const SpanGroup& g, int d1, int d2);

/// Rank of span{f^i g^j : deg f <= d1, deg g <= d2} over F_p equals d+1 with
/// d = i d1 + j d2. Requires max(i,j) < p and d <= m-1.
bool powerspan_check(int i, int j, int d1, int d2, const Field& f);
/// The rank itself.
int powerspan_rank(int i, int j, int d1, int d2, const Field& f);

}  // namespace hdx
