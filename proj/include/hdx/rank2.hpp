#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hdx/rootsys.hpp"

namespace hdx {

enum class SpanType { A1, A1xA1, A2, B2, G2 };
std::string to_string(SpanType t);

/// The rank <= 2 subsystem Phi' = Phi cap span(Psi) for one root or an
/// independent pair, with a positive system P containing the N-cone of Psi.
///
/// P has local simple roots a, b (a short when lengths differ) and is kept in
/// the internal order: local height ascending, a before b. Every commutator of
/// two members of P lands strictly later in this order.
class Rank2Span {
   public:
    Rank2Span(const RootSystem& phi, std::vector<Root> psi);

    const std::vector<Root>& psi() const noexcept { return psi_; }
    SpanType type() const noexcept { return type_; }
    const std::vector<Root>& span_roots() const noexcept { return span_roots_; }

    const std::vector<Root>& positive() const noexcept { return positive_; }
    std::size_t size() const noexcept { return positive_.size(); }
    const Root& root(int k) const { return positive_[k]; }
    /// -1 when absent from P.
    int index_of(const Root& r) const;

    const Root& local_a() const { return positive_[0]; }
    /// Only for rank-2 spans.
    const Root& local_b() const { return positive_[1]; }
    std::pair<int, int> local_coords(int k) const { return local_[k]; }
    int local_height(int k) const { return local_[k].first + local_[k].second; }

    /// Psi^+ as indices into P, in internal order.
    const std::vector<int>& psi_plus() const noexcept { return psi_plus_; }
    bool in_psi_plus(int k) const { return psi_height_[k] > 0; }
    /// ht_Psi for members of Psi^+; 0 otherwise.
    int psi_height(int k) const { return psi_height_[k]; }
    /// Coordinates over Psi for members of Psi^+.
    std::pair<int, int> psi_coords(int k) const { return psi_coords_[k]; }

    std::string label() const;

   private:
    std::vector<Root> psi_;
    SpanType type_;
    std::vector<Root> span_roots_;
    std::vector<Root> positive_;
    std::vector<std::pair<int, int>> local_;
    std::vector<int> psi_plus_;
    std::vector<int> psi_height_;
    std::vector<std::pair<int, int>> psi_coords_;
};

}  // namespace hdx
