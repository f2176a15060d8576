#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hdx {

enum class Family { A, B, C, D, E, F, G };

Family parse_family(const std::string& s);
char family_char(Family f) noexcept;

/// A root as an integer vector. All realizations are scaled by 2 so that
/// half-integer coordinates (E and F series) become integral.
class Root {
   public:
    Root() = default;
    explicit Root(std::vector<int> v) : v_(std::move(v)) {}

    const std::vector<int>& coords() const noexcept { return v_; }
    std::size_t dim() const noexcept { return v_.size(); }
    int operator[](std::size_t i) const { return v_[i]; }

    long dot(const Root& o) const noexcept;
    long norm2() const noexcept { return dot(*this); }
    bool is_zero() const noexcept;

    Root operator-() const;
    Root operator+(const Root& o) const;
    Root operator-(const Root& o) const;
    Root operator*(int k) const;

    friend bool operator==(const Root&, const Root&) = default;
    friend auto operator<=>(const Root&, const Root&) = default;

    std::string to_string() const;

   private:
    std::vector<int> v_;
};

struct RootHash {
    std::size_t operator()(const Root& r) const noexcept;
};

/// Integer coefficients of `g` over the linearly independent `basis`, or
/// nullopt when `g` is not an integer combination of it.
std::optional<std::vector<int>> integer_coordinates(const Root& g, const std::vector<Root>& basis);

/// Rank of a set of integer vectors (exact, over Q).
int vector_rank(const std::vector<Root>& vs);

/// ht_Psi(g): sum of |coefficients| of g over Psi. Throws DomainError when g is
/// not an integer combination of Psi.
int height_over(const Root& g, const std::vector<Root>& psi);

class RootSystem {
   public:
    /// Legal pairs: A_d (d>=1), B_d (d>=2), C_d (d>=3), D_d (d>=4), G2, F4, E6, E7, E8.
    static RootSystem build(Family family, int rank);

    Family family() const noexcept { return family_; }
    int rank() const noexcept { return rank_; }
    std::size_t ambient_dim() const noexcept { return simples_.front().dim(); }
    std::string label() const;

    const std::vector<Root>& roots() const noexcept { return roots_; }
    const std::vector<Root>& simples() const noexcept { return simples_; }
    std::size_t size() const noexcept { return roots_.size(); }

    bool contains(const Root& r) const { return index_.count(r) != 0; }
    /// -1 when absent.
    int index_of(const Root& r) const;

    /// Coefficients over the simple roots (all >= 0 or all <= 0).
    const std::vector<int>& simple_coordinates(const Root& r) const;
    bool is_positive(const Root& r) const;
    int height(const Root& r) const;

    /// Sum of the simple roots (the highest root of the "all ones" type).
    Root simple_sum() const;

   private:
    RootSystem(Family f, int rank, std::vector<Root> roots, std::vector<Root> simples);

    Family family_;
    int rank_;
    std::vector<Root> roots_;
    std::vector<Root> simples_;
    std::unordered_map<Root, int, RootHash> index_;
    std::vector<std::vector<int>> simple_coords_;
};

/// The set S: rank+1 roots, every rank-subset linearly independent.
struct GeneratingSet {
    std::vector<Root> members;

    std::size_t size() const noexcept { return members.size(); }
    /// members with index k removed
    std::vector<Root> without(std::size_t k) const;
    /// members with the listed indices removed
    std::vector<Root> without(const std::vector<std::size_t>& ks) const;
};

/// Pi together with -(alpha_1 + ... + alpha_d).
GeneratingSet special_set(const RootSystem& phi);

/// Alternative choice for B2 built from a short simple root a and long simple
/// root b, ordered (-2a-b, b, a). Omitting each member in turn gives the three
/// Sp4 block shapes of the worked example, in order.
GeneratingSet b2_alternative_set(const RootSystem& phi);

/// Closure of `s` under adding members of `s` while staying in Phi. Equals the
/// roots that are N-combinations of s.
std::vector<Root> positive_closure(const RootSystem& phi, const std::vector<Root>& s);

bool check_positive_span(const RootSystem& phi, const std::vector<Root>& s);

/// Structural type of the N-cone of a pair, in the naming of the rank-2
/// generation argument.
enum class ConeKind {
    Commuting,  // R = {a, b}
    Case1,      // a+b only
    Case2,      // a+b and one of 2a+b / a+2b
    Case3,      // a+b, 2a+b, a+2b
    Case4,      // a+b, 2a+b, 3a+b, 3a+2b (or mirrored)
};
std::string to_string(ConeKind k);

struct ConeTerm {
    int i;
    int j;
    Root root;
};

struct PositiveCone {
    std::vector<ConeTerm> terms;  // sorted by (i+j, -i)
    ConeKind kind;
    bool mirrored = false;  // pattern transposed: i a + 2b type terms instead of 2a + b
};

/// {i a + j b in Phi : i,j >= 0, (i,j) != (0,0)}. Throws DomainError for b = -a.
PositiveCone positive_cone(const RootSystem& phi, const Root& a, const Root& b);

/// Sequence from `a_set` summing to g with every prefix sum a root.
std::vector<Root> prefix_decompose(const RootSystem& phi, const Root& g, const std::vector<Root>& a_set);

/// (d, e) in Phi^2 with d + e = g and d, e not in {g, -g}.
std::pair<Root, Root> decompose_as_root_sum(const RootSystem& phi, const Root& g);

/// Every pair satisfies the root-sum law: a.b < 0 => a+b in Phi u {0}, a.b > 0 => a-b in Phi u {0}.
bool check_root_sum_law(const RootSystem& phi);

}  // namespace hdx
