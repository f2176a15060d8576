#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hdx {

inline constexpr int kMaxExtension = 16;

/// Element of F_p[x]/(f), stored as coefficients low degree first.
/// Only the first m slots are meaningful; the rest stay zero.
struct FieldElem {
    std::array<std::uint8_t, kMaxExtension> c{};

    /// Polynomial degree; -1 for zero.
    int degree() const noexcept {
        for (int i = kMaxExtension - 1; i >= 0; --i)
            if (c[i] != 0) return i;
        return -1;
    }
    bool is_zero() const noexcept { return degree() < 0; }

    friend bool operator==(const FieldElem&, const FieldElem&) = default;
    friend auto operator<=>(const FieldElem&, const FieldElem&) = default;
};

bool is_prime(int n) noexcept;

/// Irreducibility by exhaustive trial division with every monic polynomial of
/// degree 1..deg/2. `f` is low-degree-first, monic, length deg+1.
bool is_irreducible(int p, std::span<const int> f);

/// Lexicographically smallest monic irreducible of degree m: candidates are
/// scanned by the base-p value of their non-leading coefficients.
std::vector<int> find_irreducible(int p, int m);

/// The field F_{p^m} = F_p[x]/(f). Immutable after construction.
class Field {
   public:
    Field(int p, int m);
    Field(int p, std::vector<int> modulus);

    int p() const noexcept { return p_; }
    int m() const noexcept { return m_; }
    const std::vector<int>& modulus() const noexcept { return modulus_; }
    std::uint64_t order() const noexcept { return order_; }

    FieldElem zero() const noexcept { return {}; }
    FieldElem one() const noexcept { return from_int(1); }
    FieldElem x() const;  // the class of the indeterminate
    FieldElem from_int(long v) const noexcept;
    FieldElem from_coeffs(std::span<const int> coeffs) const;
    FieldElem monomial(int e) const;

    FieldElem add(const FieldElem& a, const FieldElem& b) const noexcept;
    FieldElem sub(const FieldElem& a, const FieldElem& b) const noexcept;
    FieldElem neg(const FieldElem& a) const noexcept;
    FieldElem scale(const FieldElem& a, long k) const noexcept;
    FieldElem mul(const FieldElem& a, const FieldElem& b) const noexcept;
    FieldElem pow(const FieldElem& a, std::uint64_t e) const noexcept;
    /// Throws DomainError on zero.
    FieldElem inv(const FieldElem& a) const;

    /// Base-p integer code, coefficient of x^i is digit i.
    std::uint64_t encode(const FieldElem& a) const noexcept;
    FieldElem decode(std::uint64_t code) const noexcept;

    /// Every element of degree <= k (k >= -1); p^{min(k,m-1)+1} of them.
    std::vector<FieldElem> elements_up_to_degree(int k) const;
    std::uint64_t count_up_to_degree(int k) const;
    /// Cap a degree bound at the field's m-1.
    int cap(int k) const noexcept { return k < m_ - 1 ? k : m_ - 1; }

    /// "c0,c1,...,c_{m-1}" low degree first.
    std::string to_string(const FieldElem& a) const;
    FieldElem parse(std::string_view s) const;

    friend bool operator==(const Field& a, const Field& b) noexcept {
        return a.p_ == b.p_ && a.modulus_ == b.modulus_;
    }

   private:
    int p_;
    int m_;
    std::vector<int> modulus_;  // monic, length m+1
    std::uint64_t order_;
};

/// F_q arithmetic on element codes through tables (q <= 4096).
class TableField {
   public:
    explicit TableField(const Field& f);
    int q() const noexcept { return q_; }
    std::uint16_t add(std::uint16_t a, std::uint16_t b) const { return add_[a * q_ + b]; }
    std::uint16_t mul(std::uint16_t a, std::uint16_t b) const { return mul_[a * q_ + b]; }
    std::uint16_t neg(std::uint16_t a) const { return neg_[a]; }
    std::uint16_t from_int(long v) const;
    const Field& field() const noexcept { return field_; }

   private:
    Field field_;
    int q_;
    std::vector<std::uint16_t> add_, mul_, neg_;
};

}  // namespace hdx
