#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hdx/realization.hpp"

namespace hdx {

/// Matrix over F_p with n <= 5, entries row-major.
struct SmallMat {
    std::array<std::uint8_t, 25> a{};
    friend bool operator==(const SmallMat&, const SmallMat&) = default;
};

/// Arithmetic and base-p codes for n x n matrices over F_p. Entry (0,0) is the
/// most significant digit, so the smallest code is the lexicographic minimum.
class SmallMatOps {
   public:
    SmallMatOps(int n, int p);
    int n() const noexcept { return n_; }
    int p() const noexcept { return p_; }

    SmallMat identity() const;
    SmallMat mul(const SmallMat& x, const SmallMat& y) const noexcept;
    std::uint64_t encode(const SmallMat& x) const noexcept;
    SmallMat decode(std::uint64_t code) const noexcept;
    SmallMat from_mat(const Mat& m) const;
    Mat to_mat(const Field& f, const SmallMat& x) const;

   private:
    int n_;
    int p_;
};

/// Open-addressing map from code to dense index. Code 0 (the zero matrix) is
/// reserved as the empty marker.
class CodeIndex {
   public:
    void reserve(std::size_t n);
    /// Returns the existing index or inserts `idx`.
    std::uint32_t insert(std::uint64_t code, std::uint32_t idx);
    /// -1 when absent.
    std::int64_t find(std::uint64_t code) const;
    std::size_t capacity() const noexcept { return codes_.size(); }
    std::size_t memory_bytes() const noexcept { return codes_.size() * (sizeof(std::uint64_t) + sizeof(std::uint32_t)); }

   private:
    std::vector<std::uint64_t> codes_;
    std::vector<std::uint32_t> idx_;
    std::uint64_t mask_ = 0;
};

/// Universal group order q^N prod (q^{d_i} - 1) from the invariant degrees, as a decimal string.
std::string group_order_string(const RootSystem& phi, int p, int m);
/// Same value; throws ResourceError when it does not fit in 64 bits.
std::uint64_t group_order(const RootSystem& phi, int p, int m);

struct EnumBudget {
    std::uint64_t max_elements = 20'000'000;
    std::uint64_t max_bytes = 0;  // 0 = from HDX_BUDGET_MB or unlimited
};
/// Budget read from the environment (HDX_BUDGET_MB) on top of the defaults.
EnumBudget default_budget();

/// All elements of the realized group over F_p (m = 1), found by BFS from the
/// identity with right multiplication by x_{+-alpha_i}(1).
class GroupTable {
   public:
    static GroupTable enumerate(const Realization& re, int p, const EnumBudget& budget = default_budget());

    const Realization& realization() const noexcept { return re_; }
    const SmallMatOps& ops() const noexcept { return ops_; }
    const Field& field() const noexcept { return field_; }
    std::size_t size() const noexcept { return codes_.size(); }
    std::uint64_t code(std::size_t i) const { return codes_[i]; }
    SmallMat element(std::size_t i) const { return ops_.decode(codes_[i]); }
    std::int64_t index_of(const SmallMat& x) const { return index_.find(ops_.encode(x)); }
    std::int64_t index_of_code(std::uint64_t c) const { return index_.find(c); }
    const std::vector<SmallMat>& generators() const noexcept { return gens_; }

    SmallMat root_element(const Root& alpha, int t) const;

   private:
    GroupTable(Realization re, int p);

    Realization re_;
    Field field_;
    SmallMatOps ops_;
    std::vector<std::uint64_t> codes_;
    CodeIndex index_;
    std::vector<SmallMat> gens_;
};

/// Binary table: magic "HDXGRP01", p, realization name, element count, then the
/// codes in BFS order (element i has index i).
void save_group_table(const GroupTable& g, const std::string& path);

/// Elements commuting with every generator. Serial reference and OpenMP kernel.
std::vector<std::uint64_t> center_scan_serial(const GroupTable& g);
std::vector<std::uint64_t> center_scan(const GroupTable& g);

struct CenterDesc {
    std::vector<SmallMat> elements;
    std::size_t expected = 0;  // gcd(n, q-1) for SL_n, 2 for Sp4 (p odd)
    std::size_t footnote = 0;  // d+1 for A_d, 2 for C_2
};
CenterDesc center(const GroupTable& g);

/// Smallest code in gZ.
std::uint64_t adjoint_canonical(const GroupTable& g, const CenterDesc& z, const SmallMat& x);

/// Closure of generators inside the table, as sorted codes.
std::vector<std::uint64_t> subgroup_closure(const GroupTable& g, const std::vector<SmallMat>& gens);
/// X_Psi at m = 1: generated by x_g(1), g in Psi.
std::vector<std::uint64_t> root_subgroup(const GroupTable& g, const std::vector<Root>& psi);

struct CommutatorReport {
    std::size_t pairs = 0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::size_t ambiguous = 0;  // pairs where the sign assignment was not unique
};
/// For every ordered pair a != +-b of the realization's roots, the steinberg
/// commutator word evaluated through root matrices equals the matrix
/// commutator for `trials` random (t,u), and exactly one assignment of
/// constants in {+-1,+-2,+-3} fits.
CommutatorReport verify_commutator(const Realization& re, int trials, std::uint64_t seed = 1);

/// Z X_Psi cap Z X_Psi' = Z X_{Psi cap Psi'} at m = 1.
bool centerint_check(const GroupTable& g, const CenterDesc& z, const std::vector<Root>& psi, const std::vector<Root>& psi2);

/// Positive-root subgroup is upper unitriangular, negative lower, and they meet in {I}.
bool triangularity_check(const GroupTable& g);

}  // namespace hdx
