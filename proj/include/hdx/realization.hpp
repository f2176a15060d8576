#pragma once

#include <memory>
#include <string>
#include <utility>

#include "hdx/matrix.hpp"
#include "hdx/rootsys.hpp"

namespace hdx {

/// Matrix realization of a universal Chevalley group: SL_n for A_{n-1}, Sp4 for
/// B2 = C2 (J = [[0,I],[-I,0]]).
class Realization {
   public:
    enum class Kind { SL, Sp4 };

    /// SL_n, 2 <= n <= 5.
    static Realization sl(int n);
    static Realization sp4();
    /// "sl2".."sl5", "sp4"
    static Realization parse(const std::string& name);

    Kind kind() const noexcept { return kind_; }
    int n() const noexcept { return n_; }
    std::string name() const;
    const RootSystem& phi() const noexcept { return *phi_; }
    /// True when `other` is the same root system this realization is built on.
    bool realizes(const RootSystem& other) const noexcept;

    /// x_alpha(t). Throws DomainError for a non-root.
    Mat root_matrix(const Field& f, const Root& alpha, const FieldElem& t) const;
    /// n_alpha(t) = x_alpha(t) x_{-alpha}(-1/t) x_alpha(t) and h_alpha(t) = n_alpha(t) n_alpha(-1).
    std::pair<Mat, Mat> torus_elems(const Field& f, const Root& alpha, const FieldElem& t) const;

    /// det = 1 (SL) or A J A^T = J (Sp4).
    bool is_member(const Field& f, const Mat& a) const;

    /// Sp4 only: the type-C coordinates (x, y) of a B2 root, e.g. (1,-1) for e1-e2.
    std::pair<int, int> c2_coords(const Root& alpha) const;

   private:
    Realization(Kind k, int n, std::shared_ptr<const RootSystem> phi) : kind_(k), n_(n), phi_(std::move(phi)) {}

    Kind kind_;
    int n_;
    std::shared_ptr<const RootSystem> phi_;
};

}  // namespace hdx
