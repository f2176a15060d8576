#include "hdx/realization.hpp"

#include "hdx/errors.hpp"

namespace hdx {

Realization Realization::sl(int n) {
    if (n < 2 || n > 5) throw DomainError("SL_n realization supports 2 <= n <= 5");
    return Realization(Kind::SL, n, std::make_shared<RootSystem>(RootSystem::build(Family::A, n - 1)));
}

Realization Realization::sp4() {
    return Realization(Kind::Sp4, 4, std::make_shared<RootSystem>(RootSystem::build(Family::B, 2)));
}

Realization Realization::parse(const std::string& name) {
    if (name == "sp4") return sp4();
    if (name.size() == 3 && name.rfind("sl", 0) == 0 && name[2] >= '2' && name[2] <= '5') return sl(name[2] - '0');
    throw DomainError("unknown realization: " + name);
}

std::string Realization::name() const { return kind_ == Kind::Sp4 ? "sp4" : "sl" + std::to_string(n_); }

bool Realization::realizes(const RootSystem& other) const noexcept {
    return other.family() == phi_->family() && other.rank() == phi_->rank();
}

std::pair<int, int> Realization::c2_coords(const Root& alpha) const {
    if (kind_ != Kind::Sp4) throw DomainError("c2_coords: not an Sp4 realization");
    const auto& c = phi_->simple_coordinates(alpha);
    // alpha_1 (long) -> 2e2, alpha_2 (short) -> e1 - e2
    return {c[1], 2 * c[0] - c[1]};
}

Mat Realization::root_matrix(const Field& f, const Root& alpha, const FieldElem& t) const {
    if (!phi_->contains(alpha)) throw DomainError("root_matrix: " + alpha.to_string() + " is not a root of " + name());
    Mat m = identity_matrix(f, n_);
    if (kind_ == Kind::SL) {
        int i = -1, j = -1;
        for (int k = 0; k < n_; ++k) {
            if (alpha[k] > 0) i = k;
            if (alpha[k] < 0) j = k;
        }
        m.at(i, j) = t;
        return m;
    }
    auto [x, y] = c2_coords(alpha);
    const FieldElem mt = f.neg(t);
    if (x == 0 || y == 0) {
        int i = x != 0 ? 0 : 1;
        if (x + y > 0)
            m.at(i, i + 2) = t;
        else
            m.at(i + 2, i) = t;
    } else if (x == -y) {
        int i = x > 0 ? 0 : 1, j = 1 - i;
        m.at(i, j) = t;
        m.at(j + 2, i + 2) = mt;
    } else if (x > 0) {
        m.at(0, 3) = t;
        m.at(1, 2) = t;
    } else {
        m.at(3, 0) = t;
        m.at(2, 1) = t;
    }
    return m;
}

std::pair<Mat, Mat> Realization::torus_elems(const Field& f, const Root& alpha, const FieldElem& t) const {
    if (t.is_zero()) throw DomainError("torus_elems: t must be nonzero");
    auto n_of = [&](const FieldElem& s) {
        Mat x = root_matrix(f, alpha, s);
        Mat y = root_matrix(f, -alpha, f.neg(f.inv(s)));
        return mat_mul(f, mat_mul(f, x, y), x);
    };
    Mat nt = n_of(t);
    Mat h = mat_mul(f, nt, n_of(f.neg(f.one())));
    return {nt, h};
}

bool Realization::is_member(const Field& f, const Mat& a) const {
    if (a.n != n_) return false;
    if (kind_ == Kind::SL) return mat_det(f, a) == f.one();
    Mat j(4);
    for (int i = 0; i < 2; ++i) {
        j.at(i, i + 2) = f.one();
        j.at(i + 2, i) = f.neg(f.one());
    }
    return mat_mul(f, mat_mul(f, a, j), mat_transpose(a)) == j;
}

}  // namespace hdx
