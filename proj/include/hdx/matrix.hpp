#pragma once

#include <string>
#include <vector>

#include "hdx/field.hpp"

namespace hdx {

/// Dense square matrix over a Field, row-major.
struct Mat {
    int n = 0;
    std::vector<FieldElem> e;

    Mat() = default;
    explicit Mat(int size) : n(size), e(static_cast<std::size_t>(size) * size) {}

    FieldElem& at(int i, int j) { return e[static_cast<std::size_t>(i) * n + j]; }
    const FieldElem& at(int i, int j) const { return e[static_cast<std::size_t>(i) * n + j]; }

    friend bool operator==(const Mat&, const Mat&) = default;
};

Mat identity_matrix(const Field& f, int n);
Mat mat_mul(const Field& f, const Mat& a, const Mat& b);
Mat mat_transpose(const Mat& a);
Mat mat_neg(const Field& f, const Mat& a);
FieldElem mat_det(const Field& f, Mat a);
/// Throws DomainError when singular.
Mat mat_inverse(const Field& f, Mat a);
bool is_identity(const Field& f, const Mat& a);
std::string mat_to_string(const Field& f, const Mat& a);

}  // namespace hdx
