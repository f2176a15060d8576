#include "hdx/matrix.hpp"

#include <sstream>

#include "hdx/errors.hpp"

namespace hdx {

Mat identity_matrix(const Field& f, int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = f.one();
    return m;
}

Mat mat_mul(const Field& f, const Mat& a, const Mat& b) {
    if (a.n != b.n) throw DomainError("mat_mul: size mismatch");
    Mat c(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k) {
            const auto& aik = a.at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < a.n; ++j) c.at(i, j) = f.add(c.at(i, j), f.mul(aik, b.at(k, j)));
        }
    return c;
}

Mat mat_transpose(const Mat& a) {
    Mat t(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

Mat mat_neg(const Field& f, const Mat& a) {
    Mat r(a.n);
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = f.neg(a.e[i]);
    return r;
}

FieldElem mat_det(const Field& f, Mat a) {
    FieldElem det = f.one();
    for (int c = 0; c < a.n; ++c) {
        int piv = c;
        while (piv < a.n && a.at(piv, c).is_zero()) ++piv;
        if (piv == a.n) return f.zero();
        if (piv != c) {
            for (int j = 0; j < a.n; ++j) std::swap(a.at(piv, j), a.at(c, j));
            det = f.neg(det);
        }
        det = f.mul(det, a.at(c, c));
        FieldElem inv = f.inv(a.at(c, c));
        for (int r = c + 1; r < a.n; ++r) {
            FieldElem k = f.mul(a.at(r, c), inv);
            if (k.is_zero()) continue;
            for (int j = c; j < a.n; ++j) a.at(r, j) = f.sub(a.at(r, j), f.mul(k, a.at(c, j)));
        }
    }
    return det;
}

Mat mat_inverse(const Field& f, Mat a) {
    Mat r = identity_matrix(f, a.n);
    for (int c = 0; c < a.n; ++c) {
        int piv = c;
        while (piv < a.n && a.at(piv, c).is_zero()) ++piv;
        if (piv == a.n) throw DomainError("mat_inverse: singular matrix");
        for (int j = 0; j < a.n; ++j) {
            std::swap(a.at(piv, j), a.at(c, j));
            std::swap(r.at(piv, j), r.at(c, j));
        }
        FieldElem inv = f.inv(a.at(c, c));
        for (int j = 0; j < a.n; ++j) {
            a.at(c, j) = f.mul(a.at(c, j), inv);
            r.at(c, j) = f.mul(r.at(c, j), inv);
        }
        for (int i = 0; i < a.n; ++i) {
            if (i == c || a.at(i, c).is_zero()) continue;
            FieldElem k = a.at(i, c);
            for (int j = 0; j < a.n; ++j) {
                a.at(i, j) = f.sub(a.at(i, j), f.mul(k, a.at(c, j)));
                r.at(i, j) = f.sub(r.at(i, j), f.mul(k, r.at(c, j)));
            }
        }
    }
    return r;
}

bool is_identity(const Field& f, const Mat& a) { return a == identity_matrix(f, a.n); }

std::string mat_to_string(const Field& f, const Mat& a) {
    std::ostringstream os;
    for (int i = 0; i < a.n; ++i) {
        os << '[';
        for (int j = 0; j < a.n; ++j) os << (j ? " " : "") << f.to_string(a.at(i, j));
        os << "]\n";
    }
    return os.str();
}

}  // namespace hdx
