#pragma once

// Dense matrices over tower-field elements.  Gaussian elimination always
// pivots on a minimal-valuation entry so precision loss stays bounded by
// the valuation of the determinant.

#include <vector>

#include "orthinv/tower.hpp"

namespace orthinv {

class Mat {
public:
    Mat() = default;
    Mat(const Tower* tw, int level, int rows, int cols)
        : tw_(tw), level_(level), r_(rows), c_(cols), a_(rows * cols, tw->zero(level)) {}

    static Mat identity(const Tower* tw, int level, int n) {
        Mat m(tw, level, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = tw->one(level);
        return m;
    }

    // the antidiagonal permutation matrix
    static Mat antidiag(const Tower* tw, int level, int n) {
        Mat m(tw, level, n, n);
        for (int i = 0; i < n; ++i) m.at(i, n - 1 - i) = tw->one(level);
        return m;
    }

    static Mat diag(const Tower* tw, int level, const std::vector<FieldElt>& d) {
        Mat m(tw, level, (int)d.size(), (int)d.size());
        for (size_t i = 0; i < d.size(); ++i) m.at((int)i, (int)i) = d[i];
        return m;
    }

    const Tower* tower() const { return tw_; }
    int level() const { return level_; }
    int rows() const { return r_; }
    int cols() const { return c_; }

    FieldElt& at(int i, int j) { return a_[(size_t)i * c_ + j]; }
    const FieldElt& at(int i, int j) const { return a_[(size_t)i * c_ + j]; }

private:
    const Tower* tw_ = nullptr;
    int level_ = 0;
    int r_ = 0, c_ = 0;
    std::vector<FieldElt> a_;
};

inline Mat operator*(const Mat& A, const Mat& B) {
    if (A.cols() != B.rows()) throw DimensionMismatch("matrix product shape mismatch");
    Mat C(A.tower(), A.level(), A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < A.cols(); ++k) {
            if (A.at(i, k).is_zero()) continue;
            for (int j = 0; j < B.cols(); ++j) {
                if (B.at(k, j).is_zero()) continue;
                C.at(i, j) = C.at(i, j) + A.at(i, k) * B.at(k, j);
            }
        }
    return C;
}

inline Mat operator+(const Mat& A, const Mat& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionMismatch("matrix sum shape mismatch");
    Mat C(A.tower(), A.level(), A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) C.at(i, j) = A.at(i, j) + B.at(i, j);
    return C;
}

inline Mat operator-(const Mat& A, const Mat& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionMismatch("matrix difference shape mismatch");
    Mat C(A.tower(), A.level(), A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) C.at(i, j) = A.at(i, j) - B.at(i, j);
    return C;
}

inline Mat operator*(const FieldElt& s, const Mat& A) {
    Mat C(A.tower(), A.level(), A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (!A.at(i, j).is_zero()) C.at(i, j) = s * A.at(i, j);
    return C;
}

inline Mat transpose(const Mat& A) {
    Mat C(A.tower(), A.level(), A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) C.at(j, i) = A.at(i, j);
    return C;
}

inline FieldElt trace(const Mat& A) {
    FieldElt t = A.tower()->zero(A.level());
    for (int i = 0; i < A.rows(); ++i) t = t + A.at(i, i);
    return t;
}

inline bool mat_equal(const Mat& A, const Mat& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) return false;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (A.at(i, j) != B.at(i, j)) return false;
    return true;
}

inline bool mat_is_integral(const Mat& A) {
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (!A.tower()->is_integral(A.at(i, j))) return false;
    return true;
}

inline bool mat_is_symmetric(const Mat& A) {
    if (A.rows() != A.cols()) return false;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = i + 1; j < A.cols(); ++j)
            if (A.at(i, j) != A.at(j, i)) return false;
    return true;
}

namespace detail {
inline int min_val_pivot(const Mat& A, int col, int start) {
    int best = -1;
    Rat bv(0);
    for (int i = start; i < A.rows(); ++i) {
        if (A.at(i, col).is_zero()) continue;
        Rat v = A.at(i, col).val();
        if (best < 0 || v < bv) { best = i; bv = v; }
    }
    return best;
}
} // namespace detail

inline FieldElt det(Mat A) {
    if (A.rows() != A.cols()) throw DimensionMismatch("determinant of non-square matrix");
    int n = A.rows();
    const Tower* tw = A.tower();
    FieldElt d = tw->one(A.level());
    bool flip = false;
    for (int c = 0; c < n; ++c) {
        int pr = detail::min_val_pivot(A, c, c);
        if (pr < 0) return tw->zero(A.level());
        if (pr != c) {
            for (int j = 0; j < n; ++j) std::swap(A.at(pr, j), A.at(c, j));
            flip = !flip;
        }
        FieldElt piv = A.at(c, c);
        d = d * piv;
        FieldElt pinv = tw->inv(piv);
        for (int i = c + 1; i < n; ++i) {
            if (A.at(i, c).is_zero()) continue;
            FieldElt fac = A.at(i, c) * pinv;
            for (int j = c; j < n; ++j) A.at(i, j) = A.at(i, j) - fac * A.at(c, j);
        }
    }
    return flip ? -d : d;
}

inline Mat inverse(Mat A) {
    if (A.rows() != A.cols()) throw DimensionMismatch("inverse of non-square matrix");
    int n = A.rows();
    const Tower* tw = A.tower();
    Mat I = Mat::identity(tw, A.level(), n);
    for (int c = 0; c < n; ++c) {
        int pr = detail::min_val_pivot(A, c, c);
        if (pr < 0) throw DivisionByZero("matrix is singular");
        if (pr != c)
            for (int j = 0; j < n; ++j) {
                std::swap(A.at(pr, j), A.at(c, j));
                std::swap(I.at(pr, j), I.at(c, j));
            }
        FieldElt pinv = tw->inv(A.at(c, c));
        for (int j = 0; j < n; ++j) {
            A.at(c, j) = A.at(c, j) * pinv;
            I.at(c, j) = I.at(c, j) * pinv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || A.at(i, c).is_zero()) continue;
            FieldElt fac = A.at(i, c);
            for (int j = 0; j < n; ++j) {
                A.at(i, j) = A.at(i, j) - fac * A.at(c, j);
                I.at(i, j) = I.at(i, j) - fac * I.at(c, j);
            }
        }
    }
    return I;
}

inline std::vector<FieldElt> solve(Mat A, std::vector<FieldElt> b) {
    Mat I = inverse(std::move(A));
    std::vector<FieldElt> x((size_t)I.rows(), I.tower()->zero(I.level()));
    for (int i = 0; i < I.rows(); ++i) {
        FieldElt acc = I.tower()->zero(I.level());
        for (int j = 0; j < I.cols(); ++j)
            if (!I.at(i, j).is_zero() && !b[j].is_zero()) acc = acc + I.at(i, j) * b[j];
        x[i] = acc;
    }
    return x;
}

} // namespace orthinv
