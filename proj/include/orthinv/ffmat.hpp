#pragma once

// Small dense matrices over a tabulated residue field, entries as codes.

#include <cstdint>
#include <vector>

#include "orthinv/errors.hpp"
#include "orthinv/residue_field.hpp"

namespace orthinv {

using FFMat = std::vector<std::vector<int64_t>>;

inline FFMat ff_identity(int n) {
    FFMat m(n, std::vector<int64_t>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline FFMat ff_mul(const ResidueField& R, const FFMat& A, const FFMat& B) {
    int n = (int)A.size(), k = (int)B.size(), c = (int)B[0].size();
    FFMat C(n, std::vector<int64_t>(c, 0));
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < k; ++t) {
            if (A[i][t] == 0) continue;
            for (int j = 0; j < c; ++j) {
                if (B[t][j] == 0) continue;
                C[i][j] = R.add(C[i][j], R.mul(A[i][t], B[t][j]));
            }
        }
    return C;
}

inline FFMat ff_transpose(const FFMat& A) {
    int n = (int)A.size(), c = (int)A[0].size();
    FFMat T(c, std::vector<int64_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < c; ++j) T[j][i] = A[i][j];
    return T;
}

inline int64_t ff_det(const ResidueField& R, FFMat A) {
    int n = (int)A.size();
    int64_t d = 1;
    bool flip = false;
    for (int c = 0; c < n; ++c) {
        int pr = -1;
        for (int i = c; i < n; ++i)
            if (A[i][c] != 0) { pr = i; break; }
        if (pr < 0) return 0;
        if (pr != c) { std::swap(A[pr], A[c]); flip = !flip; }
        d = R.mul(d, A[c][c]);
        int64_t pinv = R.inv(A[c][c]);
        for (int i = c + 1; i < n; ++i) {
            if (A[i][c] == 0) continue;
            int64_t fac = R.mul(A[i][c], pinv);
            for (int j = c; j < n; ++j) A[i][j] = R.sub(A[i][j], R.mul(fac, A[c][j]));
        }
    }
    return flip ? R.neg(d) : d;
}

inline FFMat ff_inverse(const ResidueField& R, FFMat A) {
    int n = (int)A.size();
    FFMat I = ff_identity(n);
    for (int c = 0; c < n; ++c) {
        int pr = -1;
        for (int i = c; i < n; ++i)
            if (A[i][c] != 0) { pr = i; break; }
        if (pr < 0) throw DivisionByZero("singular matrix over residue field");
        if (pr != c) { std::swap(A[pr], A[c]); std::swap(I[pr], I[c]); }
        int64_t pinv = R.inv(A[c][c]);
        for (int j = 0; j < n; ++j) {
            A[c][j] = R.mul(A[c][j], pinv);
            I[c][j] = R.mul(I[c][j], pinv);
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || A[i][c] == 0) continue;
            int64_t fac = A[i][c];
            for (int j = 0; j < n; ++j) {
                A[i][j] = R.sub(A[i][j], R.mul(fac, A[c][j]));
                I[i][j] = R.sub(I[i][j], R.mul(fac, I[c][j]));
            }
        }
    }
    return I;
}

} // namespace orthinv
