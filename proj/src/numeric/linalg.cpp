#include "bellfield/linalg.hpp"

#include <cmath>
#include <utility>

#include "bellfield/errors.hpp"

namespace bellfield::linalg {

double det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Mat2 inverse(const Mat2& m) {
    double d = det(m);
    if (d == 0.0 || !std::isfinite(d)) throw MatrixError("singular 2x2 matrix");
    return {{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}};
}

double det(const Mat4& m) {
    // LU with partial pivoting on a copy
    Mat4 a = m;
    double d = 1.0;
    for (int k = 0; k < 4; ++k) {
        int p = k;
        for (int i = k + 1; i < 4; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
        if (a[p][k] == 0.0) return 0.0;
        if (p != k) {
            std::swap(a[p], a[k]);
            d = -d;
        }
        d *= a[k][k];
        for (int i = k + 1; i < 4; ++i) {
            double f = a[i][k] / a[k][k];
            for (int j = k; j < 4; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return d;
}

Mat4 inverse(const Mat4& m) {
    Mat4 a = m;
    Mat4 inv = identity4();
    for (int k = 0; k < 4; ++k) {
        int p = k;
        for (int i = k + 1; i < 4; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
        if (a[p][k] == 0.0 || !std::isfinite(a[p][k]))
            throw MatrixError("singular 4x4 matrix");
        std::swap(a[p], a[k]);
        std::swap(inv[p], inv[k]);
        double piv = a[k][k];
        for (int j = 0; j < 4; ++j) {
            a[k][j] /= piv;
            inv[k][j] /= piv;
        }
        for (int i = 0; i < 4; ++i) {
            if (i == k) continue;
            double f = a[i][k];
            if (f == 0.0) continue;
            for (int j = 0; j < 4; ++j) {
                a[i][j] -= f * a[k][j];
                inv[i][j] -= f * inv[k][j];
            }
        }
    }
    return inv;
}

static double norm1(const Mat4& m) {
    double best = 0.0;
    for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += std::fabs(m[i][j]);
        if (s > best) best = s;
    }
    return best;
}

double condition_number(const Mat4& m) { return norm1(m) * norm1(inverse(m)); }

Mat4 cholesky(const Mat4& m) {
    Mat4 l{};
    for (int j = 0; j < 4; ++j) {
        double s = m[j][j];
        for (int k = 0; k < j; ++k) s -= l[j][k] * l[j][k];
        if (!(s > 0.0)) throw MatrixError("matrix is not positive definite");
        l[j][j] = std::sqrt(s);
        for (int i = j + 1; i < 4; ++i) {
            double t = m[i][j];
            for (int k = 0; k < j; ++k) t -= l[i][k] * l[j][k];
            l[i][j] = t / l[j][j];
        }
    }
    return l;
}

bool is_symmetric(const Mat4& m, double tol) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            double scale = std::fabs(m[i][j]) + std::fabs(m[j][i]) + 1e-300;
            if (std::fabs(m[i][j] - m[j][i]) > tol * scale) return false;
        }
    return true;
}

Mat4 identity4() {
    Mat4 id{};
    for (int i = 0; i < 4; ++i) id[i][i] = 1.0;
    return id;
}

}  // namespace bellfield::linalg
