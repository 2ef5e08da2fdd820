#pragma once

#include <array>

namespace bellfield::linalg {

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat4 = std::array<std::array<double, 4>, 4>;

double det(const Mat2& m);
Mat2 inverse(const Mat2& m);

double det(const Mat4& m);

// Gauss-Jordan with partial pivoting. Throws MatrixError on a zero pivot.
Mat4 inverse(const Mat4& m);

// 1-norm condition number, using the explicit inverse
double condition_number(const Mat4& m);

// lower-triangular L with m = L L^T; MatrixError if not positive definite
Mat4 cholesky(const Mat4& m);

bool is_symmetric(const Mat4& m, double tol = 1e-12);

Mat4 identity4();

}  // namespace bellfield::linalg
