#include "proxyvote/dense_solver.hpp"

#include <algorithm>
#include <cmath>

#include "proxyvote/errors.hpp"

namespace proxyvote {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw InvalidInput("matrix shapes do not conform");
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

DenseMatrix solve_dense(DenseMatrix a, DenseMatrix b, double pivot_tolerance) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw InvalidInput("solve_dense: matrix is not square");
    if (b.rows() != n) throw InvalidInput("solve_dense: right-hand side has wrong row count");
    const std::size_t m = b.cols();

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (double v : a.row(i)) scale = std::max(scale, std::fabs(v));
    }
    const double threshold = pivot_tolerance * (scale > 0.0 ? scale : 1.0);

    // Forward elimination.
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::fabs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (!(best > threshold)) {
            throw SingularSystemError("zero pivot in column " + std::to_string(col));
        }
        if (pivot != col) {
            std::swap_ranges(a.row(col).begin(), a.row(col).end(), a.row(pivot).begin());
            std::swap_ranges(b.row(col).begin(), b.row(col).end(), b.row(pivot).begin());
        }
        const double diag = a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a(r, col) / diag;
            if (factor == 0.0) continue;
            a(r, col) = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= factor * a(col, c);
            for (std::size_t c = 0; c < m; ++c) b(r, c) -= factor * b(col, c);
        }
    }

    // Back substitution, in place in b.
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t c = 0; c < m; ++c) b(i, c) -= aik * b(k, c);
        }
        const double diag = a(i, i);
        for (std::size_t c = 0; c < m; ++c) b(i, c) /= diag;
    }
    return b;
}

}  // namespace proxyvote
