#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pettylab/errors.hpp"

namespace pettylab {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec scaled(const Vec& a, double c) {
    Vec r(a);
    for (double& x : r) x *= c;
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

// Dense row-major matrix, small sizes only.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Vec mat_vec(const Mat& m, const Vec& v) {
    Vec r(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
    return r;
}

inline Mat transpose(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

// LU with partial pivoting; returns the determinant and leaves the
// inverse in `inv` when requested.
inline double lu_invert(const Mat& a, Mat* inv) {
    const std::size_t n = a.rows;
    Mat work = a;
    Mat id = Mat::identity(n);
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(work(r, col)) > std::fabs(work(piv, col))) piv = r;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work(col, j), work(piv, j));
                std::swap(id(col, j), id(piv, j));
            }
            det = -det;
        }
        const double p = work(col, col);
        det *= p;
        if (p == 0.0) return 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            work(col, j) /= p;
            id(col, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = work(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                work(r, j) -= f * work(col, j);
                id(r, j) -= f * id(col, j);
            }
        }
    }
    if (inv) *inv = id;
    return det;
}

inline double determinant(const Mat& a) { return lu_invert(a, nullptr); }

inline Mat inverse(const Mat& a) {
    Mat inv;
    const double det = lu_invert(a, &inv);
    if (std::fabs(det) <= 1e-14) throw numeric_error("matrix is singular");
    return inv;
}

// Gram-Schmidt orthonormal basis of span{vectors}; vectors below `tol`
// after projection are dropped.
inline std::vector<Vec> orthonormal_basis(const std::vector<Vec>& vectors, double tol = 1e-10) {
    std::vector<Vec> basis;
    for (const Vec& v : vectors) {
        Vec w = v;
        for (const Vec& b : basis) w = sub(w, scaled(b, dot(w, b)));
        const double len = norm(w);
        if (len > tol) basis.push_back(scaled(w, 1.0 / len));
    }
    return basis;
}

// A unit vector orthogonal to every vector in `basis` (basis must not
// span the full space).
inline Vec orthogonal_complement_vector(const std::vector<Vec>& basis, std::size_t dim,
                                        double tol = 1e-10) {
    for (std::size_t k = 0; k < dim; ++k) {
        Vec e(dim, 0.0);
        e[k] = 1.0;
        for (const Vec& b : basis) e = sub(e, scaled(b, dot(e, b)));
        const double len = norm(e);
        if (len > tol) return scaled(e, 1.0 / len);
    }
    throw numeric_error("vectors already span the space");
}

} // namespace pettylab
