#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace qfc::detail {

// Solves the dense n x n system A x = b in place with partial pivoting.
// A is row-major. Returns false if the matrix is numerically singular.
inline bool solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(a[col * n + col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            double v = std::fabs(a[row * n + col]);
            if (v > best) {
                best = v;
                pivot = row;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) {
            return false;
        }
        if (pivot != col) {
            for (std::size_t k = col; k < n; ++k) {
                std::swap(a[col * n + k], a[pivot * n + k]);
            }
            std::swap(b[col], b[pivot]);
        }
        const double diag = a[col * n + col];
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row * n + col] / diag;
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t k = col; k < n; ++k) {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double sum = b[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            sum -= a[i * n + k] * b[k];
        }
        b[i] = sum / a[i * n + i];
        if (!std::isfinite(b[i])) {
            return false;
        }
    }
    return true;
}

} // namespace qfc::detail
