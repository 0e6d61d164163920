#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bmnb {

/// Dense row-major matrix of doubles. Just enough linear storage for
/// feature tables; not a linear-algebra type.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }
    std::span<double> row(std::size_t r) {
        return {data.data() + r * cols, cols};
    }

    bool empty() const { return rows == 0; }

    bool operator==(const Matrix&) const = default;
};

}  // namespace bmnb
