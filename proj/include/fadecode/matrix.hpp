#ifndef FADECODE_MATRIX_HPP
#define FADECODE_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

namespace fadecode {

// row-major dense matrix of 64-bit floats
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
    std::size_t size() const { return data.size(); }
};

}  // namespace fadecode

#endif
