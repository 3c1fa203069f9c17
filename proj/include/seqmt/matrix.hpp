#pragma once

#include <cstddef>
#include <vector>

#include "seqmt/rng.hpp"

namespace seqmt {

// Minimal dense matrix, row-major. Heavy linear algebra is delegated to a
// backend in matrix.cpp; this type exists so module interfaces and JSON
// output stay dependency-free.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

bool is_symmetric(const Matrix& m, double tol = 1e-10);

// Sampler for N(0, sigma) built from a symmetric eigendecomposition.
// Eigenvalues below -rel_tol * max|eigenvalue| raise; small negatives are
// clipped to zero, so rank-deficient covariances are fine.
class MvnSampler {
public:
    explicit MvnSampler(const Matrix& sigma, double rel_tol = 1e-8);

    std::size_t dim() const { return dim_; }
    // Writes one draw into out (length dim()).
    void sample(Rng& rng, double* out) const;

private:
    std::size_t dim_ = 0;
    std::vector<double> factor_; // row-major, draw = factor * z
};

} // namespace seqmt
