#include "seqmt/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace seqmt {

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows != m.cols) return false;
    double scale = 0.0;
    for (double v : m.data) scale = std::max(scale, std::abs(v));
    const double bound = tol * std::max(scale, 1.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = i + 1; j < m.cols; ++j)
            if (std::abs(m.at(i, j) - m.at(j, i)) > bound) return false;
    return true;
}

MvnSampler::MvnSampler(const Matrix& sigma, double rel_tol) {
    if (sigma.rows != sigma.cols)
        throw std::invalid_argument("mvn sampler: covariance must be square");
    if (!is_symmetric(sigma))
        throw std::invalid_argument("mvn sampler: covariance must be symmetric");
    dim_ = sigma.rows;
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            s(i, j) = sigma.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("mvn sampler: eigendecomposition failed");
    const Eigen::VectorXd evals = es.eigenvalues();
    const double max_eval = std::max(evals.maxCoeff(), 0.0);
    const double floor = -rel_tol * std::max(max_eval, 1e-300);
    for (Eigen::Index i = 0; i < n; ++i)
        if (evals(i) < floor)
            throw std::invalid_argument("mvn sampler: covariance is indefinite");
    Eigen::MatrixXd factor = es.eigenvectors();
    for (Eigen::Index j = 0; j < n; ++j)
        factor.col(j) *= std::sqrt(std::max(evals(j), 0.0));
    factor_.resize(dim_ * dim_);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            factor_[static_cast<std::size_t>(i) * dim_ + static_cast<std::size_t>(j)] = factor(i, j);
}

void MvnSampler::sample(Rng& rng, double* out) const {
    thread_local std::vector<double> z;
    z.resize(dim_);
    for (std::size_t j = 0; j < dim_; ++j) z[j] = rng.normal();
    for (std::size_t i = 0; i < dim_; ++i) {
        double acc = 0.0;
        const double* row = factor_.data() + i * dim_;
        for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * z[j];
        out[i] = acc;
    }
}

} // namespace seqmt
