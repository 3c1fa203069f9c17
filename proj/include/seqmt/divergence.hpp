#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "seqmt/matrix.hpp"
#include "seqmt/metrics.hpp"
#include "seqmt/model.hpp"

namespace seqmt {

// Tie tolerances shared by every argmax/level-set decision in this module.
// Values within rel 1e-9 (abs floor 1e-12) of the best are treated as equal;
// values within rel 1e-6 but outside the equality band raise the near_tie
// flag so near-degenerate instances are visible in reports.
struct TieTolerance {
    double rel_equal = 1e-9;
    double abs_equal = 1e-12;
    double rel_near = 1e-6;

    bool equal(double v, double best) const {
        return std::abs(v - best) <= std::max(abs_equal, rel_equal * std::abs(best));
    }
    bool near(double v, double best) const {
        return std::abs(v - best) <= rel_near * std::max(std::abs(best), 1.0);
    }
};

// KL divergence between the joint densities under configurations A and C.
double kl_configs(const Problem& problem, SignalConfig A, SignalConfig C);

// Smallest KL distance from A to a configuration under which D is wrong.
double kl_A_D(const Problem& problem, const LossFn& loss, SignalConfig A, SignalConfig D);
double kl_A_D(const Problem& problem, const LossSpec& loss, SignalConfig A, SignalConfig D);

struct MostFavorable {
    double kl_star = 0.0;
    std::vector<SignalConfig> maximizers; // canonical order
    bool unique = false;
    bool near_tie = false; // a non-maximizer came within the warning band
};

MostFavorable most_favorable(const Problem& problem, const LossFn& loss, SignalConfig A,
                             TieTolerance tol = {});
MostFavorable most_favorable(const Problem& problem, const LossSpec& loss, SignalConfig A,
                             TieTolerance tol = {});

struct CriticalSet {
    SignalConfig d_star;
    std::vector<SignalConfig> configs; // canonical order
    int r = 0;
    double kl_star = 0.0;
};

// Configurations in the unfavorable set of the most favorable subset that
// attain the minimal KL distance. Throws when the most favorable subset is
// not unique.
CriticalSet critical_set(const Problem& problem, const LossFn& loss, SignalConfig A,
                         TieTolerance tol = {});
CriticalSet critical_set(const Problem& problem, const LossSpec& loss, SignalConfig A,
                         TieTolerance tol = {});

enum class SigmaMode { Analytic, MonteCarlo };

// Covariance of the one-step LLR-difference vector over the critical set.
// Analytic mode requires all-Gaussian streams; Monte Carlo mode estimates it
// from n_mc sampled observation vectors under A.
Matrix sigma_matrix(const Problem& problem, const CriticalSet& cs, SignalConfig A,
                    SigmaMode mode, std::int64_t n_mc, Rng& rng);
Matrix sigma_matrix(const Problem& problem, const LossSpec& loss, SignalConfig A, SigmaMode mode,
                    std::int64_t n_mc, Rng& rng);

struct HEstimate {
    double h = 0.0;
    double se = 0.0;
};

// Monte Carlo estimate of E[max component] of N(0, sigma). Exact (0, 0) for
// 1x1 matrices, no sampling.
HEstimate h_estimate(const Matrix& sigma, std::int64_t n_mc, Rng& rng);

struct DivergenceReport {
    SignalConfig A;
    double kl_star = 0.0;
    SignalConfig d_star;
    bool unique = false;
    bool near_tie = false;
    std::vector<SignalConfig> maximizers;
    std::vector<SignalConfig> critical_configs;
    int r = 0;
    Matrix sigma;
    double h = 0.0;
    double h_se = 0.0;
};

struct DivergenceOptions {
    SigmaMode sigma_mode = SigmaMode::Analytic;
    std::int64_t n_mc_sigma = 100000;
    std::int64_t n_mc_h = 1000000;
    std::uint64_t seed = 1;
    TieTolerance tol{};
};

// Full analysis at A: most favorable subset, critical set, covariance, and
// the Gaussian-max constant. sigma/h are filled only when unique.
DivergenceReport analyze_divergence(const Problem& problem, const LossSpec& loss, SignalConfig A,
                                    const DivergenceOptions& opts = {});

} // namespace seqmt
