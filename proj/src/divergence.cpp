#include "seqmt/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqmt {

double kl_configs(const Problem& problem, SignalConfig A, SignalConfig C) {
    double kl = 0.0;
    for (int k : A.set_minus(C).indices())
        kl += problem.streams[static_cast<std::size_t>(k)].info_numbers().i1;
    for (int k : C.set_minus(A).indices())
        kl += problem.streams[static_cast<std::size_t>(k)].info_numbers().i0;
    return kl;
}

double kl_A_D(const Problem& problem, const LossFn& loss, SignalConfig A, SignalConfig D) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto C : problem.family.enumerate()) {
        if (loss(D, C) <= 0.0) continue;
        any = true;
        best = std::min(best, kl_configs(problem, A, C));
    }
    if (!any)
        throw std::invalid_argument("kl_A_D: unfavorable set of " + D.to_string() + " is empty");
    return best;
}

double kl_A_D(const Problem& problem, const LossSpec& loss, SignalConfig A, SignalConfig D) {
    return kl_A_D(problem, as_loss_fn(loss), A, D);
}

MostFavorable most_favorable(const Problem& problem, const LossFn& loss, SignalConfig A,
                             TieTolerance tol) {
    const auto members = problem.family.enumerate();
    std::vector<double> kl(members.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < members.size(); ++i) {
        kl[i] = kl_A_D(problem, loss, A, members[i]);
        best = std::max(best, kl[i]);
    }
    MostFavorable out;
    out.kl_star = best;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (tol.equal(kl[i], best))
            out.maximizers.push_back(members[i]);
        else if (tol.near(kl[i], best))
            out.near_tie = true;
    }
    out.unique = out.maximizers.size() == 1;
    return out;
}

MostFavorable most_favorable(const Problem& problem, const LossSpec& loss, SignalConfig A,
                             TieTolerance tol) {
    return most_favorable(problem, as_loss_fn(loss), A, tol);
}

CriticalSet critical_set(const Problem& problem, const LossFn& loss, SignalConfig A,
                         TieTolerance tol) {
    const MostFavorable mf = most_favorable(problem, loss, A, tol);
    if (!mf.unique)
        throw std::invalid_argument("critical_set: most favorable subset at " + A.to_string() +
                                    " is not unique (" + std::to_string(mf.maximizers.size()) +
                                    " maximizers)");
    CriticalSet cs;
    cs.d_star = mf.maximizers.front();
    cs.kl_star = mf.kl_star;
    for (const auto C : problem.family.enumerate()) {
        if (loss(cs.d_star, C) <= 0.0) continue;
        if (tol.equal(kl_configs(problem, A, C), mf.kl_star)) cs.configs.push_back(C);
    }
    cs.r = static_cast<int>(cs.configs.size());
    return cs;
}

CriticalSet critical_set(const Problem& problem, const LossSpec& loss, SignalConfig A,
                         TieTolerance tol) {
    return critical_set(problem, as_loss_fn(loss), A, tol);
}

namespace {

// Sign of stream k's contribution to the LLR difference log f_A - log f_C:
// +1 on A\C, -1 on C\A, 0 elsewhere.
int side(SignalConfig A, SignalConfig C, int k) {
    const bool inA = A.test(k), inC = C.test(k);
    if (inA && !inC) return 1;
    if (!inA && inC) return -1;
    return 0;
}

} // namespace

Matrix sigma_matrix(const Problem& problem, const CriticalSet& cs, SignalConfig A, SigmaMode mode,
                    std::int64_t n_mc, Rng& rng) {
    const auto& configs = cs.configs;
    const std::size_t r = configs.size();
    Matrix sigma(r, r);

    if (mode == SigmaMode::Analytic) {
        if (!problem.all_gaussian())
            throw std::invalid_argument("sigma_matrix: analytic mode requires Gaussian streams");
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = i; j < r; ++j) {
                double cov = 0.0;
                for (int k = 0; k < problem.K; ++k) {
                    const int si = side(A, configs[i], k);
                    const int sj = side(A, configs[j], k);
                    if (si != 0 && sj != 0)
                        cov += si * sj * problem.streams[static_cast<std::size_t>(k)].llr_variance();
                }
                sigma.at(i, j) = cov;
                sigma.at(j, i) = cov;
            }
        }
        return sigma;
    }

    if (n_mc < 2) throw std::invalid_argument("sigma_matrix: monte carlo mode needs n_mc >= 2");
    std::vector<double> incr(static_cast<std::size_t>(problem.K));
    std::vector<double> rvec(r);
    std::vector<double> mean(r, 0.0);
    std::vector<double> cross(r * r, 0.0);
    for (std::int64_t n = 0; n < n_mc; ++n) {
        problem.sample_increments(A, rng, incr);
        for (std::size_t j = 0; j < r; ++j) {
            double v = 0.0;
            for (int k = 0; k < problem.K; ++k) {
                const int s = side(A, configs[j], k);
                if (s != 0) v += s * incr[static_cast<std::size_t>(k)];
            }
            rvec[j] = v;
        }
        for (std::size_t i = 0; i < r; ++i) {
            mean[i] += rvec[i];
            for (std::size_t j = i; j < r; ++j) cross[i * r + j] += rvec[i] * rvec[j];
        }
    }
    const double n = static_cast<double>(n_mc);
    for (std::size_t i = 0; i < r; ++i) mean[i] /= n;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i; j < r; ++j) {
            const double cov = (cross[i * r + j] - n * mean[i] * mean[j]) / (n - 1.0);
            sigma.at(i, j) = cov;
            sigma.at(j, i) = cov;
        }
    }
    return sigma;
}

Matrix sigma_matrix(const Problem& problem, const LossSpec& loss, SignalConfig A, SigmaMode mode,
                    std::int64_t n_mc, Rng& rng) {
    return sigma_matrix(problem, critical_set(problem, as_loss_fn(loss), A), A, mode, n_mc, rng);
}

HEstimate h_estimate(const Matrix& sigma, std::int64_t n_mc, Rng& rng) {
    if (sigma.rows != sigma.cols || sigma.rows == 0)
        throw std::invalid_argument("h_estimate: covariance must be square and nonempty");
    if (sigma.rows == 1) return {0.0, 0.0};
    if (n_mc < 1000) throw std::invalid_argument("h_estimate: n_mc must be >= 1000");

    const MvnSampler sampler(sigma);
    std::vector<double> draw(sigma.rows);
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t n = 0; n < n_mc; ++n) {
        sampler.sample(rng, draw.data());
        const double mx = *std::max_element(draw.begin(), draw.end());
        sum += mx;
        sumsq += mx * mx;
    }
    const double nn = static_cast<double>(n_mc);
    const double mean = sum / nn;
    const double var = std::max(0.0, (sumsq - nn * mean * mean) / (nn - 1.0));
    return {mean, std::sqrt(var / nn)};
}

DivergenceReport analyze_divergence(const Problem& problem, const LossSpec& loss, SignalConfig A,
                                    const DivergenceOptions& opts) {
    DivergenceReport rep;
    rep.A = A;
    const MostFavorable mf = most_favorable(problem, loss, A, opts.tol);
    rep.kl_star = mf.kl_star;
    rep.unique = mf.unique;
    rep.near_tie = mf.near_tie;
    rep.maximizers = mf.maximizers;
    if (!mf.unique) return rep;

    rep.d_star = mf.maximizers.front();
    const CriticalSet cs = critical_set(problem, as_loss_fn(loss), A, opts.tol);
    rep.critical_configs = cs.configs;
    rep.r = cs.r;

    Rng sigma_rng(opts.seed, 0x51);
    rep.sigma = sigma_matrix(problem, cs, A, opts.sigma_mode, opts.n_mc_sigma, sigma_rng);
    Rng h_rng(opts.seed, 0x48);
    const HEstimate h = h_estimate(rep.sigma, opts.n_mc_h, h_rng);
    rep.h = h.h;
    rep.h_se = h.se;
    return rep;
}

} // namespace seqmt
