#include "seqmt/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqmt {

StreamSpec StreamSpec::gaussian(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian stream: sigma must be > 0");
    if (mu == 0.0) throw std::invalid_argument("gaussian stream: mu must be nonzero");
    return StreamSpec(GaussianMeanShift{mu, sigma});
}

StreamSpec StreamSpec::deterministic(double d0, double d1) {
    if (!(d0 < 0.0) || !(d1 > 0.0))
        throw std::invalid_argument("deterministic stream: requires d0 < 0 < d1");
    return StreamSpec(DeterministicDrift{d0, d1});
}

const GaussianMeanShift& StreamSpec::gaussian_params() const {
    return std::get<GaussianMeanShift>(kind_);
}

const DeterministicDrift& StreamSpec::deterministic_params() const {
    return std::get<DeterministicDrift>(kind_);
}

InfoNumbers StreamSpec::info_numbers() const {
    if (is_gaussian()) {
        const auto& g = gaussian_params();
        const double i = g.mu * g.mu / (2.0 * g.sigma * g.sigma);
        return {i, i};
    }
    const auto& d = deterministic_params();
    return {-d.d0, d.d1};
}

double StreamSpec::llr_increment(double x) const {
    if (!is_gaussian())
        throw std::invalid_argument("llr_increment: deterministic streams carry no observation");
    const auto& g = gaussian_params();
    const double s2 = g.sigma * g.sigma;
    return (g.mu / s2) * x - g.mu * g.mu / (2.0 * s2);
}

double StreamSpec::sample_llr_increment(bool under_alternative, Rng& rng) const {
    if (is_gaussian()) {
        const auto& g = gaussian_params();
        const double x = rng.normal(under_alternative ? g.mu : 0.0, g.sigma);
        return llr_increment(x);
    }
    const auto& d = deterministic_params();
    return under_alternative ? d.d1 : d.d0;
}

double StreamSpec::llr_variance() const {
    if (is_gaussian()) {
        const auto& g = gaussian_params();
        return g.mu * g.mu / (g.sigma * g.sigma);
    }
    return 0.0;
}

SignalConfig SignalConfig::from_indices(std::span<const int> indices) {
    SignalConfig c;
    for (int k : indices) {
        if (k < 0 || k >= 64) throw std::invalid_argument("stream index out of range");
        c.set(k);
    }
    return c;
}

SignalConfig SignalConfig::from_indices(std::initializer_list<int> indices) {
    return from_indices(std::span<const int>(indices.begin(), indices.size()));
}

SignalConfig SignalConfig::complement(int K) const {
    const std::uint64_t full = (K == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << K) - 1);
    return SignalConfig(full & ~bits_);
}

std::vector<int> SignalConfig::indices() const {
    std::vector<int> out;
    for (int k = 0; k < 64; ++k)
        if (test(k)) out.push_back(k);
    return out;
}

std::string SignalConfig::to_string() const {
    std::string s = "{";
    bool first = true;
    for (int k : indices()) {
        if (!first) s += ',';
        s += std::to_string(k);
        first = false;
    }
    return s + "}";
}

namespace {

void check_K(int K) {
    if (K < 1 || K > 64) throw std::invalid_argument("family: K must be in [1, 64]");
}

} // namespace

HypothesisFamily HypothesisFamily::all_subsets(int K) {
    check_K(K);
    HypothesisFamily f;
    f.kind_ = FamilyKind::AllSubsets;
    f.K_ = K;
    return f;
}

HypothesisFamily HypothesisFamily::fixed_size(int K, int m) {
    check_K(K);
    if (m < 1 || m >= K) throw std::invalid_argument("fixed-size family: requires 1 <= m < K");
    HypothesisFamily f;
    f.kind_ = FamilyKind::FixedSize;
    f.K_ = K;
    f.m_ = m;
    return f;
}

HypothesisFamily HypothesisFamily::bounded(int K, int l, int u) {
    check_K(K);
    if (l < 0 || l >= u || u > K) throw std::invalid_argument("bounded family: requires 0 <= l < u <= K");
    HypothesisFamily f;
    f.kind_ = FamilyKind::Bounded;
    f.K_ = K;
    f.l_ = l;
    f.u_ = u;
    return f;
}

HypothesisFamily HypothesisFamily::explicit_list(int K, std::vector<SignalConfig> members) {
    check_K(K);
    if (members.empty()) throw std::invalid_argument("explicit family: must be nonempty");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    const std::uint64_t full = (K == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << K) - 1);
    for (auto c : members)
        if (c.bits() & ~full) throw std::invalid_argument("explicit family: member has bits >= K");
    HypothesisFamily f;
    f.kind_ = FamilyKind::Explicit;
    f.K_ = K;
    f.members_ = std::move(members);
    return f;
}

std::uint64_t HypothesisFamily::size() const {
    switch (kind_) {
        case FamilyKind::AllSubsets:
            return std::uint64_t{1} << K_;
        case FamilyKind::FixedSize:
            return binom(K_, m_);
        case FamilyKind::Bounded: {
            std::uint64_t n = 0;
            for (int j = l_; j <= u_; ++j) n += binom(K_, j);
            return n;
        }
        case FamilyKind::Explicit:
            return members_.size();
    }
    return 0;
}

bool HypothesisFamily::contains(SignalConfig c) const {
    const std::uint64_t full = (K_ == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << K_) - 1);
    if (c.bits() & ~full) return false;
    switch (kind_) {
        case FamilyKind::AllSubsets:
            return true;
        case FamilyKind::FixedSize:
            return c.count() == m_;
        case FamilyKind::Bounded:
            return c.count() >= l_ && c.count() <= u_;
        case FamilyKind::Explicit:
            return std::binary_search(members_.begin(), members_.end(), c);
    }
    return false;
}

std::vector<SignalConfig> HypothesisFamily::enumerate() const {
    if (kind_ == FamilyKind::Explicit) return members_;
    if (kind_ == FamilyKind::AllSubsets && K_ > 25)
        throw std::invalid_argument("enumerate: refusing 2^K members for K > 25");
    if (K_ > 25 && kind_ == FamilyKind::Bounded && size() > (std::uint64_t{1} << 25))
        throw std::invalid_argument("enumerate: family too large");
    std::vector<SignalConfig> out;
    out.reserve(static_cast<std::size_t>(size()));
    const std::uint64_t total = std::uint64_t{1} << K_;
    for (std::uint64_t b = 0; b < total; ++b) {
        SignalConfig c(b);
        if (contains(c)) out.push_back(c);
    }
    return out;
}

Problem::Problem(int K_, std::vector<StreamSpec> streams_, HypothesisFamily family_)
    : K(K_), streams(std::move(streams_)), family(std::move(family_)) {
    if (K < 1 || K > 64) throw std::invalid_argument("problem: K must be in [1, 64]");
    if (static_cast<int>(streams.size()) != K)
        throw std::invalid_argument("problem: streams length must equal K");
    if (family.K() != K) throw std::invalid_argument("problem: family K mismatch");
}

bool Problem::all_gaussian() const {
    for (const auto& s : streams)
        if (!s.is_gaussian()) return false;
    return true;
}

void Problem::sample_increments(SignalConfig truth, Rng& rng, std::span<double> out) const {
    for (int k = 0; k < K; ++k)
        out[static_cast<std::size_t>(k)] = streams[static_cast<std::size_t>(k)].sample_llr_increment(truth.test(k), rng);
}

Problem homogeneous_gaussian_problem(int K, double mu, double sigma, HypothesisFamily family) {
    std::vector<StreamSpec> streams;
    streams.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) streams.push_back(StreamSpec::gaussian(mu, sigma));
    return Problem(K, std::move(streams), std::move(family));
}

void LlrState::advance(std::span<const double> increments) {
    if (increments.size() != lambda.size())
        throw std::invalid_argument("advance: increment length mismatch");
    for (std::size_t k = 0; k < lambda.size(); ++k) lambda[k] += increments[k];
    ++t;
}

void LlrState::reset() {
    t = 0;
    std::fill(lambda.begin(), lambda.end(), 0.0);
}

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // r * (n - k + i) / i is always integral at this point
        r = r / static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - k + i) +
            r % static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

double log_binom(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("log_binom: k out of range");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

} // namespace seqmt
