#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "seqmt/rng.hpp"

namespace seqmt {

// ---------------------------------------------------------------------------
// Streams
// ---------------------------------------------------------------------------

// Gaussian stream: N(0, sigma^2) under the null, N(mu, sigma^2) under the
// alternative.
struct GaussianMeanShift {
    double mu = 1.0;
    double sigma = 1.0;
};

// Synthetic stream whose LLR increment is the constant d0 under the null and
// d1 under the alternative; stopping times become exact integers.
struct DeterministicDrift {
    double d0 = -0.5;
    double d1 = 0.5;
};

struct InfoNumbers {
    double i0 = 0.0; // KL(null || alternative)
    double i1 = 0.0; // KL(alternative || null)
};

class StreamSpec {
public:
    static StreamSpec gaussian(double mu, double sigma);
    static StreamSpec deterministic(double d0, double d1);

    bool is_gaussian() const { return std::holds_alternative<GaussianMeanShift>(kind_); }
    const GaussianMeanShift& gaussian_params() const;
    const DeterministicDrift& deterministic_params() const;

    InfoNumbers info_numbers() const;

    // Single-observation log(f1/f0); defined for Gaussian streams only.
    double llr_increment(double x) const;

    // Draws one observation under the indicated hypothesis and returns its
    // LLR increment. Mean is -i0 under the null, +i1 under the alternative.
    double sample_llr_increment(bool under_alternative, Rng& rng) const;

    // Per-observation variance of the LLR increment (same under both
    // hypotheses for the models supported here).
    double llr_variance() const;

private:
    explicit StreamSpec(std::variant<GaussianMeanShift, DeterministicDrift> kind)
        : kind_(std::move(kind)) {}
    std::variant<GaussianMeanShift, DeterministicDrift> kind_;
};

// ---------------------------------------------------------------------------
// Signal subsets
// ---------------------------------------------------------------------------

// Subset of stream indices 0..K-1 stored as a bitmask. The canonical order
// used everywhere ties must be broken is the integer value of the mask.
class SignalConfig {
public:
    SignalConfig() = default;
    explicit SignalConfig(std::uint64_t bits) : bits_(bits) {}
    static SignalConfig from_indices(std::span<const int> indices);
    static SignalConfig from_indices(std::initializer_list<int> indices);

    std::uint64_t bits() const { return bits_; }
    bool test(int k) const { return (bits_ >> k) & 1u; }
    void set(int k) { bits_ |= (std::uint64_t{1} << k); }
    int count() const { return __builtin_popcountll(bits_); }
    bool empty() const { return bits_ == 0; }

    SignalConfig set_minus(SignalConfig other) const { return SignalConfig(bits_ & ~other.bits_); }
    SignalConfig sym_diff(SignalConfig other) const { return SignalConfig(bits_ ^ other.bits_); }
    SignalConfig set_union(SignalConfig other) const { return SignalConfig(bits_ | other.bits_); }
    SignalConfig intersect(SignalConfig other) const { return SignalConfig(bits_ & other.bits_); }
    SignalConfig complement(int K) const;

    std::vector<int> indices() const;
    std::string to_string() const; // e.g. "{0,2}"

    friend bool operator==(SignalConfig a, SignalConfig b) { return a.bits_ == b.bits_; }
    friend bool operator!=(SignalConfig a, SignalConfig b) { return a.bits_ != b.bits_; }
    friend bool operator<(SignalConfig a, SignalConfig b) { return a.bits_ < b.bits_; }

private:
    std::uint64_t bits_ = 0;
};

// ---------------------------------------------------------------------------
// Hypothesis families
// ---------------------------------------------------------------------------

enum class FamilyKind { AllSubsets, FixedSize, Bounded, Explicit };

// The admissible collection of signal subsets.
class HypothesisFamily {
public:
    static HypothesisFamily all_subsets(int K);
    static HypothesisFamily fixed_size(int K, int m);
    static HypothesisFamily bounded(int K, int l, int u);
    static HypothesisFamily explicit_list(int K, std::vector<SignalConfig> members);

    FamilyKind kind() const { return kind_; }
    int K() const { return K_; }
    int fixed_m() const { return m_; }
    int bound_l() const { return l_; }
    int bound_u() const { return u_; }

    // Exact member count, computed without enumeration.
    std::uint64_t size() const;

    bool contains(SignalConfig c) const;

    // Members in canonical order. AllSubsets enumeration is refused for
    // K > 25 to bound memory.
    std::vector<SignalConfig> enumerate() const;

private:
    HypothesisFamily() = default;
    FamilyKind kind_ = FamilyKind::AllSubsets;
    int K_ = 0;
    int m_ = 0, l_ = 0, u_ = 0;
    std::vector<SignalConfig> members_; // Explicit only; deduplicated, sorted
};

// ---------------------------------------------------------------------------
// Problem instance
// ---------------------------------------------------------------------------

struct Problem {
    int K = 0;
    std::vector<StreamSpec> streams;
    HypothesisFamily family = HypothesisFamily::all_subsets(1);

    Problem(int K_, std::vector<StreamSpec> streams_, HypothesisFamily family_);

    bool all_gaussian() const;
    // Per-step LLR increments for every stream under the given truth.
    void sample_increments(SignalConfig truth, Rng& rng, std::span<double> out) const;
};

// Convenience constructors for common test setups.
Problem homogeneous_gaussian_problem(int K, double mu, double sigma, HypothesisFamily family);

// ---------------------------------------------------------------------------
// Cumulative LLR state
// ---------------------------------------------------------------------------

struct LlrState {
    int t = 0;
    std::vector<double> lambda;

    explicit LlrState(int K) : lambda(static_cast<std::size_t>(K), 0.0) {}
    void advance(std::span<const double> increments);
    void reset();
};

// Exact binomial coefficient; requires the result to fit in 64 bits.
std::uint64_t binom(int n, int k);
double log_binom(int n, int k);

} // namespace seqmt
