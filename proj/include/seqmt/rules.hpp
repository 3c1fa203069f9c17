#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "seqmt/metrics.hpp"
#include "seqmt/model.hpp"

namespace seqmt {

// ---------------------------------------------------------------------------
// Rule configurations
// ---------------------------------------------------------------------------

// Stop when the sum of the m0 smallest absolute LLRs reaches b; declare the
// streams with positive LLRs.
struct SumIntersectionSpec {
    double b = 1.0;
    int m0 = 1;
};

// Order-statistic rule for the two-sided generalized familywise criteria.
struct LeapSpec {
    double a = 1.0;
    double b = 1.0;
    int m1 = 1;
    int m2 = 1;
};

// Stop when every LLR has left (-a, b); declare the positive streams.
struct IntersectionSpec {
    double a = 1.0;
    double b = 1.0;
};

// Stop when the gap between the (K-m+1)-th and (K-m)-th ordered LLRs reaches
// b; declare the m largest.
struct GapSpec {
    double b = 1.0;
    int m = 1;
};

// Stop when some decision's posterior expected loss drops strictly below c;
// declare the posterior argmin.
struct LordenSpec {
    double c = 0.01;
    LossSpec loss = LossSpec::zero_one();
};

// Stop when some configuration dominates every unfavorable alternative of
// some decision by a likelihood-ratio factor exceeding 1/c.
struct TildeSpec {
    double c = 0.01;
    LossSpec loss = LossSpec::zero_one();
};

using RuleSpec = std::variant<SumIntersectionSpec, LeapSpec, IntersectionSpec, GapSpec, LordenSpec,
                              TildeSpec>;

std::string rule_name(const RuleSpec& rule);
std::string rule_thresholds(const RuleSpec& rule); // compact "b=..." style label

// ---------------------------------------------------------------------------
// Policies
// ---------------------------------------------------------------------------

class Policy {
public:
    virtual ~Policy() = default;

    // Feeds one vector of per-stream LLR increments. Returns the decision
    // when the rule stops, nullopt to continue. Throws if already stopped.
    std::optional<SignalConfig> step(std::span<const double> increments);

    // Decision the rule would make if forced to decide now (horizon cutoff).
    virtual SignalConfig forced_decision() const = 0;

    virtual void reset();

    bool stopped() const { return stopped_; }
    const LlrState& state() const { return state_; }

protected:
    explicit Policy(int K) : state_(K) {}
    virtual std::optional<SignalConfig> evaluate() = 0; // called after state update
    LlrState state_;
    bool stopped_ = false;
};

// Builds a fresh policy for the given rule. Lorden and the likelihood-ratio
// variant enumerate the problem family once here (guarded at 2^15 members).
std::unique_ptr<Policy> make_policy(const RuleSpec& rule, const Problem& problem);

// ---------------------------------------------------------------------------
// Path execution
// ---------------------------------------------------------------------------

struct RunResult {
    int t = 0;
    SignalConfig decision;
    bool truncated = false;
    LlrState final_state{1};
};

// Samples increments under the truth until the policy stops or the horizon
// is hit; truncated runs report the forced decision.
RunResult run_to_stop(Policy& policy, const Problem& problem, SignalConfig truth, int horizon,
                      Rng& rng);

} // namespace seqmt
