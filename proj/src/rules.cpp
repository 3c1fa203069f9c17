#include "seqmt/rules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace seqmt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SignalConfig sign_set(const LlrState& s) {
    SignalConfig d;
    for (std::size_t k = 0; k < s.lambda.size(); ++k)
        if (s.lambda[k] > 0.0) d.set(static_cast<int>(k));
    return d;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// ---------------------------------------------------------------------------

class SumIntersectionPolicy final : public Policy {
public:
    SumIntersectionPolicy(const SumIntersectionSpec& spec, const Problem& problem)
        : Policy(problem.K), b_(spec.b), m0_(spec.m0) {
        if (!(spec.b > 0.0)) throw std::invalid_argument("sum-intersection: b must be > 0");
        if (spec.m0 < 1 || spec.m0 > problem.K)
            throw std::invalid_argument("sum-intersection: m0 must be in [1, K]");
        abs_.resize(static_cast<std::size_t>(problem.K));
    }

    SignalConfig forced_decision() const override { return sign_set(state_); }

protected:
    std::optional<SignalConfig> evaluate() override {
        for (std::size_t k = 0; k < abs_.size(); ++k) abs_[k] = std::abs(state_.lambda[k]);
        std::sort(abs_.begin(), abs_.end());
        double sum = 0.0;
        for (int i = 0; i < m0_; ++i) sum += abs_[static_cast<std::size_t>(i)];
        if (sum >= b_) return sign_set(state_);
        return std::nullopt;
    }

private:
    double b_;
    int m0_;
    std::vector<double> abs_;
};

// ---------------------------------------------------------------------------

class IntersectionPolicy final : public Policy {
public:
    IntersectionPolicy(const IntersectionSpec& spec, const Problem& problem)
        : Policy(problem.K), a_(spec.a), b_(spec.b) {
        if (!(spec.a > 0.0) || !(spec.b > 0.0))
            throw std::invalid_argument("intersection: a, b must be > 0");
    }

    SignalConfig forced_decision() const override { return sign_set(state_); }

protected:
    std::optional<SignalConfig> evaluate() override {
        for (double l : state_.lambda)
            if (l > -a_ && l < b_) return std::nullopt;
        return sign_set(state_);
    }

private:
    double a_, b_;
};

// ---------------------------------------------------------------------------

class GapPolicy final : public Policy {
public:
    GapPolicy(const GapSpec& spec, const Problem& problem)
        : Policy(problem.K), b_(spec.b), m_(spec.m) {
        if (!(spec.b > 0.0)) throw std::invalid_argument("gap: b must be > 0");
        if (spec.m < 1 || spec.m >= problem.K)
            throw std::invalid_argument("gap: m must be in [1, K)");
        order_.resize(static_cast<std::size_t>(problem.K));
    }

    SignalConfig forced_decision() const override { return top_m(); }

protected:
    std::optional<SignalConfig> evaluate() override {
        sort_descending();
        const double gap = order_[static_cast<std::size_t>(m_ - 1)].first -
                           order_[static_cast<std::size_t>(m_)].first;
        if (gap >= b_) {
            SignalConfig d;
            for (int i = 0; i < m_; ++i) d.set(order_[static_cast<std::size_t>(i)].second);
            return d;
        }
        return std::nullopt;
    }

private:
    void sort_descending() const {
        for (std::size_t k = 0; k < state_.lambda.size(); ++k)
            order_[k] = {state_.lambda[k], static_cast<int>(k)};
        std::sort(order_.begin(), order_.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });
    }
    SignalConfig top_m() const {
        sort_descending();
        SignalConfig d;
        for (int i = 0; i < m_; ++i) d.set(order_[static_cast<std::size_t>(i)].second);
        return d;
    }

    double b_;
    int m_;
    mutable std::vector<std::pair<double, int>> order_;
};

// ---------------------------------------------------------------------------

class LeapPolicy final : public Policy {
public:
    LeapPolicy(const LeapSpec& spec, const Problem& problem)
        : Policy(problem.K), a_(spec.a), b_(spec.b), m1_(spec.m1), m2_(spec.m2) {
        if (!(spec.a > 0.0) || !(spec.b > 0.0))
            throw std::invalid_argument("leap: a, b must be > 0");
        if (spec.m1 < 1 || spec.m2 < 1 || spec.m1 + spec.m2 > problem.K)
            throw std::invalid_argument("leap: requires m1, m2 >= 1 and m1 + m2 <= K");
    }

    SignalConfig forced_decision() const override { return sign_set(state_); }

protected:
    std::optional<SignalConfig> evaluate() override {
        // Ordered positive LLRs and ordered absolute nonpositive LLRs,
        // weakest first; indices follow their statistic.
        pos_.clear();
        neg_.clear();
        for (std::size_t k = 0; k < state_.lambda.size(); ++k) {
            const double l = state_.lambda[k];
            if (l > 0.0)
                pos_.emplace_back(l, static_cast<int>(k));
            else
                neg_.emplace_back(-l, static_cast<int>(k));
        }
        auto weakest_first = [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return x.second < y.second;
        };
        std::sort(pos_.begin(), pos_.end(), weakest_first);
        std::sort(neg_.begin(), neg_.end(), weakest_first);

        const SignalConfig positives = sign_set(state_);
        SignalConfig decision;
        bool fired = false;

        for (int i = 0; i < m1_; ++i) {
            if (range_sum(pos_, 1, m1_ - i) >= b_ && range_sum(neg_, i + 1, i + m2_) >= a_) {
                // Flip the i weakest nonpositive streams to signal.
                SignalConfig d = positives;
                for (int j = 0; j < std::min<int>(i, static_cast<int>(neg_.size())); ++j)
                    d.set(neg_[static_cast<std::size_t>(j)].second);
                decision = decision.set_union(d);
                fired = true;
            }
        }
        for (int i = 1; i < m2_; ++i) {
            if (range_sum(pos_, i + 1, i + m1_) >= b_ && range_sum(neg_, 1, m2_ - i) >= a_) {
                // Flip the i weakest positive streams back to noise.
                SignalConfig d = positives;
                SignalConfig drop;
                for (int j = 0; j < std::min<int>(i, static_cast<int>(pos_.size())); ++j)
                    drop.set(pos_[static_cast<std::size_t>(j)].second);
                decision = decision.set_union(d.set_minus(drop));
                fired = true;
            }
        }
        if (fired) return decision;
        return std::nullopt;
    }

private:
    // Sum of the lo..hi (1-indexed, inclusive) weakest order statistics;
    // +inf when the range runs past the available statistics, which makes
    // that clause vacuously satisfied.
    static double range_sum(const std::vector<std::pair<double, int>>& v, int lo, int hi) {
        if (hi > static_cast<int>(v.size())) return kInf;
        double s = 0.0;
        for (int j = lo; j <= hi; ++j) s += v[static_cast<std::size_t>(j - 1)].first;
        return s;
    }

    double a_, b_;
    int m1_, m2_;
    std::vector<std::pair<double, int>> pos_, neg_;
};

// ---------------------------------------------------------------------------

// Shared tables for the posterior-based rules: family members, per-member
// stream indices, and the loss matrix over the family.
struct FamilyTables {
    std::vector<SignalConfig> members;
    std::vector<std::vector<int>> member_indices;
    std::vector<double> loss; // dense, loss[d * n + a]

    FamilyTables(const Problem& problem, const LossSpec& loss_spec) {
        if (problem.family.size() > (std::uint64_t{1} << 15))
            throw std::invalid_argument("posterior rule: family exceeds 2^15 members");
        members = problem.family.enumerate();
        const std::size_t n = members.size();
        member_indices.reserve(n);
        for (const auto m : members) member_indices.push_back(m.indices());
        loss.resize(n * n);
        for (std::size_t d = 0; d < n; ++d)
            for (std::size_t a = 0; a < n; ++a)
                loss[d * n + a] = loss_spec.value(members[d], members[a]);
    }

    std::size_t size() const { return members.size(); }

    // Cumulative log-likelihood of each member relative to the all-null
    // configuration.
    void subset_sums(const LlrState& s, std::vector<double>& out) const {
        out.resize(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            double acc = 0.0;
            for (int k : member_indices[i]) acc += s.lambda[static_cast<std::size_t>(k)];
            out[i] = acc;
        }
    }
};

class LordenPolicy final : public Policy {
public:
    LordenPolicy(const LordenSpec& spec, const Problem& problem)
        : Policy(problem.K), c_(spec.c), tables_(problem, spec.loss) {
        if (!(spec.c > 0.0)) throw std::invalid_argument("lorden: c must be > 0");
    }

    SignalConfig forced_decision() const override {
        return tables_.members[posterior_argmin().second];
    }

protected:
    std::optional<SignalConfig> evaluate() override {
        const auto [risk, d] = posterior_argmin();
        if (risk < c_) return tables_.members[d];
        return std::nullopt;
    }

private:
    std::pair<double, std::size_t> posterior_argmin() const {
        const std::size_t n = tables_.size();
        tables_.subset_sums(state_, s_);
        const double smax = *std::max_element(s_.begin(), s_.end());
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            pi_[i] = std::exp(s_[i] - smax);
            z += pi_[i];
        }
        for (std::size_t i = 0; i < n; ++i) pi_[i] /= z;

        double best = kInf;
        std::size_t arg = 0;
        for (std::size_t d = 0; d < n; ++d) {
            double risk = 0.0;
            const double* row = tables_.loss.data() + d * n;
            for (std::size_t a = 0; a < n; ++a) risk += pi_[a] * row[a];
            if (risk < best) {
                best = risk;
                arg = d;
            }
        }
        return {best, arg};
    }

    double c_;
    FamilyTables tables_;
    mutable std::vector<double> s_, pi_;
};

class TildeMsprtPolicy final : public Policy {
public:
    TildeMsprtPolicy(const TildeSpec& spec, const Problem& problem)
        : Policy(problem.K), log_inv_c_(-std::log(spec.c)), tables_(problem, spec.loss) {
        if (!(spec.c > 0.0)) throw std::invalid_argument("tilde rule: c must be > 0");
        const std::size_t n = tables_.size();
        unfavorable_.resize(n);
        for (std::size_t d = 0; d < n; ++d) {
            for (std::size_t a = 0; a < n; ++a)
                if (tables_.loss[d * n + a] > 0.0) unfavorable_[d].push_back(a);
            if (unfavorable_[d].empty())
                throw std::invalid_argument("tilde rule: member " + tables_.members[d].to_string() +
                                            " has an empty unfavorable set");
        }
    }

    SignalConfig forced_decision() const override {
        compute_worst_gaps();
        std::size_t arg = 0;
        for (std::size_t d = 1; d < worst_.size(); ++d)
            if (worst_[d] < worst_[arg]) arg = d;
        return tables_.members[arg];
    }

protected:
    std::optional<SignalConfig> evaluate() override {
        compute_worst_gaps();
        double min_worst = kInf;
        for (double w : worst_) min_worst = std::min(min_worst, w);
        // First pair (B, D) in canonical order whose likelihood-ratio margin
        // clears the threshold.
        for (std::size_t b = 0; b < s_.size(); ++b) {
            if (s_[b] - min_worst <= log_inv_c_) continue;
            for (std::size_t d = 0; d < worst_.size(); ++d)
                if (s_[b] - worst_[d] > log_inv_c_) return tables_.members[d];
        }
        return std::nullopt;
    }

private:
    // worst_[d] = largest cumulative log-likelihood among configurations
    // under which deciding d is wrong.
    void compute_worst_gaps() const {
        tables_.subset_sums(state_, s_);
        worst_.resize(unfavorable_.size());
        for (std::size_t d = 0; d < unfavorable_.size(); ++d) {
            double w = -kInf;
            for (std::size_t a : unfavorable_[d]) w = std::max(w, s_[a]);
            worst_[d] = w;
        }
    }

    double log_inv_c_;
    FamilyTables tables_;
    std::vector<std::vector<std::size_t>> unfavorable_;
    mutable std::vector<double> s_, worst_;
};

} // namespace

// ---------------------------------------------------------------------------

std::optional<SignalConfig> Policy::step(std::span<const double> increments) {
    if (stopped_) throw std::logic_error("step: policy has already stopped");
    state_.advance(increments);
    auto out = evaluate();
    if (out) stopped_ = true;
    return out;
}

void Policy::reset() {
    state_.reset();
    stopped_ = false;
}

std::unique_ptr<Policy> make_policy(const RuleSpec& rule, const Problem& problem) {
    return std::visit(
        [&](const auto& spec) -> std::unique_ptr<Policy> {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, SumIntersectionSpec>)
                return std::make_unique<SumIntersectionPolicy>(spec, problem);
            else if constexpr (std::is_same_v<T, LeapSpec>)
                return std::make_unique<LeapPolicy>(spec, problem);
            else if constexpr (std::is_same_v<T, IntersectionSpec>)
                return std::make_unique<IntersectionPolicy>(spec, problem);
            else if constexpr (std::is_same_v<T, GapSpec>)
                return std::make_unique<GapPolicy>(spec, problem);
            else if constexpr (std::is_same_v<T, LordenSpec>)
                return std::make_unique<LordenPolicy>(spec, problem);
            else
                return std::make_unique<TildeMsprtPolicy>(spec, problem);
        },
        rule);
}

std::string rule_name(const RuleSpec& rule) {
    return std::visit(
        [](const auto& spec) -> std::string {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, SumIntersectionSpec>) return "sum_intersection";
            else if constexpr (std::is_same_v<T, LeapSpec>) return "leap";
            else if constexpr (std::is_same_v<T, IntersectionSpec>) return "intersection";
            else if constexpr (std::is_same_v<T, GapSpec>) return "gap";
            else if constexpr (std::is_same_v<T, LordenSpec>) return "lorden";
            else return "tilde";
        },
        rule);
}

std::string rule_thresholds(const RuleSpec& rule) {
    return std::visit(
        [](const auto& spec) -> std::string {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, SumIntersectionSpec>)
                return "b=" + fmt(spec.b) + ";m0=" + std::to_string(spec.m0);
            else if constexpr (std::is_same_v<T, LeapSpec>)
                return "a=" + fmt(spec.a) + ";b=" + fmt(spec.b) + ";m1=" + std::to_string(spec.m1) +
                       ";m2=" + std::to_string(spec.m2);
            else if constexpr (std::is_same_v<T, IntersectionSpec>)
                return "a=" + fmt(spec.a) + ";b=" + fmt(spec.b);
            else if constexpr (std::is_same_v<T, GapSpec>)
                return "b=" + fmt(spec.b) + ";m=" + std::to_string(spec.m);
            else if constexpr (std::is_same_v<T, LordenSpec>)
                return "c=" + fmt(spec.c);
            else
                return "c=" + fmt(spec.c);
        },
        rule);
}

RunResult run_to_stop(Policy& policy, const Problem& problem, SignalConfig truth, int horizon,
                      Rng& rng) {
    if (horizon < 1) throw std::invalid_argument("run_to_stop: horizon must be >= 1");
    const std::uint64_t full =
        (problem.K == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << problem.K) - 1);
    if (truth.bits() & ~full) throw std::invalid_argument("run_to_stop: truth has bits >= K");

    policy.reset();
    std::vector<double> incr(static_cast<std::size_t>(problem.K));
    for (int t = 1; t <= horizon; ++t) {
        problem.sample_increments(truth, rng, incr);
        if (auto d = policy.step(incr)) return {t, *d, false, policy.state()};
    }
    return {horizon, policy.forced_decision(), true, policy.state()};
}

} // namespace seqmt
