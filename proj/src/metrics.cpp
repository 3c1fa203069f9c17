#include "seqmt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqmt {

LossSpec LossSpec::gmr(int m0) {
    if (m0 < 1) throw std::invalid_argument("gmr loss: m0 must be >= 1");
    return LossSpec(GmrLoss{m0});
}

LossSpec LossSpec::gfwer(int m1, int m2) {
    if (m1 < 1 || m2 < 1) throw std::invalid_argument("gfwer loss: m1, m2 must be >= 1");
    return LossSpec(GfwerLoss{m1, m2});
}

LossSpec LossSpec::zero_one() { return LossSpec(ZeroOneLoss{}); }

LossSpec LossSpec::matrix(HypothesisFamily family, std::vector<double> table) {
    if (family.kind() != FamilyKind::Explicit)
        throw std::invalid_argument("matrix loss: requires an explicit family");
    const auto members = family.enumerate();
    const std::size_t n = members.size();
    if (table.size() != n * n) throw std::invalid_argument("matrix loss: table size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i * n + i] != 0.0)
            throw std::invalid_argument("matrix loss: diagonal entries must be 0");
        for (std::size_t j = 0; j < n; ++j)
            if (table[i * n + j] < 0.0)
                throw std::invalid_argument("matrix loss: entries must be >= 0");
    }
    return LossSpec(MatrixLoss{std::move(family), std::move(table)});
}

namespace {

std::size_t member_index(const std::vector<SignalConfig>& members, SignalConfig c,
                         const char* what) {
    const auto it = std::lower_bound(members.begin(), members.end(), c);
    if (it == members.end() || *it != c)
        throw std::invalid_argument(std::string("matrix loss: ") + what + " " + c.to_string() +
                                    " not in family");
    return static_cast<std::size_t>(it - members.begin());
}

} // namespace

double LossSpec::value(SignalConfig D, SignalConfig A) const {
    if (const auto* g = std::get_if<GmrLoss>(&kind_))
        return gmr_event(D, A, g->m0) ? 1.0 : 0.0;
    if (const auto* g = std::get_if<GfwerLoss>(&kind_))
        return (gfwer_fp_event(D, A, g->m1) || gfwer_fn_event(D, A, g->m2)) ? 1.0 : 0.0;
    if (std::holds_alternative<ZeroOneLoss>(kind_)) return D != A ? 1.0 : 0.0;
    const auto& m = std::get<MatrixLoss>(kind_);
    const auto members = m.family.enumerate();
    const std::size_t i = member_index(members, D, "decision");
    const std::size_t j = member_index(members, A, "truth");
    return m.table[i * members.size() + j];
}

bool gmr_event(SignalConfig D, SignalConfig A, int m0) {
    return D.sym_diff(A).count() >= m0;
}

bool gfwer_fp_event(SignalConfig D, SignalConfig A, int m1) {
    return D.set_minus(A).count() >= m1;
}

bool gfwer_fn_event(SignalConfig D, SignalConfig A, int m2) {
    return A.set_minus(D).count() >= m2;
}

double fdp(SignalConfig D, SignalConfig A, int K) {
    (void)K;
    const int d = D.count();
    return static_cast<double>(D.set_minus(A).count()) / std::max(d, 1);
}

double fnp(SignalConfig D, SignalConfig A, int K) {
    const int dc = K - D.count();
    return static_cast<double>(A.set_minus(D).count()) / std::max(dc, 1);
}

std::pair<double, double> loss_extremes(const LossSpec& w, const HypothesisFamily& family) {
    const auto members = family.enumerate();
    double min_pos = std::numeric_limits<double>::infinity();
    double max_val = 0.0;
    for (const auto D : members) {
        for (const auto A : members) {
            const double v = w.value(D, A);
            if (v > 0.0 && v < min_pos) min_pos = v;
            if (v > max_val) max_val = v;
        }
    }
    if (!(max_val > 0.0))
        throw std::invalid_argument("loss_extremes: loss is identically zero on this family");
    return {min_pos, max_val};
}

std::vector<SignalConfig> unfavorable_set(const LossSpec& w, const HypothesisFamily& family,
                                          SignalConfig D) {
    std::vector<SignalConfig> out;
    for (const auto C : family.enumerate())
        if (w.value(D, C) > 0.0) out.push_back(C);
    return out;
}

bool check_condition_15(const LossSpec& w, const HypothesisFamily& family) {
    const auto members = family.enumerate();
    for (const auto D : members) {
        bool found = false;
        for (const auto C : members) {
            if (w.value(D, C) > 0.0) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

LossFn as_loss_fn(const LossSpec& w) {
    return [w](SignalConfig D, SignalConfig A) { return w.value(D, A); };
}

} // namespace seqmt
