#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "seqmt/model.hpp"

namespace seqmt {

// ---------------------------------------------------------------------------
// Loss functions W(D | A): the loss of declaring D when the truth is A.
// ---------------------------------------------------------------------------

struct GmrLoss {
    int m0 = 1; // indicator of >= m0 total mistakes
};

struct GfwerLoss {
    int m1 = 1; // false-positive count threshold
    int m2 = 1; // false-negative count threshold
};

struct ZeroOneLoss {};

// General loss table over an explicit family, keyed by canonical member
// order: table[idx(D) * n + idx(A)].
struct MatrixLoss {
    HypothesisFamily family;
    std::vector<double> table;
};

class LossSpec {
public:
    static LossSpec gmr(int m0);
    static LossSpec gfwer(int m1, int m2);
    static LossSpec zero_one();
    static LossSpec matrix(HypothesisFamily family, std::vector<double> table);

    double value(SignalConfig D, SignalConfig A) const;

    bool is_gmr() const { return std::holds_alternative<GmrLoss>(kind_); }
    bool is_gfwer() const { return std::holds_alternative<GfwerLoss>(kind_); }
    bool is_zero_one() const { return std::holds_alternative<ZeroOneLoss>(kind_); }
    bool is_matrix() const { return std::holds_alternative<MatrixLoss>(kind_); }
    const GmrLoss& gmr_params() const { return std::get<GmrLoss>(kind_); }
    const GfwerLoss& gfwer_params() const { return std::get<GfwerLoss>(kind_); }
    const MatrixLoss& matrix_params() const { return std::get<MatrixLoss>(kind_); }

private:
    explicit LossSpec(std::variant<GmrLoss, GfwerLoss, ZeroOneLoss, MatrixLoss> kind)
        : kind_(std::move(kind)) {}
    std::variant<GmrLoss, GfwerLoss, ZeroOneLoss, MatrixLoss> kind_;
};

inline double loss_value(const LossSpec& w, SignalConfig D, SignalConfig A) {
    return w.value(D, A);
}

// Error events underlying the loss indicators.
bool gmr_event(SignalConfig D, SignalConfig A, int m0);
bool gfwer_fp_event(SignalConfig D, SignalConfig A, int m1);
bool gfwer_fn_event(SignalConfig D, SignalConfig A, int m2);

// False discovery / non-discovery proportions.
double fdp(SignalConfig D, SignalConfig A, int K);
double fnp(SignalConfig D, SignalConfig A, int K);

// Smallest nonzero and largest entries of W over family x family.
// Throws if the loss is identically zero on the family.
std::pair<double, double> loss_extremes(const LossSpec& w, const HypothesisFamily& family);

// H_D: members of the family under which declaring D incurs positive loss.
std::vector<SignalConfig> unfavorable_set(const LossSpec& w, const HypothesisFamily& family,
                                          SignalConfig D);

// True iff every member of the family has a nonempty unfavorable set.
bool check_condition_15(const LossSpec& w, const HypothesisFamily& family);

// Generic loss callable; lets the divergence machinery run on ad-hoc
// indicator losses without building a table.
using LossFn = std::function<double(SignalConfig D, SignalConfig A)>;

LossFn as_loss_fn(const LossSpec& w);

} // namespace seqmt
