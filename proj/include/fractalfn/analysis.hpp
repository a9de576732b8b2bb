#pragma once

#include <span>
#include <string>
#include <vector>

#include "fractalfn/rb.hpp"

// Sufficient-condition checkers for membership of the fixed point in the
// classical function spaces, plus empirical norm estimators to validate them.
// Every left-hand side is assembled from certified upper brackets of the
// scale-function sup norms, so a reported pass is conservative.

namespace fractalfn {

enum class SpaceTag { Lp, Sup, Holder, Cn, Sobolev };

std::string to_string(SpaceTag tag);

struct ConditionReport {
    SpaceTag space = SpaceTag::Sup;
    double p = 0.0;  // infinity() for the sup branch
    double s_exp = 0.0;
    int n = 0;
    int m = 0;
    double lhs = 0.0;
    double threshold = 1.0;
    bool pass = false;
    std::string branch;
    std::vector<std::string> per_piece;

    // flat key-value block, one line per field plus the per-piece lines
    std::string to_text() const;
};

// sum a_i ||S_i||^p < 1 for p in (0,1), its p-th root for p in [1,inf),
// max ||S_i|| for p = inf
ConditionReport check_Lp(const RBSystem& sys, double p);

// 2^s max_i ||S_i|| < 1 on the binary partition
ConditionReport check_holder(const RBSystem& sys, double s_exp);

// 2^n max_i max_k sum_l C(n-k+l, l) ||D^l S_i|| < 1 on the binary partition
ConditionReport check_Cn(const RBSystem& sys, int n);

// (max_k sum_i |s_i|^p a_i^(1-kp))^(1/p) < 1, constant scalings; a_i may
// exceed one
ConditionReport check_sobolev(const PartitionSpec& partition, std::span<const double> s_values,
                              int m, double p);

struct NormParams {
    double p = 2.0;
    double s = 0.5;
    int n = 0;
    int m = 0;
};

// L^p by composite trapezoid, sup by grid max, the Holder seminorm by pair
// quotients (strided beyond 1e4 points, a lower bound), C^n and W^(m,p) from
// finite-difference derivatives
double estimate_norm(const SampledFunction& f, SpaceTag space, const NormParams& params = {});

// seminorm bound for the fixed point,
//   2^s sum_i |lambda_i|_{C^s} / (1 - 2^s max ||S_i||),
// with certified upper bounds for the lambda seminorms; throws when
// check_holder fails
double holder_bound(const RBSystem& sys, double s_exp);

}  // namespace fractalfn
