#pragma once

// Closed-form Hausdorff dimension evaluators for the exponent level sets:
// the A/B/C quantities, the two-case split for the intersection set E, the
// asymptotic level set W/A, and the supremum reduction for the uniform set U.

#include <optional>
#include <string>

#include "betadyn/beta_system.hpp"

namespace betadyn {

enum class Regime {
    FullMeasure,   // vhat = v = 0: full Lebesgue measure, dimension 2
    CountableZero, // vhat > v/(1+v) (or vhat > 1 for U): countable, dimension 0
    CaseAB,        // beta1^{1+v} > beta2: min{A, B}
    CaseAC,        // beta1^{1+v} <= beta2: min{A, C}
    WuSmall,       // beta1^{1+v} < beta2 branch of the asymptotic set
    WuLarge,       // beta1^{1+v} >= beta2 branch (min of both expressions)
    Boundary,      // vhat = v/(1+v) exactly
};

const char* regime_name(Regime r);

struct ABCValues {
    double A = 0, B = 0, C = 0;
};

// The three display quantities at L = log_{beta2} beta1.
// Convention: at v = inf the ratio (v-vhat-vhat*v)/((1+v)(v-vhat)) tends to 0.
ABCValues abc(double vhat, double v, double L);

struct DimensionResult {
    double value = 0;
    Regime regime = Regime::FullMeasure;
    bool proved = true; // the lower-bound hypothesis log_{b2} b1 > (vhat/v)(1+v) held
    std::optional<double> argmax_v;
};

double log_ratio(const BetaSystem& sys1, const BetaSystem& sys2); // log_{beta2} beta1

// Certified sign of beta1^{1+v} - beta2 (exact where possible).
int compare_beta_power(const BetaSystem& sys1, const BetaSystem& sys2, double v);

DimensionResult dim_e(const BetaSystem& sys1, const BetaSystem& sys2, double vhat, double v);
DimensionResult dim_w(const BetaSystem& sys1, const BetaSystem& sys2, double v);
DimensionResult dim_u(const BetaSystem& sys1, const BetaSystem& sys2, double vhat);

} // namespace betadyn
