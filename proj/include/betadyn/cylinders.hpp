#pragma once

// Exact cylinder intervals I_n(w) = [value(w), value(successor(w))), their
// lengths, fullness, and the product law for full prefixes.

#include <optional>
#include <vector>

#include "betadyn/beta_system.hpp"
#include "betadyn/words.hpp"

namespace betadyn {

struct Cylinder {
    Word word;
    Scalar left;
    Scalar right;
    long order = 0;
    Scalar length() const { return right - left; }
};

// Requires w admissible; exact base.
Cylinder cylinder(const BetaSystem& sys, const Word& w);

// Exact endpoints for certified comparisons.
struct ExactCylinder {
    Word word;
    FieldElement left;
    FieldElement right;
    long order = 0;
    FieldElement length() const { return right - left; }
};
ExactCylinder exact_cylinder(const BetaSystem& sys, const Word& w);

// |I_n(w)| == beta^-n exactly?
bool is_full(const BetaSystem& sys, const Word& w);

// Checks Lemma-style closure: full_w full (PreconditionViolated otherwise),
// returns admissibility of full_w . any_w, and verifies the exact product law
// |I(full_w any_w)| = |I(full_w)| * |I(any_w)|.
bool full_concat_check(const BetaSystem& sys, const Word& full_w, const Word& any_w);

// All order-n cylinders in lexicographic order.
std::vector<ExactCylinder> cylinders_of_order(const BetaSystem& sys, long n,
                                              const Budget& budget = {});

} // namespace betadyn
