#pragma once

// Desk-scale numerical corroboration of the dimension formulas: one-generation
// covering counts for the asymptotic level set under both covering strategies,
// and exact counts of word pairs with forced zero blocks.

#include <utility>
#include <vector>

#include "betadyn/beta_system.hpp"
#include "betadyn/words.hpp"

namespace betadyn {

enum class CoverStrategy {
    SmallSquare, // side beta2^{-n(1+v)}
    LargeSquare, // side beta1^{-n(1+v)}
};

struct CoverReport {
    long n = 0;
    CoverStrategy strategy = CoverStrategy::SmallSquare;
    Integer count;
    double exponent = 0; // log(count) / (n (1+v) log(1/side))
};

CoverReport cover_w(const BetaSystem& sys1, const BetaSystem& sys2, double v, long n,
                    CoverStrategy strategy, const Budget& budget = {});

struct BlockProfile {
    // forced zeros at positions n_i+1 .. m_i (1-indexed), strictly interleaved
    std::vector<std::pair<long, long>> blocks;
};

// Exact number of pairs in Sigma1^n x Sigma2^n whose digits vanish on every
// forced block.
Integer count_blocked(const BetaSystem& sys1, const BetaSystem& sys2, const BlockProfile& profile,
                      long n, const Budget& budget = {});

} // namespace betadyn
