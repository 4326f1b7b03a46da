#include "betadyn/estimation.hpp"

#include <cmath>

namespace betadyn {

namespace {

double log_of_integer(const Integer& z) {
    signed long e;
    double d = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(d) + static_cast<double>(e) * std::log(2.0);
}

// ceil((beta2/beta1)^{n(1+v)}) as an exact integer, evaluated with upward
// rounding at generous precision; equal bases give exactly 1.
Integer side_ratio_ceil(const BetaSystem& sys1, const BetaSystem& sys2, double v, long n) {
    Scalar b1 = sys1.beta(256), b2 = sys2.beta(256);
    auto c = b1.compare(b2);
    if (c.has_value() && *c == 0) return Integer(1);
    if (!c.has_value()) return Integer(1); // enclosures overlap: treat as equal bases
    double e = static_cast<double>(n) * (1 + v);
    mpfr_t l1, l2, r;
    mpfr_inits2(512, l1, l2, r, (mpfr_ptr) nullptr);
    auto set_up = [&](const Scalar& s, mpfr_ptr t, mpfr_rnd_t rnd) {
        if (s.is_exact()) mpfr_set_q(t, s.rational().get_mpq_t(), rnd);
        else mpfr_set(t, rnd == MPFR_RNDU ? s.upper().get() : s.lower().get(), rnd);
    };
    set_up(b2, l2, MPFR_RNDU);
    set_up(b1, l1, MPFR_RNDD);
    mpfr_div(r, l2, l1, MPFR_RNDU);
    mpfr_log(r, r, MPFR_RNDU);
    mpfr_mul_d(r, r, e, MPFR_RNDU);
    mpfr_exp(r, r, MPFR_RNDU);
    mpfr_ceil(r, r);
    Integer out;
    mpfr_get_z(out.get_mpz_t(), r, MPFR_RNDN);
    mpfr_clears(l1, l2, r, (mpfr_ptr) nullptr);
    if (out < 1) out = 1;
    return out;
}

} // namespace

CoverReport cover_w(const BetaSystem& sys1, const BetaSystem& sys2, double v, long n,
                    CoverStrategy strategy, const Budget& budget) {
    if (n < 1) throw DomainError("generation must be positive");
    if (!(v > 0)) throw DomainError("v must be positive");
    CoverReport rep;
    rep.n = n;
    rep.strategy = strategy;
    Integer c1 = count_words(sys1, n, CountMethod::Auto, budget);
    Integer c2 = count_words(sys2, n, CountMethod::Auto, budget);
    double side_log; // log(1/side) without the n(1+v) factor
    if (strategy == CoverStrategy::SmallSquare) {
        rep.count = c1 * c2 * side_ratio_ceil(sys1, sys2, v, n);
        side_log = std::log(sys2.beta_d());
    } else {
        rep.count = c1 * c2;
        side_log = std::log(sys1.beta_d());
    }
    rep.exponent = log_of_integer(rep.count) / (static_cast<double>(n) * (1 + v) * side_log);
    return rep;
}

namespace {

// Count words of length n with forced zeros, via the tie-state walk; exact
// for any base (needs n+1 digits of eps*).
Integer count_blocked_one(const BetaSystem& sys, const std::vector<bool>& forced, long n) {
    std::vector<int> eps = sys.epsilon_star(n + 1);
    std::vector<Integer> dp(static_cast<size_t>(n) + 2, Integer(0));
    dp[0] = 1;
    for (long pos = 0; pos < n; ++pos) {
        std::vector<Integer> next(static_cast<size_t>(n) + 2, Integer(0));
        for (long t = 0; t <= pos; ++t) {
            const Integer& ways = dp[static_cast<size_t>(t)];
            if (ways == 0) continue;
            int bound = eps[static_cast<size_t>(t)];
            if (forced[static_cast<size_t>(pos)]) {
                // only digit 0
                if (bound == 0) next[static_cast<size_t>(t + 1)] += ways;
                else next[0] += ways;
            } else {
                if (bound > 0) next[0] += ways * bound;
                next[static_cast<size_t>(t + 1)] += ways;
            }
        }
        dp = std::move(next);
    }
    Integer total = 0;
    for (const auto& x : dp) total += x;
    return total;
}

} // namespace

Integer count_blocked(const BetaSystem& sys1, const BetaSystem& sys2, const BlockProfile& profile,
                      long n, const Budget& budget) {
    if (n < 0) throw DomainError("horizon must be nonnegative");
    if (n > 200000) throw BudgetExceededError("blocked-count horizon too large");
    (void)budget;
    std::vector<bool> forced(static_cast<size_t>(n), false);
    long prev_m = 0;
    for (auto [ni, mi] : profile.blocks) {
        if (ni < prev_m || mi <= ni || mi > n)
            throw DomainError("profile blocks must satisfy n_i < m_i <= n and be interleaved");
        for (long p = ni + 1; p <= mi; ++p) forced[static_cast<size_t>(p - 1)] = true;
        prev_m = mi;
    }
    return count_blocked_one(sys1, forced, n) * count_blocked_one(sys2, forced, n);
}

} // namespace betadyn
