#pragma once

// The beta-transformation T(x) = beta*x - floor(beta*x), digit extraction,
// the quasi-greedy expansion of 1, simple-Parry detection, and the
// truncation bases beta_N.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "betadyn/algebraic.hpp"
#include "betadyn/precision.hpp"

namespace betadyn {

using Word = std::vector<int>;

enum class ParryStatus { Yes, NoWithinDepth, Unknown };

struct SimpleParry {
    ParryStatus status = ParryStatus::Unknown;
    int terminal_index = 0; // index of the last nonzero digit of the expansion of 1
    int last_digit = 0;
    long probed_depth = 0;
};

class BetaSystem {
public:
    BetaSystem() = default;

    // "2", "5/2", "1.8", "root:z^2-z-1:[1.6,1.7]"
    static BetaSystem from_string(const std::string& text, PrecisionPolicy policy = {});
    static BetaSystem from_rational(Rational beta, PrecisionPolicy policy = {});
    static BetaSystem from_real(RealNumber beta, PrecisionPolicy policy = {});
    // System with a known purely periodic quasi-greedy expansion of 1 and a
    // numeric root for the value (used for the truncation bases).
    static BetaSystem from_periodic(std::vector<int> period, RealNumber value,
                                    PrecisionPolicy policy = {});

    bool valid() const { return impl_ != nullptr; }
    int alphabet_max() const;
    Scalar beta(int bits = 0) const; // exact when the base is rational
    double beta_d() const;
    double log2_beta() const;
    const PrecisionPolicy& policy() const;
    std::string describe() const;

    // True when orbit arithmetic is exact (rational or algebraic base).
    bool exact() const;

    // One step of the beta-transformation. DomainError outside [0,1].
    Scalar transform(const Scalar& x) const;

    // First n digits of the expansion of x.
    Word digits(const Scalar& x, long n) const;

    // Stateful digit source for long expansions.
    class DigitIterator {
    public:
        int next();

    private:
        friend class BetaSystem;
        struct State;
        std::shared_ptr<State> st_;
    };
    DigitIterator expansion_iterator(const Scalar& x) const;

    // First n digits of the quasi-greedy expansion of 1.
    std::vector<int> epsilon_star(long n) const;
    SimpleParry simple_parry(long probe_depth = 512) const;

    // The truncation base beta_N: unique root > 1 of 1 = sum eps*_i z^-i.
    Scalar beta_truncation(int N) const;
    RealNumber beta_truncation_value(int N) const;
    BetaSystem truncated_system(int N) const;

    // Exact value of sum w_i beta^-i and of beta^-n (exact systems only).
    FieldElement word_value(const Word& w) const;
    FieldElement beta_pow_neg(long n) const;
    const FieldPtr& field() const;

    bool same_system(const BetaSystem& o) const { return impl_ == o.impl_; }

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    explicit BetaSystem(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
};

} // namespace betadyn
