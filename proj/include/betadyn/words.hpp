#pragma once

// Finite words over the digit alphabet: lexicographic order under the
// 0-padding convention, the Parry admissibility criterion, counting and
// enumeration of the admissible words of a given length, successors, and
// the 0^N padding that produces full words.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "betadyn/beta_system.hpp"
#include "betadyn/digit_stream.hpp"

namespace betadyn {

enum class Cmp { Less, Equal, Greater };

// Finite words compared as w.0^inf.
Cmp lex_compare(const Word& a, const Word& b);
// Finite word (0-padded) against an infinite stream; scans until decided.
Cmp lex_compare(const Word& a, const DigitStream& b, std::int64_t scan_limit = 1 << 20);
Cmp lex_compare(const DigitStream& a, const Word& b, std::int64_t scan_limit = 1 << 20);

struct Budget {
    std::int64_t max_nodes = 4'000'000;
};

enum class CountMethod { Enumerate, Automaton, Auto };

// Parry criterion: every shift of w.0^inf lies strictly below eps*(1,beta).
bool is_admissible(const BetaSystem& sys, const Word& w);

// Exact number of admissible words of length n.
Integer count_words(const BetaSystem& sys, long n, CountMethod method = CountMethod::Auto,
                    const Budget& budget = {});

// Lexicographically smallest admissible word of the same length strictly
// above w, or nullopt when w is maximal. Throws NotAdmissible on bad input.
std::optional<Word> successor(const BetaSystem& sys, const Word& w);

// w admissible for beta_N, padded with 0^N; the result is full for beta.
Word pad_full(const BetaSystem& sys, const Word& w, int N);

// Visit admissible words of length n in lexicographic order; stop early by
// returning false from the visitor.
void enumerate_words(const BetaSystem& sys, long n,
                     const std::function<bool(const Word&)>& visit, const Budget& budget = {});

// Word-counting automaton over a purely periodic quasi-greedy expansion.
// State i constrains the next digit by eps*_{i+1}; strictly smaller digits
// reset the constraint chain.
class CountingAutomaton {
public:
    static std::optional<CountingAutomaton> build(const BetaSystem& sys, int max_states = 64);

    int states() const { return static_cast<int>(period_.size()); }
    const std::vector<std::vector<Integer>>& transition_counts() const { return counts_; }
    Integer count(long n) const; // exact #words of length n via matrix power

    // Digit-level walk; returns the successor state or -1 when forbidden.
    int step(int state, int digit) const;
    // Largest digit allowed from a state.
    int digit_bound(int state) const { return period_[static_cast<size_t>(state)]; }

private:
    std::vector<int> period_;
    std::vector<std::vector<Integer>> counts_;
};

// Incremental admissibility walker (tie length against eps*). Works for any
// base; pulls eps* digits on demand.
class AdmissibilityWalker {
public:
    explicit AdmissibilityWalker(const BetaSystem& sys);
    // Feed one digit; false means the word became inadmissible.
    bool push(int digit);
    long tie() const { return tie_; }
    void reset() { tie_ = 0; }

private:
    BetaSystem sys_;
    std::vector<int> eps_;
    long tie_ = 0;
    int eps_at(long i); // 1-indexed
};

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& text);

} // namespace betadyn
