#include "betadyn/words.hpp"

#include <algorithm>
#include <sstream>

#include "betadyn/cylinders.hpp"

namespace betadyn {

Cmp lex_compare(const Word& a, const Word& b) {
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        int x = i < a.size() ? a[i] : 0;
        int y = i < b.size() ? b[i] : 0;
        if (x < y) return Cmp::Less;
        if (x > y) return Cmp::Greater;
    }
    return Cmp::Equal;
}

Cmp lex_compare(const Word& a, const DigitStream& b, std::int64_t scan_limit) {
    for (std::int64_t i = 1; i <= scan_limit; ++i) {
        int x = i <= static_cast<std::int64_t>(a.size()) ? a[static_cast<size_t>(i - 1)] : 0;
        int y = b.digit(i);
        if (x < y) return Cmp::Less;
        if (x > y) return Cmp::Greater;
        // Once past the word, a tie can only break when the stream shows a
        // nonzero digit; keep scanning.
    }
    throw BudgetExceededError("lexicographic comparison undecided within the scan limit");
}

Cmp lex_compare(const DigitStream& a, const Word& b, std::int64_t scan_limit) {
    Cmp c = lex_compare(b, a, scan_limit);
    if (c == Cmp::Less) return Cmp::Greater;
    if (c == Cmp::Greater) return Cmp::Less;
    return Cmp::Equal;
}

// ---------------------------------------------------------------------------
// Admissibility

AdmissibilityWalker::AdmissibilityWalker(const BetaSystem& sys) : sys_(sys) {}

int AdmissibilityWalker::eps_at(long i) {
    while (static_cast<long>(eps_.size()) < i) {
        long want = std::max<long>(16, static_cast<long>(eps_.size()) * 2);
        want = std::max(want, i);
        eps_ = sys_.epsilon_star(want);
    }
    return eps_[static_cast<size_t>(i - 1)];
}

bool AdmissibilityWalker::push(int digit) {
    // The longest suffix of the word read so far that ties a prefix of eps*
    // carries the binding constraint; for quasi-greedy eps* a strictly
    // smaller digit cannot start a new tie.
    int bound = eps_at(tie_ + 1);
    if (digit > bound) return false;
    if (digit == bound) ++tie_;
    else tie_ = 0;
    return true;
}

bool is_admissible(const BetaSystem& sys, const Word& w) {
    for (int d : w) {
        if (d < 0 || d > sys.alphabet_max())
            throw DomainError("digit outside the alphabet");
    }
    AdmissibilityWalker walk(sys);
    for (int d : w)
        if (!walk.push(d)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Successor / enumerate

std::optional<Word> successor(const BetaSystem& sys, const Word& w) {
    if (!is_admissible(sys, w)) throw NotAdmissibleError("successor of an inadmissible word");
    long n = static_cast<long>(w.size());
    // States after each prefix; states[i] = tie after reading w_1..w_i.
    AdmissibilityWalker walk(sys);
    std::vector<long> ties(static_cast<size_t>(n) + 1, 0);
    for (long i = 0; i < n; ++i) {
        walk.push(w[static_cast<size_t>(i)]);
        ties[static_cast<size_t>(i + 1)] = walk.tie();
    }
    for (long i = n - 1; i >= 0; --i) {
        long tie = ties[static_cast<size_t>(i)];
        int bound = sys.epsilon_star(tie + 1)[static_cast<size_t>(tie)];
        int d = w[static_cast<size_t>(i)] + 1;
        // A digit above eps*_{tie+1} breaks the prefix; larger ones only more so.
        if (d <= bound && d <= sys.alphabet_max()) {
            Word out(w.begin(), w.begin() + i);
            out.push_back(d);
            out.resize(static_cast<size_t>(n), 0);
            return out;
        }
    }
    return std::nullopt;
}

void enumerate_words(const BetaSystem& sys, long n,
                     const std::function<bool(const Word&)>& visit, const Budget& budget) {
    if (n < 0) throw DomainError("word length must be nonnegative");
    std::int64_t nodes = 0;
    Word w;
    w.reserve(static_cast<size_t>(n));
    std::vector<long> ties;
    ties.push_back(0);
    // Iterative DFS in lexicographic order.
    std::function<bool(long)> rec = [&](long depth) -> bool {
        if (depth == n) return visit(w);
        for (int d = 0; d <= sys.alphabet_max(); ++d) {
            if (++nodes > budget.max_nodes)
                throw BudgetExceededError("enumeration budget exhausted");
            long tie = ties.back();
            int bound = sys.epsilon_star(tie + 1)[static_cast<size_t>(tie)];
            if (d > bound) break; // digits only grow from here
            long next_tie = (d == bound) ? tie + 1 : 0;
            w.push_back(d);
            ties.push_back(next_tie);
            bool keep = rec(depth + 1);
            ties.pop_back();
            w.pop_back();
            if (!keep) return false;
        }
        return true;
    };
    rec(0);
}

// ---------------------------------------------------------------------------
// Counting

std::optional<CountingAutomaton> CountingAutomaton::build(const BetaSystem& sys, int max_states) {
    std::vector<int> period;
    SimpleParry sp = sys.simple_parry();
    if (sp.status != ParryStatus::Yes) return std::nullopt;
    long n = sp.terminal_index;
    if (n > max_states) return std::nullopt;
    period = sys.epsilon_star(n); // already the periodic rewrite
    CountingAutomaton a;
    a.period_ = period;
    size_t q = period.size();
    a.counts_.assign(q, std::vector<Integer>(q, Integer(0)));
    for (size_t s = 0; s < q; ++s) {
        int bound = period[s];
        if (bound > 0) a.counts_[s][0] += bound; // digits 0..bound-1
        a.counts_[s][(s + 1) % q] += 1;          // digit == bound
    }
    return a;
}

int CountingAutomaton::step(int state, int digit) const {
    int bound = period_[static_cast<size_t>(state)];
    if (digit > bound) return -1;
    if (digit == bound) return (state + 1) % static_cast<int>(period_.size());
    return 0;
}

Integer CountingAutomaton::count(long n) const {
    size_t q = period_.size();
    // row vector e_0 * M^n, summed
    std::vector<Integer> v(q, Integer(0));
    v[0] = 1;
    auto mat_vec = [&](const std::vector<std::vector<Integer>>& M, std::vector<Integer>& x) {
        std::vector<Integer> y(q, Integer(0));
        for (size_t i = 0; i < q; ++i) {
            if (x[i] == 0) continue;
            for (size_t j = 0; j < q; ++j)
                if (M[i][j] != 0) y[j] += x[i] * M[i][j];
        }
        x = std::move(y);
    };
    auto mat_mul = [&](const std::vector<std::vector<Integer>>& A,
                       const std::vector<std::vector<Integer>>& B) {
        std::vector<std::vector<Integer>> C(q, std::vector<Integer>(q, Integer(0)));
        for (size_t i = 0; i < q; ++i)
            for (size_t k = 0; k < q; ++k) {
                if (A[i][k] == 0) continue;
                for (size_t j = 0; j < q; ++j)
                    if (B[k][j] != 0) C[i][j] += A[i][k] * B[k][j];
            }
        return C;
    };
    std::vector<std::vector<Integer>> base = counts_;
    long k = n;
    while (k) {
        if (k & 1) mat_vec(base, v);
        k >>= 1;
        if (k) base = mat_mul(base, base);
    }
    Integer total = 0;
    for (const auto& x : v) total += x;
    return total;
}

namespace {

// Exact counting DP over tie states using only an eps* prefix; works for any
// base, O(n^2) states.
Integer count_words_prefix_dp(const BetaSystem& sys, long n) {
    std::vector<int> eps = sys.epsilon_star(n + 1);
    // dp[t] = number of words reaching tie length t
    std::vector<Integer> dp(static_cast<size_t>(n) + 2, Integer(0));
    dp[0] = 1;
    for (long pos = 0; pos < n; ++pos) {
        std::vector<Integer> next(static_cast<size_t>(n) + 2, Integer(0));
        for (long t = 0; t <= pos; ++t) {
            if (dp[static_cast<size_t>(t)] == 0) continue;
            int bound = eps[static_cast<size_t>(t)];
            if (bound > 0) next[0] += dp[static_cast<size_t>(t)] * bound;
            next[static_cast<size_t>(t + 1)] += dp[static_cast<size_t>(t)];
        }
        dp = std::move(next);
    }
    Integer total = 0;
    for (const auto& x : dp) total += x;
    return total;
}

} // namespace

Integer count_words(const BetaSystem& sys, long n, CountMethod method, const Budget& budget) {
    if (n < 0) throw DomainError("word length must be nonnegative");
    if (n == 0) return 1;
    switch (method) {
    case CountMethod::Enumerate: {
        Integer total = 0;
        enumerate_words(sys, n, [&](const Word&) {
            ++total;
            return true;
        }, budget);
        return total;
    }
    case CountMethod::Automaton: {
        if (auto a = CountingAutomaton::build(sys)) return a->count(n);
        // certified eventually-periodic structure unavailable; fall back to
        // the exact prefix DP, which only needs n+1 digits of eps*
        try {
            return count_words_prefix_dp(sys, n);
        } catch (const UndecidedParryError&) {
            throw AutomatonUnavailableError("eps* digits not certifiable to depth " +
                                            std::to_string(n));
        }
    }
    case CountMethod::Auto:
    default:
        if (auto a = CountingAutomaton::build(sys)) return a->count(n);
        return count_words_prefix_dp(sys, n);
    }
}

// ---------------------------------------------------------------------------
// pad_full

Word pad_full(const BetaSystem& sys, const Word& w, int N) {
    try {
        BetaSystem trunc = sys.truncated_system(N);
        if (!is_admissible(trunc, w))
            throw NotAdmissibleError("word is not admissible for the truncated base");
    } catch (const DegenerateRootError&) {
        // The truncation collapses (root at 1). Integer bases land here at
        // N = 1; padding still works whenever the result is verifiably full.
        if (!is_admissible(sys, w)) throw NotAdmissibleError("word is not admissible");
        Word padded = w;
        padded.insert(padded.end(), static_cast<size_t>(N), 0);
        if (!is_full(sys, padded))
            throw DegenerateRootError("truncation undefined and the padded word is not full");
        return padded;
    }
    Word padded = w;
    padded.insert(padded.end(), static_cast<size_t>(N), 0);
    if (sys.exact() && !is_full(sys, padded))
        throw Error("padded word failed the fullness check"); // unreachable
    return padded;
}

// ---------------------------------------------------------------------------
// Formatting

std::string word_to_string(const Word& w) {
    std::ostringstream os;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) os << ",";
        os << w[i];
    }
    return os.str();
}

Word word_from_string(const std::string& text) {
    Word w;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) return;
        w.push_back(std::stoi(cur));
        cur.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ' ') flush();
        else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') cur.push_back(c);
        else throw DomainError("bad word literal: " + text);
    }
    flush();
    return w;
}

} // namespace betadyn
