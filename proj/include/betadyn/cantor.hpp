#pragma once

// Executable lower-bound construction: target sequences (n_k, m_k), the
// per-level bookkeeping integers, assembly of points of the limit set from
// slot words and 0^N 1 0^N separators, and the exact mass of basic squares
// with its local-dimension diagnostic.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "betadyn/beta_system.hpp"
#include "betadyn/digit_stream.hpp"
#include "betadyn/words.hpp"

namespace betadyn {

struct TargetSequences {
    double v = 0;
    double vhat = 0;
    int levels = 0;
    std::vector<Integer> n, m; // 1-based levels stored at index k-1
};

// n_{k+1} = floor((v/vhat) n_k) + 2, m_k = floor((1+v) n_k) + 1 for vhat > 0;
// n_k = 2^(2^k) for vhat = 0. Throws RegimeUnsupported outside
// 0 <= vhat <= v/(1+v) with 0 < v < inf.
TargetSequences target_sequences(double v, double vhat, int levels);

struct LevelRow {
    Integer n, m;
    Integer l, h, h_tilde;
    // Splits carried on the source level: entering level k+1,
    //   n_{k+1} = m_k + t_k (m_k - n_k) + r_k
    //   l_{k+1} = h_tilde_k + t_bar_k (m_k - n_k + 2N+1) + r_bar_k + 2N+1
    Integer t, r, t_bar, r_bar;
    // Dividing split of this level:
    //   h_tilde_k = h_k + t_tilde_k (m_k - n_k + 2N+1) + r_tilde_k + 2N+1
    Integer t_tilde, r_tilde;
};

struct LevelSpec {
    int N = 0;
    double v = 0, vhat = 0;
    int levels = 0;
    long n1_scale = 1; // smallest scaling of n_1 that made every level feasible
    std::vector<LevelRow> rows;
    BetaSystem sys1, sys2;   // bases (beta2 >= beta1)
    BetaSystem sys1N, sys2N; // truncations at N
};

// The construction needs log_{beta2}(beta1) > (vhat/v)(1+v).
bool log_condition_holds(const BetaSystem& sys1, const BetaSystem& sys2, double v, double vhat);

// All bookkeeping integers for the requested levels. N = 0 picks the
// smallest valid truncation order. Throws ConditionViolated when the log
// condition fails and SparsityViolated when no n_1 scaling <= 128 makes the
// level gaps feasible.
LevelSpec level_spec(const TargetSequences& seq, const BetaSystem& sys1, const BetaSystem& sys2,
                     int N = 0);

struct SlotFill {
    enum class Kind { Zeros, Seeded, Custom };
    Kind kind = Kind::Zeros;
    std::uint64_t seed = 0;
    std::function<Word(const BetaSystem& trunc, std::int64_t len)> custom;

    static SlotFill zeros() { return {}; }
    static SlotFill seeded(std::uint64_t s) {
        SlotFill f;
        f.kind = Kind::Seeded;
        f.seed = s;
        return f;
    }
    static SlotFill with(std::function<Word(const BetaSystem&, std::int64_t)> fn) {
        SlotFill f;
        f.kind = Kind::Custom;
        f.custom = std::move(fn);
        return f;
    }
};

// Digit streams of one point of the limit set; every prefix is admissible for
// the respective base. Streams are lazy; they end after the last level.
std::pair<DigitStream, DigitStream> sample_point(const LevelSpec& spec, const SlotFill& fill);

// Exact masses per the equal-division rule, and the level-k family size.
Rational rectangle_measure(const LevelSpec& spec, int k);
Rational square_measure(const LevelSpec& spec, int k);
Integer level_square_count(const LevelSpec& spec, int k);

struct LocalDimension {
    int level = 0;
    double ratio = 0;         // log mu(Q_k) / log |Q_k| with |Q_k| = beta2^{-h_k}
    double s_closed_form = 0; // the construction's dimension value
};
LocalDimension local_dimension(const LevelSpec& spec, int k);

} // namespace betadyn
