#pragma once

// Zero-run analysis of digit pairs: the run records (n_k, m_k) that
// characterize the asymptotic exponent v (limsup (m_k-n_k)/n_k) and the
// uniform exponent v-hat (liminf (m_k-n_k)/n_{k+1}), plus hitting statistics
// for the zero-one law.

#include <cstdint>
#include <vector>

#include "betadyn/beta_system.hpp"
#include "betadyn/digit_stream.hpp"

namespace betadyn {

struct RunPair {
    std::int64_t n = 0; // position of the last nonzero digit before the joint block
    std::int64_t m = 0; // n + min of the two run lengths
};

struct RunRecord {
    std::vector<RunPair> pairs;
    std::int64_t depth = 0;
    bool monotone_filtered = false;
    bool last_saturated = false; // final block touched the truncation horizon
};

struct ZeroRun {
    std::int64_t length = 0;
    bool saturated = false;
};

// Maximal zero block just after position n, scanning no further than depth.
ZeroRun zero_run(const DigitStream& ds, std::int64_t n, std::int64_t depth);

// Greedy joint-block sequence of the pair, truncated at depth; when filter is
// set, only the non-decreasing-gap subsequence is kept.
RunRecord run_records(const DigitStream& x, const DigitStream& y, std::int64_t depth, bool filter);

// Subsequence i_{k+1} = min{ i > i_k : m_i - n_i >= m_{i_k} - n_{i_k} }.
RunRecord monotone_filter(const RunRecord& rec);

struct ExponentEstimate {
    double v_est = 0;           // max of gap/n over the tail half of the record
    double vhat_est = 0;        // min of gap/n_{next} over the tail half
    double v_est_global = 0;    // same over the whole record
    double vhat_est_global = 0;
    std::int64_t depth = 0;
    RunRecord records;
};

ExponentEstimate estimate_exponents(const RunRecord& rec);

struct HitStats {
    double mean_hits = 0;
    double expected = 0;  // sum_{n<=N} (beta1*beta2)^{-n v}
    double std_error = 0; // of the mean
    long trials = 0;
};

// Mean over uniform random pairs of #{n <= N : T1^n x < beta1^{-nv} and
// T2^n y < beta2^{-nv}}, against the analytic series.
HitStats hit_statistics(const BetaSystem& sys1, const BetaSystem& sys2, double v, long N,
                        long trials, std::uint64_t seed);

} // namespace betadyn
