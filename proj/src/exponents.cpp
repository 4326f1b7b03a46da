#include "betadyn/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace betadyn {

ZeroRun zero_run(const DigitStream& ds, std::int64_t n, std::int64_t depth) {
    ZeroRun r;
    std::int64_t avail = ds.available(depth);
    const auto& buf = ds.prefix(avail);
    std::int64_t i = n + 1;
    while (i <= avail && buf[static_cast<size_t>(i - 1)] == 0) {
        ++r.length;
        ++i;
    }
    if (i > avail) r.saturated = true; // block ran into the horizon
    return r;
}

RunRecord run_records(const DigitStream& x, const DigitStream& y, std::int64_t depth, bool filter) {
    RunRecord rec;
    std::int64_t ax = x.available(depth);
    std::int64_t ay = y.available(depth);
    std::int64_t limit = std::min(ax, ay);
    rec.depth = limit;
    const auto& bx = x.prefix(limit);
    const auto& by = y.prefix(limit);

    auto run_from = [&](const std::vector<int8_t>& b, std::int64_t n, bool& sat) {
        std::int64_t len = 0;
        std::int64_t i = n + 1;
        while (i <= limit && b[static_cast<size_t>(i - 1)] == 0) {
            ++len;
            ++i;
        }
        sat = (i > limit);
        return len;
    };

    std::int64_t n = 1;
    while (n < limit) {
        // find next n with both runs positive
        while (n < limit && !(bx[static_cast<size_t>(n)] == 0 && by[static_cast<size_t>(n)] == 0))
            ++n; // digit at position n+1 is b[n] (0-based buffer)
        if (n >= limit) break;
        bool sat_x = false, sat_y = false;
        std::int64_t lx = run_from(bx, n, sat_x);
        std::int64_t ly = run_from(by, n, sat_y);
        std::int64_t m = n + std::min(lx, ly);
        // The block is provisional only if the shorter run hit the horizon.
        bool sat = (lx < ly) ? sat_x : (ly < lx ? sat_y : (sat_x && sat_y));
        rec.pairs.push_back({n, m});
        rec.last_saturated = sat;
        if (m >= limit) break;
        n = m + 1;
    }
    if (filter) return monotone_filter(rec);
    return rec;
}

RunRecord monotone_filter(const RunRecord& rec) {
    RunRecord out;
    out.depth = rec.depth;
    out.monotone_filtered = true;
    out.last_saturated = rec.last_saturated;
    std::int64_t best = -1;
    for (const auto& p : rec.pairs) {
        std::int64_t gap = p.m - p.n;
        if (gap >= best) {
            out.pairs.push_back(p);
            best = gap;
        }
    }
    // Saturation only matters if the saturated (final) entry survived.
    if (!rec.pairs.empty() && !out.pairs.empty() &&
        (rec.pairs.back().n != out.pairs.back().n))
        out.last_saturated = false;
    return out;
}

ExponentEstimate estimate_exponents(const RunRecord& rec) {
    ExponentEstimate est;
    est.depth = rec.depth;
    est.records = rec;
    const auto& p = rec.pairs;
    size_t K = p.size();
    if (K == 0) return est;

    auto v_term = [&](size_t k) {
        return static_cast<double>(p[k].m - p[k].n) / static_cast<double>(p[k].n);
    };
    auto vhat_term = [&](size_t k) {
        return static_cast<double>(p[k].m - p[k].n) / static_cast<double>(p[k + 1].n);
    };

    // The final entry never contributes to v-hat (no n_{k+1}); a saturated
    // final block still enters the v max as a lower bound for its term.
    size_t v_count = K;
    size_t vhat_count = K >= 1 ? K - 1 : 0;

    // Both windows share one anchor at the midpoint of the record, so the
    // finite-depth bound vhat <= v/(1+v) stays provable for the windowed
    // estimates: every v-hat term in the window has its v term in the window.
    size_t start = K / 2;
    if (K >= 2) start = std::min(start, K - 2); // keep the v-hat window nonempty

    double vmax_tail = 0, vmax_all = 0;
    for (size_t k = 0; k < v_count; ++k) {
        double t = v_term(k);
        vmax_all = std::max(vmax_all, t);
        if (k >= start) vmax_tail = std::max(vmax_tail, t);
    }
    est.v_est = vmax_tail;
    est.v_est_global = vmax_all;

    if (vhat_count == 0) {
        est.vhat_est = 0;
        est.vhat_est_global = 0;
        return est;
    }
    double vmin_tail = std::numeric_limits<double>::infinity();
    double vmin_all = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < vhat_count; ++k) {
        double t = vhat_term(k);
        vmin_all = std::min(vmin_all, t);
        if (k >= start) vmin_tail = std::min(vmin_tail, t);
    }
    est.vhat_est = vmin_tail;
    est.vhat_est_global = vmin_all;
    return est;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

HitStats hit_statistics(const BetaSystem& sys1, const BetaSystem& sys2, double v, long N,
                        long trials, std::uint64_t seed) {
    if (trials < 1) throw DomainError("need at least one trial");
    if (N < 1) throw DomainError("need a positive horizon");
    if (v < 0) throw DomainError("v must be nonnegative");
    HitStats hs;
    hs.trials = trials;

    double b1 = sys1.beta_d(), b2 = sys2.beta_d();
    // thresholds beta_i^{-nv}
    std::vector<double> th1(static_cast<size_t>(N) + 1), th2(static_cast<size_t>(N) + 1);
    for (long n = 1; n <= N; ++n) {
        th1[static_cast<size_t>(n)] = std::pow(b1, -static_cast<double>(n) * v);
        th2[static_cast<size_t>(n)] = std::pow(b2, -static_cast<double>(n) * v);
        hs.expected += th1[static_cast<size_t>(n)] * th2[static_cast<size_t>(n)];
    }

    double sum = 0, sumsq = 0;
    for (long t = 0; t < trials; ++t) {
        // Per-trial substream so trials are order-independent.
        std::mt19937_64 rng(splitmix64(seed ^ static_cast<std::uint64_t>(t + 1)));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double x = uni(rng), y = uni(rng);
        long hits = 0;
        double tx = x, ty = y;
        for (long n = 1; n <= N; ++n) {
            tx = b1 * tx;
            tx -= std::floor(tx);
            ty = b2 * ty;
            ty -= std::floor(ty);
            if (tx < th1[static_cast<size_t>(n)] && ty < th2[static_cast<size_t>(n)]) ++hits;
        }
        sum += static_cast<double>(hits);
        sumsq += static_cast<double>(hits) * static_cast<double>(hits);
    }
    hs.mean_hits = sum / static_cast<double>(trials);
    double var = sumsq / static_cast<double>(trials) - hs.mean_hits * hs.mean_hits;
    var = std::max(var, 0.0);
    hs.std_error = std::sqrt(var / static_cast<double>(trials));
    return hs;
}

} // namespace betadyn
