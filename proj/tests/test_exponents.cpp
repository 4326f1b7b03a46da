#include <doctest.h>

#include <random>

#include "betadyn/exponents.hpp"

using namespace betadyn;

namespace {

DigitStream stream_of(std::vector<int> w) { return DigitStream::from_word(Word(w.begin(), w.end())); }

} // namespace

TEST_CASE("zero runs") {
    DigitStream s = stream_of({1, 0, 0, 1, 1, 1});
    CHECK(zero_run(s, 1, 6).length == 2);
    CHECK(!zero_run(s, 1, 6).saturated);
    CHECK(zero_run(s, 3, 6).length == 0);

    // block of length 7 starting at position 12
    std::vector<int> w(20, 1);
    for (int p = 12; p <= 18; ++p) w[static_cast<size_t>(p - 1)] = 0;
    DigitStream t = stream_of(w);
    CHECK(zero_run(t, 11, 20).length == 7);

    // a run touching the horizon saturates
    DigitStream u = stream_of({1, 0, 0, 0});
    ZeroRun r = zero_run(u, 1, 4);
    CHECK(r.length == 3);
    CHECK(r.saturated);
}

TEST_CASE("run records trace the joint blocks") {
    // zero blocks at positions 2..4 and 7..12, ones elsewhere
    std::vector<int> w(15, 1);
    for (int p : {2, 3, 4, 7, 8, 9, 10, 11, 12}) w[static_cast<size_t>(p - 1)] = 0;
    DigitStream x = stream_of(w), y = stream_of(w);
    RunRecord rec = run_records(x, y, 15, false);
    REQUIRE(rec.pairs.size() == 2);
    CHECK(rec.pairs[0].n == 1);
    CHECK(rec.pairs[0].m == 4);
    CHECK(rec.pairs[1].n == 6);
    CHECK(rec.pairs[1].m == 12);

    // no joint zeros at all
    std::vector<int> a(10, 1), b(10, 1);
    for (int p : {2, 4, 6}) a[static_cast<size_t>(p - 1)] = 0;
    for (int p : {3, 5, 7}) b[static_cast<size_t>(p - 1)] = 0;
    RunRecord empty = run_records(stream_of(a), stream_of(b), 10, false);
    CHECK(empty.pairs.empty());

    // records respect n_k < m_k < n_{k+1}
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<int> ra, rb;
        for (int i = 0; i < 300; ++i) {
            ra.push_back(static_cast<int>(rng() % 2));
            rb.push_back(static_cast<int>(rng() % 2));
        }
        RunRecord r = run_records(stream_of(ra), stream_of(rb), 300, false);
        for (size_t k = 0; k < r.pairs.size(); ++k) {
            CHECK(r.pairs[k].n < r.pairs[k].m);
            if (k + 1 < r.pairs.size()) CHECK(r.pairs[k].m < r.pairs[k + 1].n);
        }
    }
}

TEST_CASE("monotone filter keeps the non-decreasing gap subsequence") {
    RunRecord rec;
    rec.depth = 100;
    rec.pairs = {{1, 6}, {10, 13}, {20, 28}}; // gaps 5, 3, 8
    RunRecord f = monotone_filter(rec);
    REQUIRE(f.pairs.size() == 2);
    CHECK(f.pairs[0].m - f.pairs[0].n == 5);
    CHECK(f.pairs[1].m - f.pairs[1].n == 8);
    CHECK(f.monotone_filtered);
}

TEST_CASE("exponent estimates on degenerate records") {
    RunRecord empty;
    ExponentEstimate e0 = estimate_exponents(empty);
    CHECK(e0.v_est == 0);
    CHECK(e0.vhat_est == 0);

    RunRecord one;
    one.depth = 50;
    one.pairs = {{1, 3}};
    ExponentEstimate e1 = estimate_exponents(one);
    CHECK(e1.v_est == doctest::Approx(2.0));
    CHECK(e1.vhat_est == 0);
}

TEST_CASE("prescribed eventually-constant ratios are recovered exactly") {
    // n_k = 4^k, m_k = 2 n_k: v-terms are exactly 1, vhat-terms exactly 1/2...
    // gaps n_k are strictly increasing so the filter keeps everything.
    RunRecord rec;
    rec.depth = 1 << 20;
    std::int64_t n = 4;
    for (int k = 0; k < 8; ++k) {
        rec.pairs.push_back({n, 2 * n});
        n *= 4;
    }
    ExponentEstimate e = estimate_exponents(rec);
    CHECK(e.v_est == doctest::Approx(1.0));
    CHECK(e.vhat_est == doctest::Approx(0.25)); // n_k / n_{k+1} = 1/4
}

TEST_CASE("finite-depth uniform bound vhat <= v/(1+v) + 2/depth") {
    std::mt19937_64 rng(31337);
    for (int iter = 0; iter < 60; ++iter) {
        std::vector<int> a, b;
        int len = 200 + static_cast<int>(rng() % 200);
        for (int i = 0; i < len; ++i) {
            a.push_back((rng() % 3) == 0 ? 0 : static_cast<int>(rng() % 2));
            b.push_back((rng() % 3) == 0 ? 0 : static_cast<int>(rng() % 2));
        }
        RunRecord rec = run_records(stream_of(a), stream_of(b), len, true);
        ExponentEstimate e = estimate_exponents(rec);
        if (rec.pairs.empty()) continue;
        double bound = e.v_est / (1 + e.v_est) + 2.0 / static_cast<double>(e.depth);
        CHECK(e.vhat_est <= bound + 1e-12);
    }
}

TEST_CASE("hit statistics") {
    BetaSystem two = BetaSystem::from_rational(Rational(2));

    // v = 0 degenerates to counting every n
    HitStats all = hit_statistics(two, two, 0.0, 15, 50, 7);
    CHECK(all.mean_hits == doctest::Approx(15.0));
    CHECK(all.expected == doctest::Approx(15.0));

    // seeded runs are reproducible
    HitStats h1 = hit_statistics(two, two, 1.0, 20, 1, 42);
    HitStats h2 = hit_statistics(two, two, 1.0, 20, 1, 42);
    CHECK(h1.mean_hits == h2.mean_hits);

    // the zero-one-law series matches the empirical mean
    HitStats hs = hit_statistics(two, two, 1.0, 20, 10000, 2024);
    double target = (1.0 - std::pow(0.25, 20)) / 3.0;
    CHECK(hs.expected == doctest::Approx(target).epsilon(1e-12));
    CHECK(std::fabs(hs.mean_hits - hs.expected) <= 5 * hs.std_error + 1e-9);

    CHECK_THROWS_AS(hit_statistics(two, two, 1.0, 20, 0, 1), DomainError);
}
