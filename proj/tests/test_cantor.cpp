#include <doctest.h>
#include <cmath>

#include "betadyn/cantor.hpp"
#include "betadyn/cylinders.hpp"
#include "betadyn/exponents.hpp"

using namespace betadyn;

namespace {
BetaSystem two() { return BetaSystem::from_rational(Rational(2)); }
} // namespace

TEST_CASE("target sequences follow the explicit recurrences") {
    TargetSequences s = target_sequences(1.0, 0.3, 4);
    CHECK(s.n == std::vector<Integer>{1, 5, 18, 62});
    CHECK(s.m == std::vector<Integer>{3, 11, 37, 125});

    TargetSequences z = target_sequences(1.0, 0.0, 3);
    CHECK(z.n == std::vector<Integer>{4, 16, 256});
    CHECK(z.m == std::vector<Integer>{9, 33, 513});

    CHECK_THROWS_AS(target_sequences(1.0, 0.6, 3), RegimeUnsupportedError);
    CHECK_THROWS_AS(target_sequences(0.0, 0.0, 3), RegimeUnsupportedError);
    CHECK_THROWS_AS(target_sequences(std::numeric_limits<double>::infinity(), 0.3, 3),
                    RegimeUnsupportedError);
}

TEST_CASE("target sequences converge to the requested exponents") {
    for (auto [v, vhat] : std::vector<std::pair<double, double>>{{1.0, 0.3}, {2.0, 0.5}, {0.7, 0.2}}) {
        TargetSequences s = target_sequences(v, vhat, 10);
        for (int k = 0; k + 1 < s.levels; ++k) {
            CHECK(s.n[static_cast<size_t>(k)] < s.m[static_cast<size_t>(k)]);
            CHECK(s.m[static_cast<size_t>(k)] < s.n[static_cast<size_t>(k + 1)]);
            CHECK(s.m[static_cast<size_t>(k)] - s.n[static_cast<size_t>(k)] <=
                  s.m[static_cast<size_t>(k + 1)] - s.n[static_cast<size_t>(k + 1)]);
        }
        int K = s.levels - 1;
        double nK = Rational(s.n[static_cast<size_t>(K)]).get_d();
        double gap = Rational(s.m[static_cast<size_t>(K)] - s.n[static_cast<size_t>(K)]).get_d();
        CHECK(std::fabs(gap / nK - v) <= 3.0 / nK);
        double gap1 = Rational(s.m[static_cast<size_t>(K - 1)] - s.n[static_cast<size_t>(K - 1)]).get_d();
        CHECK(std::fabs(gap1 / nK - vhat) <= 3.0 / Rational(s.n[static_cast<size_t>(K - 1)]).get_d());
    }
}

TEST_CASE("level bookkeeping for equal bases") {
    // Single level: no sparsity constraint, so the seed stays unscaled.
    TargetSequences s = target_sequences(1.0, 0.3, 1);
    LevelSpec spec = level_spec(s, two(), two(), 2);
    CHECK(spec.N == 2);
    CHECK(spec.n1_scale == 1);
    CHECK(spec.rows[0].l == 6);
    CHECK(spec.rows[0].h == 13);
    CHECK(spec.rows[0].h_tilde == 18);
    CHECK(spec.rows[0].t_tilde == 0);
    CHECK(spec.rows[0].r_tilde == 0);
}

TEST_CASE("dividing depth doubles the order for a squared base") {
    // log_{beta1} beta2 = 2; the dividing split is exercised at vhat = 0.2
    // where the construction hypothesis holds.
    TargetSequences s = target_sequences(1.0, 0.2, 1);
    BetaSystem b1 = two();
    BetaSystem b2 = BetaSystem::from_rational(Rational(4));
    LevelSpec spec = level_spec(s, b1, b2, 2);
    CHECK(spec.rows[0].h == 13);
    CHECK(spec.rows[0].h_tilde == 31);
}

TEST_CASE("the construction hypothesis is checked") {
    CHECK(log_condition_holds(two(), two(), 1.0, 0.45));
    CHECK(!log_condition_holds(two(), two(), 1.0, 0.55));
    CHECK(!log_condition_holds(two(), BetaSystem::from_rational(Rational(4)), 1.0, 0.3));
    TargetSequences s = target_sequences(1.0, 0.3, 2);
    CHECK_THROWS_AS(level_spec(s, two(), BetaSystem::from_rational(Rational(4)), 2),
                    ConditionViolatedError);
}

TEST_CASE("bookkeeping identities reconstruct the defining equations") {
    TargetSequences s = target_sequences(1.0, 0.3, 8);
    LevelSpec spec = level_spec(s, two(), two(), 2);
    CHECK(spec.n1_scale == 1);
    Integer sep(2 * spec.N + 1);
    for (int k = 0; k < spec.levels; ++k) {
        const LevelRow& row = spec.rows[static_cast<size_t>(k)];
        Integer D = row.m - row.n;
        CHECK(row.h - row.l == D + sep);
        CHECK(row.h_tilde == row.h + row.t_tilde * (D + sep) + row.r_tilde + sep);
        if (k + 1 < spec.levels) {
            const LevelRow& next = spec.rows[static_cast<size_t>(k + 1)];
            CHECK(next.n == row.m + row.t * D + row.r);
            CHECK(next.l == row.h + row.t * (D + sep) + row.r + sep);
            CHECK(next.l == row.h_tilde + row.t_bar * (D + sep) + row.r_bar + sep);
            CHECK(next.l >= row.h_tilde + sep); // sparsity
        }
    }
}

TEST_CASE("infeasible seeds are scaled up") {
    // v = 2, vhat = 0.5: the level-2 start undershoots the dividing depth
    // until the seed reaches 4.
    TargetSequences s = target_sequences(2.0, 0.5, 5);
    LevelSpec spec = level_spec(s, two(), two(), 2);
    CHECK(spec.n1_scale == 4);
    CHECK(spec.rows[0].n == 4);
    Integer sep(2 * spec.N + 1);
    for (int k = 0; k + 1 < spec.levels; ++k)
        CHECK(spec.rows[static_cast<size_t>(k + 1)].l >=
              spec.rows[static_cast<size_t>(k)].h_tilde + sep);
}

TEST_CASE("zero-fill points are admissible and carry the prescribed blocks") {
    TargetSequences s = target_sequences(1.0, 0.3, 3);
    LevelSpec spec = level_spec(s, two(), two(), 2);
    auto [dx, dy] = sample_point(spec, SlotFill::zeros());
    long xlen = static_cast<long>(spec.rows.back().h_tilde.get_si());
    long ylen = static_cast<long>(spec.rows.back().h.get_si());
    CHECK(dx.available(xlen + 100) == xlen);
    CHECK(dy.available(ylen + 100) == ylen);
    // every prefix admissible
    for (long p = 1; p <= xlen; ++p) {
        Word w;
        for (long i = 1; i <= p; ++i) w.push_back(dx.digit(i));
        CHECK(is_admissible(spec.sys1, w));
    }
    // prescribed zero blocks span l_k - N + 1 .. h_k - N - 1 in both coords
    for (const auto& row : spec.rows) {
        long l = static_cast<long>(row.l.get_si());
        long h = static_cast<long>(row.h.get_si());
        for (long p = l - spec.N + 1; p <= h - spec.N - 1; ++p) {
            CHECK(dx.digit(p) == 0);
            CHECK(dy.digit(p) == 0);
        }
        CHECK(dx.digit(h - spec.N) == 1);
        CHECK(dy.digit(h - spec.N) == 1);
    }
}

TEST_CASE("seeded points realize the target exponents") {
    TargetSequences s = target_sequences(1.0, 0.3, 10);
    LevelSpec spec = level_spec(s, two(), two(), 2);
    auto [dx, dy] = sample_point(spec, SlotFill::seeded(2024));
    std::int64_t depth = spec.rows.back().h_tilde.get_si();
    RunRecord rec = run_records(dx, dy, depth, true);
    ExponentEstimate est = estimate_exponents(rec);
    CHECK(std::fabs(est.v_est - 1.0) < 0.05);
    CHECK(std::fabs(est.vhat_est - 0.3) < 0.05);
    // random fills still produce admissible prefixes
    for (long p : {40L, 160L, 300L}) {
        Word w;
        for (long i = 1; i <= p; ++i) w.push_back(dx.digit(i));
        CHECK(is_admissible(spec.sys1, w));
    }
}

TEST_CASE("selector contract violations surface") {
    TargetSequences s = target_sequences(1.0, 0.3, 2);
    LevelSpec spec = level_spec(s, two(), two(), 2);
    auto bad_len = SlotFill::with([](const BetaSystem&, std::int64_t len) {
        return Word(static_cast<size_t>(len + 1), 0);
    });
    auto [dx, dy] = sample_point(spec, bad_len);
    CHECK_THROWS_AS(dx.prefix(50), SlotLengthMismatchError);

    auto inadmissible = SlotFill::with([](const BetaSystem&, std::int64_t len) {
        return Word(static_cast<size_t>(len), 1); // "11" is out for the truncated base
    });
    auto [ex, ey] = sample_point(spec, inadmissible);
    CHECK_THROWS_AS(ex.prefix(50), NotAdmissibleError);
}

TEST_CASE("measures divide mass equally and conserve it") {
    TargetSequences s = target_sequences(1.0, 0.3, 6);
    LevelSpec spec = level_spec(s, two(), two(), 2);

    // scale 3 means n_1 = 3; counts are over the truncated language (phi here)
    Integer c1n1 = count_words(spec.sys1N, static_cast<long>(spec.rows[0].n.get_si()));
    Rational r1 = rectangle_measure(spec, 1);
    CHECK(r1 == Rational(1) / Rational(c1n1 * c1n1));

    for (int k = 1; k <= spec.levels; ++k) {
        Rational q = square_measure(spec, k);
        CHECK(q > 0);
        CHECK(q <= rectangle_measure(spec, k));
        CHECK(Rational(level_square_count(spec, k)) * q == 1); // total mass 1
    }
    // children of Q_{k-1} reconstruct the parent mass: families multiply
    for (int k = 2; k <= spec.levels; ++k) {
        const LevelRow& prev = spec.rows[static_cast<size_t>(k - 2)];
        Integer Dp = prev.m - prev.n;
        auto pow_count = [&](const BetaSystem& sys, const Integer& len, const Integer& e) {
            Rational acc(1);
            Integer c = len == 0 ? Integer(1) : count_words(sys, static_cast<long>(len.get_si()));
            for (Integer i = 0; i < e; ++i) acc *= Rational(c);
            return acc;
        };
        Rational fam = pow_count(spec.sys1N, Dp, prev.t_bar) *
                       pow_count(spec.sys1N, prev.r_bar, Integer(1)) *
                       pow_count(spec.sys2N, Dp, prev.t) *
                       pow_count(spec.sys2N, prev.r, Integer(1));
        CHECK(rectangle_measure(spec, k) * fam == square_measure(spec, k - 1));
    }
}

TEST_CASE("unit-base square measure at the seed level") {
    // With an unscaled single level and n_1 = 1 the first rectangle family
    // has (#Sigma^1)^2 = 4 members.
    TargetSequences s = target_sequences(1.0, 0.3, 1);
    LevelSpec spec = level_spec(s, two(), two(), 2);
    CHECK(rectangle_measure(spec, 1) == Rational(1, 4));
    CHECK(square_measure(spec, 1) == Rational(1, 4)); // dividing is trivial for equal bases
}

TEST_CASE("local dimension approaches the closed form") {
    TargetSequences s = target_sequences(1.0, 0.3, 9);
    LevelSpec spec = level_spec(s, two(), two(), 4);
    LocalDimension ld = local_dimension(spec, spec.levels);
    CHECK(std::fabs(ld.ratio - ld.s_closed_form) < 0.06);
    // and the N -> inf limit target 4/7 is already within reach at N = 4
    CHECK(std::fabs(ld.ratio - 4.0 / 7.0) < 0.1);
    // deeper levels track the closed form more closely than the seed levels
    double early = std::fabs(local_dimension(spec, 3).ratio - ld.s_closed_form);
    double late = std::fabs(local_dimension(spec, 9).ratio - ld.s_closed_form);
    CHECK(late < early);
}

TEST_CASE("dividing families are separated in the first direction") {
    // beta2 = 3 with vhat = 0.25 satisfies the hypothesis and forces a
    // nontrivial dividing split at level 1.
    BetaSystem b1 = two();
    BetaSystem b2 = BetaSystem::from_rational(Rational(3));
    TargetSequences s = target_sequences(1.0, 0.25, 1);
    LevelSpec spec = level_spec(s, b1, b2, 2);
    const LevelRow& row = spec.rows[0];
    REQUIRE(row.t_tilde >= 1);

    // assemble the dividing words over a fixed level-1 base word
    auto sep_word = [&](Word& w) {
        for (int i = 0; i < spec.N; ++i) w.push_back(0);
        w.push_back(1);
        for (int i = 0; i < spec.N; ++i) w.push_back(0);
    };
    Word base;
    for (long i = 0; i < row.n.get_si(); ++i) base.push_back(0);
    sep_word(base);
    for (long i = 0; i < Integer(row.m - row.n).get_si(); ++i) base.push_back(0);
    sep_word(base);
    REQUIRE(static_cast<long>(base.size()) == row.h.get_si());

    std::vector<Word> family;
    long D = Integer(row.m - row.n).get_si();
    enumerate_words(spec.sys1N, D, [&](const Word& slot) {
        Word w = base;
        w.insert(w.end(), slot.begin(), slot.end());
        sep_word(w);
        for (long i = 0; i < row.r_tilde.get_si(); ++i) w.push_back(0);
        sep_word(w);
        REQUIRE(static_cast<long>(w.size()) == row.h_tilde.get_si());
        family.push_back(w);
        return true;
    });
    REQUIRE(family.size() >= 2);
    FieldElement width = b1.beta_pow_neg(row.h_tilde.get_si());
    for (size_t i = 0; i + 1 < family.size(); ++i) {
        ExactCylinder a = exact_cylinder(b1, family[i]);
        ExactCylinder b = exact_cylinder(b1, family[i + 1]);
        // d_1 distance between consecutive family cylinders
        FieldElement gap = b.left - (a.left + width);
        CHECK(gap.sign() >= 0);
        CHECK((gap - width).sign() >= 0); // separated by at least one width
    }
}
