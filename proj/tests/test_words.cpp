#include <doctest.h>

#include <random>

#include "betadyn/words.hpp"
#include "oracles.hpp"

using namespace betadyn;

namespace {

BetaSystem phi_system() { return BetaSystem::from_string("root:z^2-z-1:[1.6,1.7]"); }

// All words over {0..amax}^n, for brute-force cross-checks.
void all_words(int amax, int n, const std::function<void(const Word&)>& fn) {
    Word w(static_cast<size_t>(n), 0);
    while (true) {
        fn(w);
        int i = n - 1;
        while (i >= 0 && w[static_cast<size_t>(i)] == amax) {
            w[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++w[static_cast<size_t>(i)];
    }
}

} // namespace

TEST_CASE("lexicographic order with the padding convention") {
    CHECK(lex_compare(Word{1, 0}, Word{1, 1}) == Cmp::Less);
    CHECK(lex_compare(Word{1}, Word{1, 0, 0}) == Cmp::Equal);
    CHECK(lex_compare(Word{2}, Word{1, 9}) == Cmp::Greater);
    DigitStream phi_star = DigitStream::periodic({1, 0});
    CHECK(lex_compare(Word{1, 0, 1}, phi_star) == Cmp::Less);
    CHECK(lex_compare(phi_star, Word{1, 0, 1}) == Cmp::Greater);
}

TEST_CASE("admissibility under the golden ratio") {
    BetaSystem phi = phi_system();
    CHECK(!is_admissible(phi, Word{1, 1}));
    CHECK(is_admissible(phi, Word{1, 0, 1, 0, 0, 1}));
    CHECK(is_admissible(phi, Word{0, 0, 0}));
    CHECK_THROWS_AS(is_admissible(phi, Word{2, 0}), DomainError);
}

TEST_CASE("every binary word is admissible in base 2") {
    BetaSystem two = BetaSystem::from_rational(Rational(2));
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 50; ++iter) {
        Word w;
        for (int i = 0; i < 12; ++i) w.push_back(static_cast<int>(rng() & 1));
        CHECK(is_admissible(two, w));
    }
    CHECK(!is_admissible(two, Word{2})); // digit 2 only ever starts the expansion of 1
}

TEST_CASE("admissibility agrees with the literal criterion") {
    // golden ratio: eps* = (10)^inf
    BetaSystem phi = phi_system();
    auto eps_phi = [](long j) { return j % 2 == 0 ? 1 : 0; };
    int count = 0;
    all_words(1, 8, [&](const Word& w) {
        bool lib = is_admissible(phi, w);
        bool orc = oracles::admissible_by_definition(w, eps_phi);
        CHECK(lib == orc);
        if (lib) ++count;
    });
    CHECK(count == 55); // the Fibonacci count at length 8

    // 5/2: eps digits from the exact rational orbit of 1
    BetaSystem fh = BetaSystem::from_rational(Rational(5, 2));
    auto eps52 = oracles::rational_digits(oracles::Rat(5, 2), oracles::Rat(1), 64);
    auto eps_fn = [&](long j) { return eps52[static_cast<size_t>(j)]; };
    all_words(2, 6, [&](const Word& w) {
        CHECK(is_admissible(fh, w) == oracles::admissible_by_definition(w, eps_fn, 60));
    });
}

TEST_CASE("word counts") {
    BetaSystem two = BetaSystem::from_rational(Rational(2));
    CHECK(count_words(two, 10, CountMethod::Enumerate) == 1024);
    CHECK(count_words(two, 10, CountMethod::Automaton) == 1024);

    BetaSystem phi = phi_system();
    CHECK(count_words(phi, 5, CountMethod::Enumerate) == 13);
    // Fibonacci pattern c(n) = c(n-1) + c(n-2), c(1)=2, c(2)=3
    Integer a = 2, b = 3;
    CHECK(count_words(phi, 1) == a);
    CHECK(count_words(phi, 2) == b);
    for (long n = 3; n <= 12; ++n) {
        Integer c = a + b;
        CHECK(count_words(phi, n, CountMethod::Automaton) == c);
        a = b;
        b = c;
    }

    BetaSystem fh = BetaSystem::from_rational(Rational(5, 2));
    Integer c8 = count_words(fh, 8, CountMethod::Enumerate);
    // Renyi bounds beta^n <= count <= beta^{n+1}/(beta-1), exact rationals
    Rational lo = Scalar::exact(Rational(5, 2)).pow_int(8).rational();
    Rational hi = Scalar::exact(Rational(5, 2)).pow_int(9).rational() / Rational(3, 2);
    CHECK(Rational(c8) >= lo);
    CHECK(Rational(c8) <= hi);
}

TEST_CASE("automaton and enumeration agree") {
    for (const char* bs : {"2", "5/2", "root:z^2-z-1:[1.6,1.7]"}) {
        BetaSystem sys = BetaSystem::from_string(bs);
        for (long n = 1; n <= 14; ++n) {
            if (sys.alphabet_max() >= 2 && n > 12) continue; // keep the brute force quick
            CHECK(count_words(sys, n, CountMethod::Automaton) ==
                  count_words(sys, n, CountMethod::Enumerate));
        }
    }
}

TEST_CASE("counting automaton structure") {
    auto a = CountingAutomaton::build(phi_system());
    REQUIRE(a.has_value());
    CHECK(a->states() == 2);
    for (int s = 0; s < a->states(); ++s) {
        Integer row = 0;
        for (const auto& c : a->transition_counts()[static_cast<size_t>(s)]) row += c;
        CHECK(row <= 2); // alphabet_max + 1
    }
    // no automaton for a non-Parry rational base
    CHECK(!CountingAutomaton::build(BetaSystem::from_rational(Rational(5, 2))).has_value());
}

TEST_CASE("successor") {
    BetaSystem two = BetaSystem::from_rational(Rational(2));
    CHECK(successor(two, Word{0, 1, 1}).value() == Word{1, 0, 0});
    BetaSystem phi = phi_system();
    CHECK(successor(phi, Word{0, 1}).value() == Word{1, 0});
    CHECK(!successor(phi, Word{1, 0}).has_value());
    CHECK_THROWS_AS(successor(phi, Word{1, 1}), NotAdmissibleError);
}

TEST_CASE("successor enumerates exactly the admissible words") {
    for (const char* bs : {"5/2", "root:z^2-z-1:[1.6,1.7]"}) {
        BetaSystem sys = BetaSystem::from_string(bs);
        long n = 6;
        Integer expected = count_words(sys, n);
        Word w(static_cast<size_t>(n), 0);
        Integer seen = 1;
        Word prev = w;
        while (auto nx = successor(sys, w)) {
            CHECK(lex_compare(prev, *nx) == Cmp::Less);
            prev = *nx;
            w = *nx;
            seen += 1;
        }
        CHECK(seen == expected);
    }
}

TEST_CASE("enumeration streams words in lexicographic order") {
    BetaSystem phi = phi_system();
    std::vector<Word> words;
    enumerate_words(phi, 4, [&](const Word& w) {
        words.push_back(w);
        return true;
    });
    CHECK(words.size() == 8); // Fibonacci: c(4) = 8
    for (size_t i = 1; i < words.size(); ++i)
        CHECK(lex_compare(words[i - 1], words[i]) == Cmp::Less);
}

TEST_CASE("pad_full") {
    BetaSystem phi = phi_system();
    CHECK(pad_full(phi, Word{1, 0}, 3) == Word{1, 0, 0, 0, 0});
    CHECK_THROWS_AS(pad_full(phi, Word{1, 1}, 3), NotAdmissibleError);
    BetaSystem two = BetaSystem::from_rational(Rational(2));
    CHECK(pad_full(two, Word{1}, 1) == Word{1, 0});
}

TEST_CASE("truncated languages embed into the full language") {
    BetaSystem phi = phi_system();
    for (int N : {3, 5}) {
        BetaSystem trunc = phi.truncated_system(N);
        long n = 6;
        enumerate_words(trunc, n, [&](const Word& w) {
            CHECK(is_admissible(phi, w));
            return true;
        });
        CHECK(count_words(trunc, n) <= count_words(phi, n));
    }
}

TEST_CASE("cubic bases: the walker matches the literal criterion") {
    // tribonacci base: the expansion of 1 terminates as 111, rewritten (110)^inf
    BetaSystem trib = BetaSystem::from_string("root:z^3-z^2-z-1:[1.8,1.9]");
    CHECK(trib.epsilon_star(6) == std::vector<int>{1, 1, 0, 1, 1, 0});
    SimpleParry sp = trib.simple_parry();
    CHECK(sp.status == ParryStatus::Yes);
    CHECK(sp.terminal_index == 3);

    // plastic base: the orbit of 1 hits zero exactly at step 5 (rho^3 = rho + 1)
    BetaSystem plastic = BetaSystem::from_string("root:z^3-z-1:[1.3,1.4]");
    SimpleParry pp = plastic.simple_parry();
    CHECK(pp.status == ParryStatus::Yes);
    CHECK(pp.terminal_index == 5);
    CHECK(plastic.epsilon_star(10) == std::vector<int>{1, 0, 0, 0, 0, 1, 0, 0, 0, 0});

    // the square of the golden ratio: the expansion of 1 is 2 1 1 1 ... and
    // never terminates
    BetaSystem phisq = BetaSystem::from_string("root:z^2-3z+1:[2.5,2.7]");
    CHECK(phisq.epsilon_star(5) == std::vector<int>{2, 1, 1, 1, 1});
    CHECK(phisq.simple_parry(256).status == ParryStatus::NoWithinDepth);

    for (const BetaSystem& sys : {trib, plastic, phisq}) {
        std::vector<int> eps = sys.epsilon_star(64);
        auto eps_fn = [&](long j) { return eps[static_cast<size_t>(j)]; };
        long count_lib = 0, count_orc = 0;
        all_words(sys.alphabet_max(), 10, [&](const Word& w) {
            bool lib = is_admissible(sys, w);
            bool orc = oracles::admissible_by_definition(w, eps_fn, 50);
            CHECK(lib == orc);
            count_lib += lib;
            count_orc += orc;
        });
        CHECK(count_lib == count_orc);
        CHECK(count_words(sys, 10) == count_lib);
    }
}

TEST_CASE("budgets cap runaway enumerations") {
    BetaSystem fh = BetaSystem::from_rational(Rational(5, 2));
    Budget tiny;
    tiny.max_nodes = 50;
    CHECK_THROWS_AS(count_words(fh, 12, CountMethod::Enumerate, tiny), BudgetExceededError);
}

TEST_CASE("undecidable stream comparisons surface the scan limit") {
    DigitStream zeros = DigitStream::periodic({0});
    CHECK_THROWS_AS(lex_compare(Word{0}, zeros, 64), BudgetExceededError);
}

TEST_CASE("word formatting round-trip") {
    Word w{1, 0, 2, 1};
    CHECK(word_from_string(word_to_string(w)) == w);
    CHECK(word_from_string("1,1") == Word{1, 1});
}
