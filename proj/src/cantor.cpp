#include "betadyn/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

namespace betadyn {

namespace {

Integer floor_rational_mul(const Rational& q, const Integer& n) {
    Rational prod = q * Rational(n);
    return rational_floor(prod);
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

TargetSequences make_targets(double v, double vhat, int levels, long scale) {
    TargetSequences seq;
    seq.v = v;
    seq.vhat = vhat;
    seq.levels = levels;
    Rational one_plus_v(1 + v); // dyadic, exact
    if (vhat > 0) {
        Rational ratio = Rational(v) / Rational(vhat);
        Integer n(scale);
        for (int k = 1; k <= levels; ++k) {
            seq.n.push_back(n);
            seq.m.push_back(floor_rational_mul(one_plus_v, n) + 1);
            n = floor_rational_mul(ratio, n) + 2;
        }
    } else {
        for (int k = 1; k <= levels; ++k) {
            Integer n;
            mpz_ui_pow_ui(n.get_mpz_t(), 2, 1UL << static_cast<unsigned>(k));
            n *= scale;
            seq.n.push_back(n);
            seq.m.push_back(floor_rational_mul(one_plus_v, n) + 1);
        }
    }
    return seq;
}

} // namespace

TargetSequences target_sequences(double v, double vhat, int levels) {
    if (levels < 1) throw DomainError("need at least one level");
    if (!(v > 0) || std::isinf(v) || std::isnan(v))
        throw RegimeUnsupportedError("v must be positive and finite");
    if (vhat < 0 || std::isnan(vhat)) throw RegimeUnsupportedError("vhat must be nonnegative");
    if (vhat > v / (1 + v))
        throw RegimeUnsupportedError("vhat exceeds v/(1+v); no such points exist");
    return make_targets(v, vhat, levels, 1);
}

// ---------------------------------------------------------------------------
// Level bookkeeping

namespace {

// Certified floor(h * log_{beta1} beta2). Detects the exact cases (equal
// bases, small power relations) and otherwise evaluates with escalating
// interval precision.
bool bases_equal(const BetaSystem& sys1, const BetaSystem& sys2) {
    if (!sys1.exact() || !sys2.exact()) return false;
    const bool r1 = sys1.field()->is_rational();
    const bool r2 = sys2.field()->is_rational();
    if (r1 != r2) return false; // rational vs irrational
    if (r1) return sys1.field()->rational_value() == sys2.field()->rational_value();
    // Same monic minimal polynomial and overlapping isolating intervals
    // identify the same root.
    if (sys1.field()->modulus() != sys2.field()->modulus()) return false;
    auto [a, b] = sys1.field()->generator_enclosure(96);
    auto [c, d] = sys2.field()->generator_enclosure(96);
    return !(b < c || d < a);
}

Integer floor_h_log(const Integer& h, const BetaSystem& sys1, const BetaSystem& sys2) {
    if (bases_equal(sys1, sys2)) return h; // log ratio is exactly 1
    auto exact_equal_pow = [&](int p, int q) -> bool {
        // beta2^q == beta1^p ?
        const bool r1 = sys1.exact() && sys1.field()->is_rational();
        const bool r2 = sys2.exact() && sys2.field()->is_rational();
        if (r1 && r2) {
            Rational lhs = sys2.field()->rational_value();
            Rational rhs = sys1.field()->rational_value();
            Scalar l = Scalar::exact(lhs).pow_int(q);
            Scalar r = Scalar::exact(rhs).pow_int(p);
            return l.compare(r) == 0;
        }
        if (sys1.exact() && sys2.exact() && sys1.field() == sys2.field()) {
            FieldElement l = sys2.field()->generator().pow(q);
            FieldElement r = sys1.field()->generator().pow(p);
            return (l - r).is_zero();
        }
        return false;
    };
    for (int q = 1; q <= 6; ++q)
        for (int p = q; p <= 6 * q; ++p)
            if (exact_equal_pow(p, q)) {
                // log ratio = p/q exactly
                Rational ratio(p, q);
                return floor_rational_mul(ratio, h);
            }
    // interval evaluation
    size_t hbits = mpz_sizeinbase(h.get_mpz_t(), 2);
    for (int extra = 128; extra <= 8192; extra *= 2) {
        int bits = static_cast<int>(hbits) + extra;
        Scalar b1 = sys1.beta(bits), b2 = sys2.beta(bits);
        mpfr_t l1, u1, l2, u2, rl, ru, hh, pl, pu;
        mpfr_inits2(bits, l1, u1, l2, u2, rl, ru, hh, pl, pu, (mpfr_ptr) nullptr);
        auto setends = [&](const Scalar& s, mpfr_ptr lo, mpfr_ptr up) {
            if (s.is_exact()) {
                mpfr_set_q(lo, s.rational().get_mpq_t(), MPFR_RNDD);
                mpfr_set_q(up, s.rational().get_mpq_t(), MPFR_RNDU);
            } else {
                mpfr_set(lo, s.lower().get(), MPFR_RNDD);
                mpfr_set(up, s.upper().get(), MPFR_RNDU);
            }
        };
        setends(b1, l1, u1);
        setends(b2, l2, u2);
        // log ratio in [log(b2.lo)/log(b1.hi), log(b2.hi)/log(b1.lo)]
        mpfr_log(l2, l2, MPFR_RNDD);
        mpfr_log(u2, u2, MPFR_RNDU);
        mpfr_log(l1, l1, MPFR_RNDD);
        mpfr_log(u1, u1, MPFR_RNDU);
        mpfr_div(rl, l2, u1, MPFR_RNDD);
        mpfr_div(ru, u2, l1, MPFR_RNDU);
        mpfr_set_z(hh, h.get_mpz_t(), MPFR_RNDN); // exact at this precision
        mpfr_mul(pl, rl, hh, MPFR_RNDD);
        mpfr_mul(pu, ru, hh, MPFR_RNDU);
        mpfr_floor(pl, pl);
        mpfr_floor(pu, pu);
        Integer flo, fhi;
        mpfr_get_z(flo.get_mpz_t(), pl, MPFR_RNDN);
        mpfr_get_z(fhi.get_mpz_t(), pu, MPFR_RNDN);
        mpfr_clears(l1, u1, l2, u2, rl, ru, hh, pl, pu, (mpfr_ptr) nullptr);
        if (flo == fhi) return flo;
    }
    throw AmbiguousError("floor(h log_beta1 beta2) undecidable; bases may satisfy an "
                         "unrecognized power relation");
}

struct SplitResult {
    Integer t, r;
};

// X = t*unit + r with 0 <= r < unit (plain Euclidean division; the exact
// length identities are what the construction depends on).
SplitResult split(const Integer& X, const Integer& unit) {
    SplitResult s;
    mpz_fdiv_qr(s.t.get_mpz_t(), s.r.get_mpz_t(), X.get_mpz_t(), unit.get_mpz_t());
    return s;
}

int pick_default_N(const BetaSystem& s1, const BetaSystem& s2) {
    for (int N = 1; N <= 64; ++N) {
        try {
            (void)s1.beta_truncation_value(N);
            (void)s2.beta_truncation_value(N);
            return N;
        } catch (const InvalidTruncationError&) {
        } catch (const DegenerateRootError&) {
        }
    }
    throw InvalidTruncationError("no valid truncation order <= 64 for both bases");
}

} // namespace

bool log_condition_holds(const BetaSystem& sys1, const BetaSystem& sys2, double v, double vhat) {
    double L = std::log(sys1.beta_d()) / std::log(sys2.beta_d());
    if (vhat <= 0) return true;
    double bound = std::isinf(v) ? vhat : (vhat / v) * (1 + v);
    return L > bound;
}

LevelSpec level_spec(const TargetSequences& seq, const BetaSystem& sys1, const BetaSystem& sys2,
                     int N) {
    if (seq.levels < 1 || seq.n.empty()) throw DomainError("empty target sequences");
    {
        auto c = sys1.beta(96).compare(sys2.beta(96));
        if (c.has_value() && *c > 0) throw DomainError("need beta2 >= beta1");
    }
    if (!log_condition_holds(sys1, sys2, seq.v, seq.vhat))
        throw ConditionViolatedError("log_beta2(beta1) <= (vhat/v)(1+v)");

    LevelSpec spec;
    spec.v = seq.v;
    spec.vhat = seq.vhat;
    spec.levels = seq.levels;
    spec.sys1 = sys1;
    spec.sys2 = sys2;
    spec.N = N > 0 ? N : pick_default_N(sys1, sys2);
    spec.sys1N = sys1.truncated_system(spec.N);
    spec.sys2N = sys2.truncated_system(spec.N);

    const Integer sep(2 * spec.N + 1);

    auto try_build = [&](const TargetSequences& s, std::vector<LevelRow>& rows) -> bool {
        rows.clear();
        rows.resize(static_cast<size_t>(s.levels));
        for (int k = 0; k < s.levels; ++k) {
            LevelRow& row = rows[static_cast<size_t>(k)];
            row.n = s.n[static_cast<size_t>(k)];
            row.m = s.m[static_cast<size_t>(k)];
        }
        for (int k = 0; k < s.levels; ++k) {
            LevelRow& row = rows[static_cast<size_t>(k)];
            Integer D = row.m - row.n;
            if (k == 0) {
                row.l = row.n + sep;
            } else {
                LevelRow& prev = rows[static_cast<size_t>(k - 1)];
                Integer Dp = prev.m - prev.n;
                SplitResult tr = split(row.n - prev.m, Dp);
                prev.t = tr.t;
                prev.r = tr.r;
                row.l = prev.h + prev.t * (Dp + sep) + prev.r + sep;
                // sparsity: the new level must start beyond the dividing depth
                Integer Xbar = row.l - prev.h_tilde - sep;
                if (Xbar < 0) return false;
                SplitResult br = split(Xbar, Dp + sep);
                prev.t_bar = br.t;
                prev.r_bar = br.r;
            }
            row.h = row.l + D + sep;
            row.h_tilde = floor_h_log(row.h, sys1, sys2) + sep;
            Integer Xt = row.h_tilde - row.h - sep;
            if (Xt < 0) return false; // cannot happen for beta2 >= beta1
            SplitResult dr = split(Xt, D + sep);
            row.t_tilde = dr.t;
            row.r_tilde = dr.r;
        }
        return true;
    };

    for (long c = 1; c <= 128; ++c) {
        TargetSequences s = (c == 1) ? seq : make_targets(seq.v, seq.vhat, seq.levels, c);
        if (try_build(s, spec.rows)) {
            spec.n1_scale = c;
            return spec;
        }
    }
    throw SparsityViolatedError("no n_1 scaling <= 128 satisfies the level sparsity condition");
}

// ---------------------------------------------------------------------------
// Point sampling

namespace {

struct Unit {
    enum class Kind { Slot, ZeroBlock } kind = Kind::Slot;
    Integer len;   // slot or zero-block length
    Integer count; // repetitions (slot+separator each)
};

struct CoordGen {
    LevelSpec spec;
    bool first_coord = true;
    SlotFill fill;
    std::mt19937_64 rng;
    BetaSystem trunc;
    CountingAutomaton automaton; // over the truncated base

    std::deque<Unit> units;
    int next_level = 0; // 0-based level to schedule next

    // in-progress unit state
    bool in_unit = false;
    Unit cur;
    Integer cur_remaining;   // digits left in the current slot/zero block
    int sep_pos = -1;        // -1: not in separator; otherwise 0..2N
    int walk_state = 0;
    std::vector<int8_t> pending_custom; // custom slot digits
    size_t pending_idx = 0;

    bool schedule_level() {
        if (next_level >= spec.levels) return false;
        const auto& rows = spec.rows;
        int k = next_level;
        const LevelRow& row = rows[static_cast<size_t>(k)];
        Integer D = row.m - row.n;
        if (first_coord) {
            if (k == 0) {
                units.push_back({Unit::Kind::Slot, row.n, Integer(1)});
            } else {
                const LevelRow& prev = rows[static_cast<size_t>(k - 1)];
                Integer Dp = prev.m - prev.n;
                if (prev.t_bar > 0) units.push_back({Unit::Kind::Slot, Dp, prev.t_bar});
                units.push_back({Unit::Kind::Slot, prev.r_bar, Integer(1)});
            }
            units.push_back({Unit::Kind::ZeroBlock, D, Integer(1)});
            if (row.t_tilde > 0) units.push_back({Unit::Kind::Slot, D, row.t_tilde});
            units.push_back({Unit::Kind::Slot, row.r_tilde, Integer(1)});
        } else {
            if (k == 0) {
                units.push_back({Unit::Kind::Slot, row.n, Integer(1)});
            } else {
                const LevelRow& prev = rows[static_cast<size_t>(k - 1)];
                Integer Dp = prev.m - prev.n;
                if (prev.t > 0) units.push_back({Unit::Kind::Slot, Dp, prev.t});
                units.push_back({Unit::Kind::Slot, prev.r, Integer(1)});
            }
            units.push_back({Unit::Kind::ZeroBlock, D, Integer(1)});
        }
        ++next_level;
        return true;
    }

    void begin_slot_word() {
        walk_state = 0;
        pending_custom.clear();
        pending_idx = 0;
        if (fill.kind == SlotFill::Kind::Custom) {
            if (cur.len > Integer(10'000'000))
                throw BudgetExceededError("custom slot too long to materialize");
            long len = static_cast<long>(cur.len.get_si());
            Word w = fill.custom(trunc, len);
            if (static_cast<long>(w.size()) != len)
                throw SlotLengthMismatchError("selector returned a word of the wrong length");
            int st = 0;
            for (int d : w) {
                if (d < 0 || d > trunc.alphabet_max())
                    throw NotAdmissibleError("selector digit outside the truncated alphabet");
                st = automaton.step(st, d);
                if (st < 0) throw NotAdmissibleError("selector word inadmissible for the truncated base");
            }
            pending_custom.assign(w.begin(), w.end());
        }
    }

    int slot_digit() {
        switch (fill.kind) {
        case SlotFill::Kind::Zeros:
            return 0;
        case SlotFill::Kind::Seeded: {
            int bound = automaton.digit_bound(walk_state);
            std::uniform_int_distribution<int> pick(0, bound);
            int d = pick(rng);
            walk_state = automaton.step(walk_state, d);
            return d;
        }
        case SlotFill::Kind::Custom:
        default:
            return pending_custom[pending_idx++];
        }
    }

    // Appends digits; returns false when the construction is exhausted.
    bool emit(std::vector<int8_t>& buf) {
        size_t target = buf.size() + 4096;
        while (buf.size() < target) {
            if (!in_unit) {
                while (units.empty()) {
                    if (!schedule_level()) return false;
                }
                cur = units.front();
                units.pop_front();
                if (cur.count == 0) continue;
                in_unit = true;
                cur_remaining = cur.len;
                sep_pos = -1;
                if (cur.kind == Unit::Kind::Slot) begin_slot_word();
            }
            // emit current repetition: len digits then separator 0^N 1 0^N
            if (sep_pos < 0) {
                if (cur_remaining > 0) {
                    int d = (cur.kind == Unit::Kind::Slot) ? slot_digit() : 0;
                    buf.push_back(static_cast<int8_t>(d));
                    cur_remaining -= 1;
                    continue;
                }
                sep_pos = 0;
            }
            int N = spec.N;
            if (sep_pos < 2 * N + 1) {
                int d = (sep_pos == N) ? 1 : 0;
                buf.push_back(static_cast<int8_t>(d));
                ++sep_pos;
                continue;
            }
            // repetition finished
            cur.count -= 1;
            if (cur.count > 0) {
                cur_remaining = cur.len;
                sep_pos = -1;
                if (cur.kind == Unit::Kind::Slot) begin_slot_word();
            } else {
                in_unit = false;
            }
        }
        return true;
    }
};

} // namespace

std::pair<DigitStream, DigitStream> sample_point(const LevelSpec& spec, const SlotFill& fill) {
    auto make = [&](bool first) {
        auto g = std::make_shared<CoordGen>();
        g->spec = spec;
        g->first_coord = first;
        g->fill = fill;
        g->rng.seed(mix64(fill.seed ^ (first ? 0x1111ULL : 0x2222ULL)));
        g->trunc = first ? spec.sys1N : spec.sys2N;
        auto a = CountingAutomaton::build(g->trunc);
        if (!a) throw AutomatonUnavailableError("truncated base has no counting automaton");
        g->automaton = *a;
        return DigitStream::from_generator([g](std::vector<int8_t>& buf) { return g->emit(buf); });
    };
    return {make(true), make(false)};
}

// ---------------------------------------------------------------------------
// Measures

namespace {

Integer count_sigma(const BetaSystem& trunc, const Integer& len) {
    if (len == 0) return Integer(1);
    if (len < 0) throw DomainError("negative slot length");
    if (len > Integer(10'000'000)) throw BudgetExceededError("slot count at an infeasible length");
    return count_words(trunc, static_cast<long>(len.get_si()), CountMethod::Automaton);
}

Rational pow_rational(const Rational& base, const Integer& e) {
    if (e < 0) throw DomainError("negative exponent in measure product");
    if (e > Integer(1'000'000)) throw BudgetExceededError("measure exponent too large");
    Rational acc(1);
    unsigned long k = e.get_ui();
    Rational b = base;
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

} // namespace

Rational rectangle_measure(const LevelSpec& spec, int k) {
    if (k < 1 || k > spec.levels) throw DomainError("level out of range");
    const auto& rows = spec.rows;
    Rational mu(1);
    // mu(R_1) = 1 / (#Sigma1^{n1} #Sigma2^{n1})
    mu /= Rational(count_sigma(spec.sys1N, rows[0].n) * count_sigma(spec.sys2N, rows[0].n));
    for (int j = 2; j <= k; ++j) {
        const LevelRow& prev = rows[static_cast<size_t>(j - 2)];
        Integer Dp = prev.m - prev.n;
        // dividing of level j-1 (to reach Q_{j-1}), then the new rectangles
        Rational c1D(count_sigma(spec.sys1N, Dp));
        Rational c2D(count_sigma(spec.sys2N, Dp));
        mu /= pow_rational(c1D, prev.t_tilde) * Rational(count_sigma(spec.sys1N, prev.r_tilde));
        mu /= pow_rational(c1D, prev.t_bar) * Rational(count_sigma(spec.sys1N, prev.r_bar));
        mu /= pow_rational(c2D, prev.t) * Rational(count_sigma(spec.sys2N, prev.r));
    }
    return mu;
}

Rational square_measure(const LevelSpec& spec, int k) {
    if (k < 1 || k > spec.levels) throw DomainError("level out of range");
    const LevelRow& row = spec.rows[static_cast<size_t>(k - 1)];
    Integer D = row.m - row.n;
    Rational mu = rectangle_measure(spec, k);
    Rational c1D(count_sigma(spec.sys1N, D));
    mu /= pow_rational(c1D, row.t_tilde) * Rational(count_sigma(spec.sys1N, row.r_tilde));
    return mu;
}

Integer level_square_count(const LevelSpec& spec, int k) {
    Rational mu = square_measure(spec, k);
    // equal division: the family size is exactly 1/mu
    if (mu.get_num() != 1) throw Error("square measure is not a unit fraction");
    return mu.get_den();
}

namespace {

double log_of_rational(const Rational& q) {
    signed long en, ed;
    double dn = mpz_get_d_2exp(&en, q.get_num().get_mpz_t());
    double dd = mpz_get_d_2exp(&ed, q.get_den().get_mpz_t());
    return (std::log(std::fabs(dn)) + static_cast<double>(en) * std::log(2.0)) -
           (std::log(std::fabs(dd)) + static_cast<double>(ed) * std::log(2.0));
}

} // namespace

LocalDimension local_dimension(const LevelSpec& spec, int k) {
    LocalDimension ld;
    ld.level = k;
    Rational mu = square_measure(spec, k);
    double logmu = log_of_rational(mu);
    double h = Rational(spec.rows[static_cast<size_t>(k - 1)].h).get_d();
    double logq = -h * std::log(spec.sys2.beta_d());
    ld.ratio = logmu / logq;
    double lb2 = std::log(spec.sys2.beta_d());
    double l1N = std::log(spec.sys1N.beta_d()) / lb2;
    double l2N = std::log(spec.sys2N.beta_d()) / lb2;
    double L = std::log(spec.sys1.beta_d()) / lb2;
    double v = spec.v, vh = spec.vhat;
    ld.s_closed_form = (l1N + l2N) * (v - vh - vh * v) / ((1 + v) * (v - vh)) + 1 - L;
    return ld;
}

} // namespace betadyn
