#include "betadyn/beta_system.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace betadyn {

struct BetaSystem::Impl {
    PrecisionPolicy policy;
    bool periodic_kind = false;

    // Exact kind
    FieldPtr field;             // Q(beta); degree 1 for rational beta
    FieldElement beta_elem;
    FieldElement beta_inv;

    // Periodic kind
    std::vector<int> period;    // quasi-greedy expansion of 1, repeated
    RealNumber value;           // numeric root (irrational here)

    int alphabet = 0;
    double beta_double = 0;

    // Expansion-of-1 cache (exact kind); guarded by mu.
    mutable std::mutex mu;
    mutable std::vector<int> raw_digits;     // digits of eps(1, beta) computed so far
    mutable FieldElement orbit1;             // T^k(1), k = raw_digits.size()
    mutable bool terminated = false;
    mutable int term_index = 0;
    mutable int term_last = 0;

    int eps_star_at(long i) const; // 1-indexed, extends the cache as needed
    void extend_raw(long upto) const;
};

namespace {

int checked_digit(const Integer& d, const char* what) {
    if (d < 0 || d > 1000000) throw DomainError(std::string("digit out of range in ") + what);
    return static_cast<int>(d.get_si());
}

} // namespace

void BetaSystem::Impl::extend_raw(long upto) const {
    // caller holds mu
    while (!terminated && static_cast<long>(raw_digits.size()) < upto) {
        FieldElement y = orbit1.mul_generator();
        Integer d = y.certified_floor();
        FieldElement u = y - Rational(d);
        raw_digits.push_back(checked_digit(d, "expansion of 1"));
        orbit1 = u;
        if (u.is_zero()) {
            terminated = true;
            term_index = static_cast<int>(raw_digits.size());
            term_last = raw_digits.back();
        }
    }
}

int BetaSystem::Impl::eps_star_at(long i) const {
    // 1-indexed digit of eps*(1, beta)
    if (periodic_kind) {
        return period[static_cast<size_t>((i - 1) % static_cast<long>(period.size()))];
    }
    std::lock_guard<std::mutex> lock(mu);
    if (!terminated) extend_raw(i);
    if (terminated) {
        // periodic rewrite (d_1 ... d_{n-1} (d_n - 1))^inf
        long n = term_index;
        long j = (i - 1) % n; // 0-based within the period
        int d = raw_digits[static_cast<size_t>(j)];
        if (j == n - 1) d -= 1;
        return d;
    }
    return raw_digits[static_cast<size_t>(i - 1)];
}

BetaSystem BetaSystem::from_string(const std::string& text, PrecisionPolicy policy) {
    return from_real(RealNumber::parse(text), policy);
}

BetaSystem BetaSystem::from_rational(Rational beta, PrecisionPolicy policy) {
    return from_real(RealNumber(std::move(beta)), policy);
}

BetaSystem BetaSystem::from_real(RealNumber beta, PrecisionPolicy policy) {
    auto impl = std::make_shared<Impl>();
    impl->policy = policy;
    if (beta.is_rational()) {
        const Rational& q = beta.rational();
        if (q <= 1) throw DomainError("beta must exceed 1");
        impl->field = NumberField::make_rational(q);
    } else {
        auto root = beta.algebraic();
        auto [lo, hi] = root->enclosure(16);
        if (!(hi > 1)) throw DomainError("beta must exceed 1");
        if (!(lo > 1)) {
            auto [lo2, hi2] = root->enclosure(128);
            if (!(lo2 > 1)) throw DomainError("beta must exceed 1");
        }
        impl->field = NumberField::make_algebraic(root->polynomial(), lo, hi);
    }
    impl->beta_elem = impl->field->generator();
    impl->beta_inv = impl->beta_elem.inverse();
    impl->alphabet = checked_digit(impl->beta_elem.certified_floor(), "alphabet");
    impl->beta_double = impl->field->generator_double();
    impl->orbit1 = impl->field->one();
    return BetaSystem(std::move(impl));
}

BetaSystem BetaSystem::from_periodic(std::vector<int> period, RealNumber value,
                                     PrecisionPolicy policy) {
    if (period.empty()) throw DomainError("empty period word");
    if (value.is_rational()) {
        // e.g. a truncation base that happens to be an integer
        return from_rational(value.rational(), policy);
    }
    auto impl = std::make_shared<Impl>();
    impl->policy = policy;
    impl->periodic_kind = true;
    impl->period = std::move(period);
    impl->value = value;
    impl->beta_double = value.to_double();
    // floor of an irrational root: refine until certain
    for (int bits = 32;; bits *= 2) {
        auto [lo, hi] = value.enclosure(bits);
        Integer flo = rational_floor(lo), fhi = rational_floor(hi);
        if (flo == fhi) {
            impl->alphabet = checked_digit(flo, "alphabet");
            break;
        }
        if (bits > (1 << 14)) throw AmbiguousError("cannot certify floor of the base");
    }
    // Self-consistency: the period must be a quasi-greedy word (every rotation
    // weakly below the word itself).
    const auto& p = impl->period;
    long q = static_cast<long>(p.size());
    for (long s = 1; s < q; ++s) {
        for (long j = 0; j < 2 * q; ++j) {
            int a = p[static_cast<size_t>((s + j) % q)];
            int b = p[static_cast<size_t>(j % q)];
            if (a < b) break;
            if (a > b) throw DomainError("period word is not quasi-greedy");
        }
    }
    return BetaSystem(std::move(impl));
}

int BetaSystem::alphabet_max() const { return impl_->alphabet; }

Scalar BetaSystem::beta(int bits) const {
    if (bits <= 0) bits = impl_->policy.base_bits;
    if (!impl_->periodic_kind) return impl_->beta_elem.to_scalar(bits);
    return impl_->value.to_scalar(bits);
}

double BetaSystem::beta_d() const { return impl_->beta_double; }

double BetaSystem::log2_beta() const { return std::log2(impl_->beta_double); }

const PrecisionPolicy& BetaSystem::policy() const { return impl_->policy; }

bool BetaSystem::exact() const { return !impl_->periodic_kind; }

std::string BetaSystem::describe() const {
    std::ostringstream os;
    if (!impl_->periodic_kind) {
        if (impl_->field->is_rational()) os << impl_->field->rational_value().get_str();
        else os << "root of " << "(deg " << impl_->field->degree() << ") ~ " << beta_d();
    } else {
        os << "periodic base ~ " << beta_d();
    }
    return os.str();
}

const FieldPtr& BetaSystem::field() const {
    if (impl_->periodic_kind) throw DomainError("base has no exact field representation");
    return impl_->field;
}

// ---------------------------------------------------------------------------
// Transformation and digits

namespace {

// Check x in [0,1] for scalar input; conservative for intervals.
void check_unit_range(const Scalar& x) {
    auto lo_ok = Scalar::exact(0).compare(x); // 0 <= x ?
    auto hi_ok = x.compare(Scalar::exact(1)); // x <= 1 ?
    if (lo_ok.has_value() && *lo_ok > 0) throw DomainError("x below 0");
    if (hi_ok.has_value() && *hi_ok > 0) throw DomainError("x above 1");
}

} // namespace

Scalar BetaSystem::transform(const Scalar& x) const {
    check_unit_range(x);
    if (exact() && x.is_exact()) {
        FieldElement u = impl_->field->from_rational(x.rational());
        FieldElement y = u.mul_generator();
        Integer d = y.certified_floor();
        FieldElement t = y - Rational(d);
        return t.to_scalar(impl_->policy.base_bits);
    }
    // Interval path with escalation.
    int bits = std::max(x.precision(), impl_->policy.base_bits);
    while (true) {
        Scalar b = beta(bits);
        Scalar y = b * x.widen_precision(std::max(bits, x.precision()));
        auto d = y.certified_floor();
        if (d.has_value()) return y - Scalar::exact(Rational(*d));
        if (bits >= impl_->policy.ceiling_bits)
            throw AmbiguousError("transform: digit undecidable at the precision ceiling");
        bits *= 2;
    }
}

struct BetaSystem::DigitIterator::State {
    BetaSystem sys;
    bool exact_path = false;
    // exact path
    FieldElement u;
    // interval path
    Scalar x0;
    std::vector<int> digits;
    int bits = 0;
};

BetaSystem::DigitIterator BetaSystem::expansion_iterator(const Scalar& x) const {
    check_unit_range(x);
    DigitIterator it;
    it.st_ = std::make_shared<DigitIterator::State>();
    it.st_->sys = *this;
    if (exact() && x.is_exact()) {
        it.st_->exact_path = true;
        it.st_->u = impl_->field->from_rational(x.rational());
    } else {
        it.st_->x0 = x;
        it.st_->bits = std::max(x.precision(), impl_->policy.base_bits);
    }
    return it;
}

int BetaSystem::DigitIterator::next() {
    State& s = *st_;
    if (s.exact_path) {
        FieldElement y = s.u.mul_generator();
        Integer d = y.certified_floor();
        s.u = y - Rational(d);
        return checked_digit(d, "expansion");
    }
    // Interval path: replay from x0 on escalation.
    while (true) {
        Scalar cur = s.x0.widen_precision(std::max(s.bits, s.x0.precision()));
        Scalar b = s.sys.beta(s.bits);
        bool ok = true;
        std::optional<int> out;
        std::vector<int> seen;
        for (size_t i = 0; i <= s.digits.size(); ++i) {
            Scalar y = b * cur;
            auto d = y.certified_floor();
            if (!d.has_value()) {
                ok = false;
                break;
            }
            int di = checked_digit(*d, "expansion");
            if (i < s.digits.size() && di != s.digits[i])
                throw AmbiguousError("digit changed under refinement; enclosure too wide");
            cur = y - Scalar::exact(Rational(*d));
            if (i == s.digits.size()) out = di;
        }
        if (ok && out.has_value()) {
            s.digits.push_back(*out);
            return *out;
        }
        if (s.bits >= s.sys.policy().ceiling_bits)
            throw AmbiguousError("digit undecidable at the precision ceiling");
        s.bits *= 2;
    }
}

Word BetaSystem::digits(const Scalar& x, long n) const {
    if (n < 0) throw DomainError("digit count must be nonnegative");
    Word w;
    w.reserve(static_cast<size_t>(n));
    auto it = expansion_iterator(x);
    for (long i = 0; i < n; ++i) w.push_back(it.next());
    return w;
}

// ---------------------------------------------------------------------------
// Expansion of 1 and truncations

std::vector<int> BetaSystem::epsilon_star(long n) const {
    if (n < 0) throw DomainError("digit count must be nonnegative");
    std::vector<int> out;
    out.reserve(static_cast<size_t>(n));
    for (long i = 1; i <= n; ++i) out.push_back(impl_->eps_star_at(i));
    return out;
}

SimpleParry BetaSystem::simple_parry(long probe_depth) const {
    SimpleParry sp;
    sp.probed_depth = probe_depth;
    if (impl_->periodic_kind) {
        // Constructed from a terminating expansion by definition.
        sp.status = ParryStatus::Yes;
        sp.terminal_index = static_cast<int>(impl_->period.size());
        sp.last_digit = impl_->period.back() + 1;
        return sp;
    }
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (!impl_->terminated) impl_->extend_raw(probe_depth);
    if (impl_->terminated) {
        sp.status = ParryStatus::Yes;
        sp.terminal_index = impl_->term_index;
        sp.last_digit = impl_->term_last;
    } else {
        sp.status = ParryStatus::NoWithinDepth;
    }
    return sp;
}

RealNumber BetaSystem::beta_truncation_value(int N) const {
    if (N < 1) throw DomainError("truncation order must be positive");
    std::vector<int> eps = epsilon_star(N);
    if (eps[static_cast<size_t>(N - 1)] == 0)
        throw InvalidTruncationError("eps*_N(1,beta) = 0 at N=" + std::to_string(N));
    // P(z) = z^N - eps_1 z^{N-1} - ... - eps_N, the unique root > 1 of
    // 1 = sum eps_i z^-i when sum eps_i > 1.
    long digit_sum = 0;
    for (int d : eps) digit_sum += d;
    if (digit_sum <= 1)
        throw DegenerateRootError("truncation root is not > 1 at N=" + std::to_string(N));
    IntPolynomial P;
    P.c.assign(static_cast<size_t>(N) + 1, Integer(0));
    P.c[static_cast<size_t>(N)] = 1;
    for (int i = 1; i <= N; ++i)
        P.c[static_cast<size_t>(N - i)] = -Integer(eps[static_cast<size_t>(i - 1)]);
    // integer root?
    for (long k = 2; k <= alphabet_max() + 1; ++k) {
        if (P.eval(Rational(k)) == 0) return RealNumber(Rational(k));
    }
    Rational hi(alphabet_max() + 1);
    if (P.eval(hi) == 0) hi += 1; // cannot happen after the scan, but keep the bracket strict
    auto root = std::make_shared<AlgebraicReal>(P, Rational(1), hi);
    // sanity: 1 < beta_N < beta
    for (int bits = 64; bits <= 1024; bits *= 2) {
        auto [lo, rhs] = root->enclosure(bits);
        auto [blo, bhi] = exact() ? impl_->field->generator_enclosure(bits)
                                  : impl_->value.enclosure(bits);
        if (rhs < blo && lo > 1) break;
        if (bits >= 1024)
            throw DegenerateRootError("truncation root is not strictly inside (1, beta)");
    }
    return RealNumber(std::shared_ptr<const AlgebraicReal>(root));
}

Scalar BetaSystem::beta_truncation(int N) const {
    return beta_truncation_value(N).to_scalar(impl_->policy.base_bits);
}

BetaSystem BetaSystem::truncated_system(int N) const {
    RealNumber val = beta_truncation_value(N);
    std::vector<int> eps = epsilon_star(N);
    std::vector<int> period = eps;
    period[static_cast<size_t>(N - 1)] -= 1;
    return from_periodic(std::move(period), std::move(val), impl_->policy);
}

// ---------------------------------------------------------------------------
// Exact word values

FieldElement BetaSystem::word_value(const Word& w) const {
    if (impl_->periodic_kind) throw DomainError("word_value requires an exact base");
    FieldElement acc = impl_->field->zero();
    for (int d : w) acc = acc.mul_generator() + impl_->field->from_rational(Rational(d));
    // acc = sum w_i beta^{n-i}; scale by beta^-n
    return acc * impl_->beta_inv.pow(static_cast<long>(w.size()));
}

FieldElement BetaSystem::beta_pow_neg(long n) const {
    if (impl_->periodic_kind) throw DomainError("beta_pow_neg requires an exact base");
    return impl_->beta_inv.pow(n);
}

} // namespace betadyn
