#include "betadyn/precision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <vector>

namespace betadyn {

int PrecisionPolicy::digit_bits(double log2_beta, long depth) const {
    double need = static_cast<double>(depth) * std::max(log2_beta, 0.0);
    long bits = static_cast<long>(std::ceil(need)) + 64;
    bits = std::max<long>(bits, base_bits);
    bits = std::min<long>(bits, ceiling_bits);
    return static_cast<int>(bits);
}

BigFloat::BigFloat(int prec) {
    mpfr_init2(v_, std::max(prec, 2));
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
    std::memcpy(&v_[0], &o.v_[0], sizeof(v_[0]));
    o.owned_ = false;
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
    if (this != &o) {
        if (owned_) mpfr_clear(v_);
        std::memcpy(&v_[0], &o.v_[0], sizeof(v_[0]));
        o.owned_ = false;
        owned_ = true;
    }
    return *this;
}

BigFloat::~BigFloat() {
    if (owned_) mpfr_clear(v_);
}

int BigFloat::precision() const { return static_cast<int>(mpfr_get_prec(v_)); }

double BigFloat::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

std::string BigFloat::str(int sig_digits) const {
    char buf[128];
    char fmt[32];
    std::snprintf(fmt, sizeof(fmt), "%%.%dRg", sig_digits);
    mpfr_snprintf(buf, sizeof(buf), fmt, v_);
    return buf;
}

Integer rational_floor(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

Rational parse_rational(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) throw DomainError("empty number literal");
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        bool ok = std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '.' ||
                  ((c == '-' || c == '+') && (i == 0 || s[i - 1] == '/'));
        if (!ok) throw DomainError("bad number literal: " + text);
    }
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        if (s.find('.') != std::string::npos)
            throw DomainError("mixed decimal/fraction literal: " + text);
        Rational q(s);
        q.canonicalize();
        if (q.get_den() <= 0) throw DomainError("rational with nonpositive denominator: " + text);
        return q;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        Rational q(s);
        q.canonicalize();
        return q;
    }
    std::string head = s.substr(0, dot);
    std::string tail = s.substr(dot + 1);
    if (tail.empty()) tail = "0";
    for (char c : tail)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw DomainError("bad decimal literal: " + text);
    bool neg = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) head = head.substr(1);
    if (head.empty()) head = "0";
    Integer ip(head);
    Integer frac(tail);
    Integer den = 1;
    for (size_t i = 0; i < tail.size(); ++i) den *= 10;
    Rational q = Rational(ip) + Rational(frac) / Rational(den);
    if (neg) q = -q;
    q.canonicalize();
    return q;
}

std::string format_double(double x, int sig_digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", sig_digits, x);
    return buf;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar() : kind_(Kind::ExactRational), q_(0) {}

Scalar Scalar::exact(Rational q) {
    Scalar s;
    q.canonicalize();
    s.q_ = std::move(q);
    return s;
}

Scalar Scalar::exact(long n) { return exact(Rational(n)); }

Scalar Scalar::interval(const Rational& lo, const Rational& hi, int bits) {
    if (lo > hi) throw DomainError("interval with lo > hi");
    Scalar s;
    s.kind_ = Kind::Interval;
    s.lo_ = BigFloat(bits);
    s.hi_ = BigFloat(bits);
    mpfr_set_q(s.lo_.get(), lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(s.hi_.get(), hi.get_mpq_t(), MPFR_RNDU);
    return s;
}

Scalar Scalar::interval(BigFloat lo, BigFloat hi) {
    if (mpfr_cmp(lo.get(), hi.get()) > 0) throw DomainError("interval with lo > hi");
    Scalar s;
    s.kind_ = Kind::Interval;
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
}

Scalar Scalar::parse(const std::string& text, int bits) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw DomainError("unterminated interval literal: " + text);
        std::string body = s.substr(1, s.size() - 2);
        auto comma = body.find(',');
        if (comma == std::string::npos) throw DomainError("interval literal needs two endpoints: " + text);
        Rational lo = parse_rational(body.substr(0, comma));
        Rational hi = parse_rational(body.substr(comma + 1));
        return interval(lo, hi, bits);
    }
    return exact(parse_rational(s));
}

const Rational& Scalar::rational() const {
    if (kind_ != Kind::ExactRational) throw DomainError("scalar is not exact");
    return q_;
}

const BigFloat& Scalar::lower() const {
    if (kind_ != Kind::Interval) throw DomainError("scalar is not an interval");
    return lo_;
}

const BigFloat& Scalar::upper() const {
    if (kind_ != Kind::Interval) throw DomainError("scalar is not an interval");
    return hi_;
}

int Scalar::precision() const {
    return kind_ == Kind::Interval ? lo_.precision() : 0;
}

Scalar Scalar::widen_precision(int bits) const {
    if (kind_ == Kind::ExactRational) return *this;
    if (bits < precision())
        throw DomainError("widen_precision: requested fewer bits than current");
    BigFloat lo(bits), hi(bits);
    mpfr_set(lo.get(), lo_.get(), MPFR_RNDD); // exact: target precision is wider
    mpfr_set(hi.get(), hi_.get(), MPFR_RNDU);
    return interval(std::move(lo), std::move(hi));
}

std::optional<Integer> Scalar::certified_floor() const {
    if (kind_ == Kind::ExactRational) return rational_floor(q_);
    Integer flo, fhi;
    mpfr_t t;
    mpfr_init2(t, lo_.precision());
    mpfr_floor(t, lo_.get());
    mpfr_get_z(flo.get_mpz_t(), t, MPFR_RNDN);
    mpfr_set_prec(t, hi_.precision());
    mpfr_floor(t, hi_.get());
    mpfr_get_z(fhi.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    if (flo == fhi) return flo;
    // Degenerate-at-integer enclosure [n, n] has flo == fhi already; any
    // wider enclosure straddles an integer.
    return std::nullopt;
}

int Scalar::working_prec(const Scalar& o) const {
    int p = 64;
    if (kind_ == Kind::Interval) p = std::max(p, precision());
    if (o.kind_ == Kind::Interval) p = std::max(p, o.precision());
    return p;
}

namespace {

// Fill lo/hi from a rational, outward.
void set_endpoints(const Rational& q, BigFloat& lo, BigFloat& hi) {
    mpfr_set_q(lo.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi.get(), q.get_mpq_t(), MPFR_RNDU);
}

struct Ends {
    BigFloat lo, hi;
    Ends(int prec) : lo(prec), hi(prec) {}
};

Ends endpoints_of(const Scalar& s, int prec) {
    Ends e(prec);
    if (s.is_exact()) {
        set_endpoints(s.rational(), e.lo, e.hi);
    } else {
        mpfr_set(e.lo.get(), s.lower().get(), MPFR_RNDD);
        mpfr_set(e.hi.get(), s.upper().get(), MPFR_RNDU);
    }
    return e;
}

} // namespace

Scalar Scalar::operator+(const Scalar& o) const {
    if (is_exact() && o.is_exact()) return exact(q_ + o.q_);
    int p = working_prec(o);
    Ends a = endpoints_of(*this, p), b = endpoints_of(o, p);
    BigFloat lo(p), hi(p);
    mpfr_add(lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
    mpfr_add(hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
    return interval(std::move(lo), std::move(hi));
}

Scalar Scalar::operator-(const Scalar& o) const {
    if (is_exact() && o.is_exact()) return exact(q_ - o.q_);
    int p = working_prec(o);
    Ends a = endpoints_of(*this, p), b = endpoints_of(o, p);
    BigFloat lo(p), hi(p);
    mpfr_sub(lo.get(), a.lo.get(), b.hi.get(), MPFR_RNDD);
    mpfr_sub(hi.get(), a.hi.get(), b.lo.get(), MPFR_RNDU);
    return interval(std::move(lo), std::move(hi));
}

Scalar Scalar::operator-() const {
    if (is_exact()) return exact(-q_);
    int p = precision();
    BigFloat lo(p), hi(p);
    mpfr_neg(lo.get(), hi_.get(), MPFR_RNDD);
    mpfr_neg(hi.get(), lo_.get(), MPFR_RNDU);
    return interval(std::move(lo), std::move(hi));
}

Scalar Scalar::operator*(const Scalar& o) const {
    if (is_exact() && o.is_exact()) return exact(q_ * o.q_);
    int p = working_prec(o);
    Ends a = endpoints_of(*this, p), b = endpoints_of(o, p);
    // min over RNDD products, max over RNDU products, all four corners.
    BigFloat lo(p), hi(p), t(p);
    bool first = true;
    mpfr_srcptr as[2] = {a.lo.get(), a.hi.get()};
    mpfr_srcptr bs[2] = {b.lo.get(), b.hi.get()};
    for (auto x : as)
        for (auto y : bs) {
            mpfr_mul(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_cmp(t.get(), lo.get()) < 0) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_cmp(t.get(), hi.get()) > 0) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    return interval(std::move(lo), std::move(hi));
}

Scalar Scalar::div(const Scalar& o) const {
    if (is_exact() && o.is_exact()) {
        if (o.q_ == 0) throw DomainError("division by zero");
        return exact(q_ / o.q_);
    }
    int p = working_prec(o);
    Ends b = endpoints_of(o, p);
    if (mpfr_sgn(b.lo.get()) <= 0 && mpfr_sgn(b.hi.get()) >= 0)
        throw DomainError("division by an interval enclosing zero");
    Ends a = endpoints_of(*this, p);
    BigFloat lo(p), hi(p), t(p);
    bool first = true;
    mpfr_srcptr as[2] = {a.lo.get(), a.hi.get()};
    mpfr_srcptr bs[2] = {b.lo.get(), b.hi.get()};
    for (auto x : as)
        for (auto y : bs) {
            mpfr_div(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_cmp(t.get(), lo.get()) < 0) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
            mpfr_div(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_cmp(t.get(), hi.get()) > 0) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    return interval(std::move(lo), std::move(hi));
}

Scalar Scalar::pow_int(long e) const {
    if (is_exact()) {
        if (e >= 0) {
            Rational r;
            mpz_pow_ui(r.get_num().get_mpz_t(), q_.get_num().get_mpz_t(), static_cast<unsigned long>(e));
            mpz_pow_ui(r.get_den().get_mpz_t(), q_.get_den().get_mpz_t(), static_cast<unsigned long>(e));
            r.canonicalize();
            return exact(r);
        }
        if (q_ == 0) throw DomainError("0 to a negative power");
        Rational r;
        mpz_pow_ui(r.get_num().get_mpz_t(), q_.get_den().get_mpz_t(), static_cast<unsigned long>(-e));
        mpz_pow_ui(r.get_den().get_mpz_t(), q_.get_num().get_mpz_t(), static_cast<unsigned long>(-e));
        r.canonicalize();
        return exact(r);
    }
    // Square-and-multiply over interval products.
    Scalar base = *this;
    bool invert = e < 0;
    unsigned long k = invert ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Scalar acc = Scalar::exact(1);
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    if (invert) acc = Scalar::exact(1).div(acc);
    return acc;
}

std::optional<int> Scalar::compare(const Scalar& o) const {
    if (is_exact() && o.is_exact()) {
        int c = cmp(q_, o.q_);
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    // Compare as intervals; exact operands are degenerate.
    int p = working_prec(o);
    Ends a = endpoints_of(*this, p), b = endpoints_of(o, p);
    if (mpfr_cmp(a.hi.get(), b.lo.get()) < 0) return -1;
    if (mpfr_cmp(a.lo.get(), b.hi.get()) > 0) return 1;
    return std::nullopt;
}

double Scalar::to_double() const {
    if (is_exact()) return q_.get_d();
    // midpoint
    mpfr_t m;
    mpfr_init2(m, lo_.precision());
    mpfr_add(m, lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
}

double Scalar::width() const {
    if (is_exact()) return 0.0;
    mpfr_t w;
    mpfr_init2(w, 64);
    mpfr_sub(w, hi_.get(), lo_.get(), MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

std::string Scalar::to_string(int sig_digits) const {
    if (is_exact()) {
        return format_double(q_.get_d(), sig_digits);
    }
    return format_double(to_double(), sig_digits);
}

} // namespace betadyn
