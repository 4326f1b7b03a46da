#pragma once

// Scalar arithmetic substrate: exact rationals backed by GMP, and
// directed-rounding intervals backed by MPFR.  Every real quantity the
// library manipulates is one of the two, so digit decisions are either
// certified or explicitly ambiguous.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "betadyn/errors.hpp"

namespace betadyn {

using Rational = mpq_class;
using Integer = mpz_class;

struct PrecisionPolicy {
    int base_bits = 192;        // working precision for interval endpoints
    int ceiling_bits = 1 << 16; // escalation stops here and surfaces Ambiguous

    // Bits needed to extract digits to depth n of a base-beta expansion:
    // the orbit error grows like beta^n, so ceil(n*log2(beta)) + 64.
    int digit_bits(double log2_beta, long depth) const;
};

// Thin RAII wrapper over mpfr_t.
class BigFloat {
public:
    explicit BigFloat(int prec = 64);
    BigFloat(const BigFloat& o);
    BigFloat(BigFloat&& o) noexcept;
    BigFloat& operator=(const BigFloat& o);
    BigFloat& operator=(BigFloat&& o) noexcept;
    ~BigFloat();

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    int precision() const;
    double to_double() const;
    std::string str(int sig_digits = 12) const;

private:
    mpfr_t v_;
    bool owned_ = true;
};

class Scalar {
public:
    enum class Kind { ExactRational, Interval };

    Scalar(); // exact 0
    static Scalar exact(Rational q);
    static Scalar exact(long n);
    // Interval [lo, hi] with endpoints rounded outward at `bits`.
    static Scalar interval(const Rational& lo, const Rational& hi, int bits);
    static Scalar interval(BigFloat lo, BigFloat hi);

    // Accepts "3/2", "1.5", "-0.25", and "[1.999,2.001]" (interval at `bits`).
    static Scalar parse(const std::string& text, int bits = 192);

    Kind kind() const { return kind_; }
    bool is_exact() const { return kind_ == Kind::ExactRational; }
    const Rational& rational() const; // requires exact
    const BigFloat& lower() const;    // requires interval
    const BigFloat& upper() const;
    int precision() const; // 0 for exact scalars

    // Same real, endpoints carried at >= bits. Exact scalars are unchanged.
    Scalar widen_precision(int bits) const;

    // floor(s) when the enclosure lies inside [n, n+1) or s is exact;
    // nullopt when the enclosure straddles an integer.
    std::optional<Integer> certified_floor() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar div(const Scalar& o) const;   // o must not enclose 0
    Scalar pow_int(long e) const;        // negative e allowed away from 0

    // -1 / 0 / +1, or nullopt when the enclosures overlap without matching.
    std::optional<int> compare(const Scalar& o) const;

    double to_double() const;
    double width() const; // 0 for exact
    std::string to_string(int sig_digits = 12) const;

private:
    Kind kind_ = Kind::ExactRational;
    Rational q_;
    BigFloat lo_, hi_;

    int working_prec(const Scalar& o) const;
};

// Exact floor of a rational.
Integer rational_floor(const Rational& q);

// Parse "3/2", "1.5", "-2", "0.125e2"-free decimal forms into exact rationals.
Rational parse_rational(const std::string& text);

// Format with 12 (or sig) significant digits, round-to-nearest.
std::string format_double(double x, int sig_digits = 12);

} // namespace betadyn
