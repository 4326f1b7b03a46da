#pragma once

// Exact arithmetic for algebraic bases.  A base given as a polynomial root is
// kept as its defining polynomial plus a refinable isolating interval; orbit
// points under the beta-transformation then live in Q(beta) and zero/floor
// decisions are exact.  Rational bases are the degree-1 special case, so the
// same element type covers both.

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "betadyn/precision.hpp"

namespace betadyn {

struct IntPolynomial {
    std::vector<Integer> c; // c[0] + c[1] z + ... + c[deg] z^deg

    static IntPolynomial parse(const std::string& text); // "z^2-z-1"
    int degree() const;
    Rational eval(const Rational& x) const;
    IntPolynomial derivative() const;
    void normalize(); // strip leading zeros, divide out integer content
    std::string str() const;
};

// One real root of an integer polynomial, isolated in [lo, hi] with a sign
// change, refinable by exact rational bisection.
class AlgebraicReal {
public:
    AlgebraicReal(IntPolynomial p, Rational lo, Rational hi);

    // Enclosure of width <= 2^-bits (endpoints are dyadic rationals).
    std::pair<Rational, Rational> enclosure(int bits) const;
    Scalar to_scalar(int bits) const;
    double to_double() const;
    const IntPolynomial& polynomial() const { return poly_; }
    // Set when bisection lands exactly on the root (rational root).
    bool is_exactly(Rational* out = nullptr) const;

private:
    IntPolynomial poly_;
    mutable Rational lo_, hi_;
    mutable bool exact_hit_ = false;
    mutable std::mutex mu_;
    int sign_at(const Rational& x) const;
};

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// Element of Q(beta): a polynomial in the generator of degree < [Q(beta):Q].
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(FieldPtr field, std::vector<Rational> coeffs);

    const FieldPtr& field() const { return field_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement operator-(const Rational& r) const;
    FieldElement operator*(const Rational& r) const;
    FieldElement mul_generator() const; // times beta, reduced
    FieldElement inverse() const;       // extended gcd against the modulus
    FieldElement pow(long e) const;

    bool is_zero() const;
    bool is_rational() const; // degree-0 representation
    Rational rational_value() const;

    int sign() const;                       // certified; exact zero detected
    int compare(const FieldElement& o) const;
    int compare(const Rational& r) const;
    Integer certified_floor() const;

    std::pair<Rational, Rational> enclosure(int bits) const;
    Scalar to_scalar(int bits) const; // exact Scalar for degree-1 fields
    double to_double() const;

private:
    FieldPtr field_;
    std::vector<Rational> c_;
};

// Q(beta) with a monic rational modulus.  Degree 1 encodes a plain rational
// (modulus z - r), in which case all elements are exact rationals.
class NumberField : public std::enable_shared_from_this<NumberField> {
public:
    static FieldPtr make_rational(Rational value);
    // Throws DomainError when the polynomial has a rational root (the modulus
    // must be irreducible for the element arithmetic to be sound); degrees
    // above 3 are accepted as given.
    static FieldPtr make_algebraic(IntPolynomial p, Rational lo, Rational hi);

    int degree() const { return degree_; }
    bool is_rational() const { return degree_ == 1; }
    const Rational& rational_value() const { return rational_value_; }
    const std::vector<Rational>& modulus() const { return modulus_; } // monic, size degree+1

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_rational(const Rational& r) const;
    FieldElement generator() const;

    // Enclosure of the generator, refined on demand.
    std::pair<Rational, Rational> generator_enclosure(int bits) const;
    double generator_double() const;

private:
    friend class FieldElement;
    NumberField() = default;
    int degree_ = 1;
    Rational rational_value_;
    std::vector<Rational> modulus_;
    std::shared_ptr<AlgebraicReal> root_;
    std::vector<Rational> reduce(std::vector<Rational> poly) const;
};

// An exact real: rational or algebraic.  This is the currency for beta values.
class RealNumber {
public:
    RealNumber() : v_(Rational(0)) {}
    explicit RealNumber(Rational q) : v_(std::move(q)) {}
    explicit RealNumber(std::shared_ptr<const AlgebraicReal> a) : v_(std::move(a)) {}

    // "3/2" | "1.5" | "root:z^2-z-1:[1.6,1.7]"
    static RealNumber parse(const std::string& text);

    bool is_rational() const;
    const Rational& rational() const;
    std::shared_ptr<const AlgebraicReal> algebraic() const;

    std::pair<Rational, Rational> enclosure(int bits) const;
    Scalar to_scalar(int bits) const;
    double to_double() const;

private:
    std::variant<Rational, std::shared_ptr<const AlgebraicReal>> v_;
};

} // namespace betadyn
