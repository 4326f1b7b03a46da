#include "betadyn/algebraic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace betadyn {

// ---------------------------------------------------------------------------
// IntPolynomial

int IntPolynomial::degree() const {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (c[static_cast<size_t>(i)] != 0) return i;
    return -1;
}

Rational IntPolynomial::eval(const Rational& x) const {
    Rational acc = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        acc = acc * x + Rational(c[static_cast<size_t>(i)]);
    return acc;
}

IntPolynomial IntPolynomial::derivative() const {
    IntPolynomial d;
    for (size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * static_cast<long>(i));
    return d;
}

void IntPolynomial::normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) return;
    Integer g = 0;
    for (const auto& a : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    if (g > 1)
        for (auto& a : c) a /= g;
    if (c[static_cast<size_t>(degree())] < 0)
        for (auto& a : c) a = -a;
}

std::string IntPolynomial::str() const {
    std::ostringstream os;
    bool first = true;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        const Integer& a = c[static_cast<size_t>(i)];
        if (a == 0) continue;
        if (!first) os << (a > 0 ? "+" : "-");
        else if (a < 0) os << "-";
        Integer mag = abs(a);
        if (mag != 1 || i == 0) os << mag.get_str();
        if (i >= 1) os << "z";
        if (i >= 2) os << "^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

IntPolynomial IntPolynomial::parse(const std::string& text) {
    // Terms like "z^2", "-z", "+3z", "2*z^3", "-1", separated by +/-.
    IntPolynomial p;
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char ch) { return ch == ' ' || ch == '*'; }), s.end());
    if (s.empty()) throw DomainError("empty polynomial");
    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        if (i >= s.size()) throw DomainError("dangling sign in polynomial: " + text);
        std::string digits;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits.push_back(s[i++]);
        Integer coeff = digits.empty() ? Integer(1) : Integer(digits);
        long expo = 0;
        if (i < s.size() && (s[i] == 'z' || s[i] == 'x')) {
            ++i;
            expo = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string e;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) e.push_back(s[i++]);
                if (e.empty()) throw DomainError("bad exponent in polynomial: " + text);
                expo = std::stol(e);
            }
        } else if (digits.empty()) {
            throw DomainError("unparsable polynomial term in: " + text);
        }
        if (static_cast<size_t>(expo) >= p.c.size()) p.c.resize(static_cast<size_t>(expo) + 1, Integer(0));
        p.c[static_cast<size_t>(expo)] += sign * coeff;
    }
    while (!p.c.empty() && p.c.back() == 0) p.c.pop_back();
    if (p.degree() < 1) throw DomainError("polynomial must have degree >= 1: " + text);
    return p;
}

// ---------------------------------------------------------------------------
// AlgebraicReal

int AlgebraicReal::sign_at(const Rational& x) const {
    Rational v = poly_.eval(x);
    return sgn(v);
}

AlgebraicReal::AlgebraicReal(IntPolynomial p, Rational lo, Rational hi)
    : poly_(std::move(p)), lo_(std::move(lo)), hi_(std::move(hi)) {
    poly_.normalize();
    if (poly_.degree() < 1) throw DomainError("root of a constant polynomial");
    if (lo_ > hi_) throw DomainError("root bracket reversed");
    int slo = sign_at(lo_), shi = sign_at(hi_);
    if (slo == 0) {
        hi_ = lo_;
        exact_hit_ = true;
    } else if (shi == 0) {
        lo_ = hi_;
        exact_hit_ = true;
    } else if (slo == shi) {
        throw DomainError("bracket does not isolate a root of " + poly_.str());
    }
}

std::pair<Rational, Rational> AlgebraicReal::enclosure(int bits) const {
    std::lock_guard<std::mutex> lock(mu_);
    Rational width_target(Integer(1), Integer(1) << std::max(bits, 1));
    width_target.canonicalize();
    int slo = exact_hit_ ? 0 : sign_at(lo_);
    while (!exact_hit_ && hi_ - lo_ > width_target) {
        Rational mid = (lo_ + hi_) / 2;
        int sm = sign_at(mid);
        if (sm == 0) {
            lo_ = hi_ = mid;
            exact_hit_ = true;
            break;
        }
        if (sm == slo) lo_ = mid;
        else hi_ = mid;
    }
    return {lo_, hi_};
}

Scalar AlgebraicReal::to_scalar(int bits) const {
    auto [lo, hi] = enclosure(bits + 4);
    if (exact_hit_) return Scalar::exact(lo);
    return Scalar::interval(lo, hi, bits);
}

double AlgebraicReal::to_double() const {
    auto [lo, hi] = enclosure(64);
    return Rational((lo + hi) / 2).get_d();
}

bool AlgebraicReal::is_exactly(Rational* out) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (exact_hit_ && out) *out = lo_;
    return exact_hit_;
}

// ---------------------------------------------------------------------------
// NumberField

FieldPtr NumberField::make_rational(Rational value) {
    auto f = std::shared_ptr<NumberField>(new NumberField());
    f->degree_ = 1;
    value.canonicalize();
    f->rational_value_ = value;
    f->modulus_ = {-value, Rational(1)};
    return f;
}

FieldPtr NumberField::make_algebraic(IntPolynomial p, Rational lo, Rational hi) {
    p.normalize();
    int deg = p.degree();
    if (deg < 1) throw DomainError("modulus must have positive degree");
    if (deg == 1) {
        // z = -c0/c1: plain rational
        Rational r = Rational(-p.c[0]) / Rational(p.c[1]);
        return make_rational(r);
    }
    // Rational-root screen: a rational root p/q needs p | c0 and q | clead.
    // A hit means the polynomial is reducible over Q and unusable as a modulus.
    if (deg <= 3) {
        const Integer& c0 = p.c[0];
        const Integer& cl = p.c[static_cast<size_t>(deg)];
        if (c0 == 0) throw DomainError("modulus has root 0; divide out z first");
        std::vector<Integer> nums, dens;
        auto divisors = [](const Integer& n, std::vector<Integer>& out) {
            Integer a = abs(n);
            for (Integer d = 1; d * d <= a; ++d) {
                if (a % d == 0) {
                    out.push_back(d);
                    out.push_back(a / d);
                }
                if (d > 100000) break; // screen only; huge coefficients skip
            }
        };
        divisors(c0, nums);
        divisors(cl, dens);
        for (const auto& nu : nums)
            for (const auto& de : dens)
                for (int s : {1, -1}) {
                    Rational cand(s * nu, de);
                    cand.canonicalize();
                    if (p.eval(cand) == 0)
                        throw DomainError("modulus " + p.str() +
                                          " has rational root " + cand.get_str() +
                                          "; supply the minimal polynomial");
                }
    }
    auto f = std::shared_ptr<NumberField>(new NumberField());
    f->degree_ = deg;
    f->root_ = std::make_shared<AlgebraicReal>(p, std::move(lo), std::move(hi));
    // monic modulus over Q
    Rational lead(p.c[static_cast<size_t>(deg)]);
    f->modulus_.resize(static_cast<size_t>(deg) + 1);
    for (int i = 0; i <= deg; ++i) {
        f->modulus_[static_cast<size_t>(i)] = Rational(p.c[static_cast<size_t>(i)]) / lead;
        f->modulus_[static_cast<size_t>(i)].canonicalize();
    }
    return f;
}

FieldElement NumberField::zero() const {
    return FieldElement(shared_from_this(), std::vector<Rational>(static_cast<size_t>(degree_), Rational(0)));
}

FieldElement NumberField::one() const { return from_rational(Rational(1)); }

FieldElement NumberField::from_rational(const Rational& r) const {
    std::vector<Rational> c(static_cast<size_t>(degree_), Rational(0));
    c[0] = r;
    return FieldElement(shared_from_this(), std::move(c));
}

FieldElement NumberField::generator() const {
    if (degree_ == 1) return from_rational(rational_value_);
    std::vector<Rational> c(static_cast<size_t>(degree_), Rational(0));
    c[1] = 1;
    return FieldElement(shared_from_this(), std::move(c));
}

std::pair<Rational, Rational> NumberField::generator_enclosure(int bits) const {
    if (degree_ == 1) return {rational_value_, rational_value_};
    return root_->enclosure(bits);
}

double NumberField::generator_double() const {
    if (degree_ == 1) return rational_value_.get_d();
    return root_->to_double();
}

std::vector<Rational> NumberField::reduce(std::vector<Rational> poly) const {
    size_t d = static_cast<size_t>(degree_);
    while (poly.size() > d) {
        Rational top = poly.back();
        poly.pop_back();
        if (top == 0) continue;
        size_t off = poly.size() - d;
        // z^(d+off) = -(m_0 + ... + m_{d-1} z^{d-1}) z^off  (modulus is monic)
        for (size_t i = 0; i < d; ++i) poly[off + i] -= top * modulus_[i];
    }
    poly.resize(d, Rational(0));
    for (auto& q : poly) q.canonicalize();
    return poly;
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(FieldPtr field, std::vector<Rational> coeffs)
    : field_(std::move(field)), c_(std::move(coeffs)) {
    c_.resize(static_cast<size_t>(field_->degree()), Rational(0));
}

static void check_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.field() != b.field())
        throw DomainError("field elements belong to different number fields");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_field(*this, o);
    std::vector<Rational> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] + o.c_[i];
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same_field(*this, o);
    std::vector<Rational> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] - o.c_[i];
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-() const {
    std::vector<Rational> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-(const Rational& r) const {
    std::vector<Rational> c = c_;
    c[0] -= r;
    return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator*(const Rational& r) const {
    std::vector<Rational> c = c_;
    for (auto& q : c) q *= r;
    return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_field(*this, o);
    size_t d = c_.size();
    std::vector<Rational> prod(2 * d - 1, Rational(0));
    for (size_t i = 0; i < d; ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < d; ++j) {
            if (o.c_[j] == 0) continue;
            prod[i + j] += c_[i] * o.c_[j];
        }
    }
    return FieldElement(field_, field_->reduce(std::move(prod)));
}

FieldElement FieldElement::mul_generator() const {
    if (field_->degree() == 1) return *this * field_->rational_value();
    std::vector<Rational> shifted(c_.size() + 1, Rational(0));
    for (size_t i = 0; i < c_.size(); ++i) shifted[i + 1] = c_[i];
    return FieldElement(field_, field_->reduce(std::move(shifted)));
}

FieldElement FieldElement::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement acc = field_->one();
    FieldElement base = *this;
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

namespace {

// Polynomial helpers over Q for the extended gcd used by inverse().
using QPoly = std::vector<Rational>;

int qdeg(const QPoly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[static_cast<size_t>(i)] != 0) return i;
    return -1;
}

QPoly qsub_scaled(QPoly a, const QPoly& b, const Rational& s, int shift) {
    if (static_cast<int>(a.size()) < qdeg(b) + shift + 1) a.resize(static_cast<size_t>(qdeg(b) + shift + 1), Rational(0));
    for (int i = 0; i <= qdeg(b); ++i)
        a[static_cast<size_t>(i + shift)] -= s * b[static_cast<size_t>(i)];
    return a;
}

} // namespace

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero field element");
    if (field_->degree() == 1)
        return field_->from_rational(Rational(1) / rational_value());
    // Extended Euclid: u*this + v*modulus = gcd; gcd must be a unit.
    QPoly a = c_;
    QPoly b = field_->modulus();
    QPoly ua(a.size(), Rational(0)), ub(b.size(), Rational(0));
    ua.resize(std::max(a.size(), b.size()) + 1, Rational(0));
    ub.resize(ua.size(), Rational(0));
    ua[0] = 1; // tracks coefficient of `this`
    // Work with (b, a) so the loop below divides the larger by the smaller.
    QPoly r0 = b, r1 = a, u0 = ub, u1 = ua;
    while (qdeg(r1) >= 0) {
        // r0 = q*r1 + r2
        QPoly r2 = r0, uq = u0;
        while (qdeg(r2) >= qdeg(r1) && qdeg(r1) >= 0 && qdeg(r2) >= 0) {
            int shift = qdeg(r2) - qdeg(r1);
            Rational s = r2[static_cast<size_t>(qdeg(r2))] / r1[static_cast<size_t>(qdeg(r1))];
            r2 = qsub_scaled(std::move(r2), r1, s, shift);
            uq = qsub_scaled(std::move(uq), u1, s, shift);
        }
        r0 = r1;
        u0 = u1;
        r1 = r2;
        u1 = uq;
    }
    if (qdeg(r0) != 0)
        throw DomainError("element not invertible; modulus is reducible");
    Rational g = r0[0];
    QPoly res = u0;
    for (auto& q : res) q /= g;
    res.resize(static_cast<size_t>(field_->degree()), Rational(0));
    return FieldElement(field_, std::move(res));
}

bool FieldElement::is_zero() const {
    for (const auto& q : c_)
        if (q != 0) return false;
    return true;
}

bool FieldElement::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rational FieldElement::rational_value() const {
    if (!is_rational()) throw DomainError("field element is not rational");
    return c_[0];
}

std::pair<Rational, Rational> FieldElement::enclosure(int bits) const {
    if (is_rational()) return {c_[0], c_[0]};
    auto [glo, ghi] = field_->generator_enclosure(bits);
    // Horner over the exact rational interval [glo, ghi].
    Rational lo = 0, hi = 0;
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
        // [lo,hi] * [glo,ghi]
        if (!(lo == 0 && hi == 0)) {
            Rational p1 = lo * glo, p2 = lo * ghi, p3 = hi * glo, p4 = hi * ghi;
            lo = std::min(std::min(p1, p2), std::min(p3, p4));
            hi = std::max(std::max(p1, p2), std::max(p3, p4));
        }
        lo += c_[static_cast<size_t>(i)];
        hi += c_[static_cast<size_t>(i)];
    }
    return {lo, hi};
}

int FieldElement::sign() const {
    if (is_zero()) return 0;
    if (is_rational()) return sgn(c_[0]);
    for (int bits = 64; bits <= (1 << 14); bits *= 2) {
        auto [lo, hi] = enclosure(bits);
        if (lo > 0) return 1;
        if (hi < 0) return -1;
    }
    throw AmbiguousError("cannot certify sign of field element (reducible modulus?)");
}

int FieldElement::compare(const FieldElement& o) const { return (*this - o).sign(); }

int FieldElement::compare(const Rational& r) const { return (*this - r).sign(); }

Integer FieldElement::certified_floor() const {
    if (is_rational()) return rational_floor(c_[0]);
    for (int bits = 64; bits <= (1 << 14); bits *= 2) {
        auto [lo, hi] = enclosure(bits);
        Integer flo = rational_floor(lo), fhi = rational_floor(hi);
        if (flo == fhi) return flo;
        // The enclosure straddles integers; an exact hit is still possible.
        for (Integer k = flo + 1; k <= fhi; ++k) {
            Rational kr(k);
            if ((*this - kr).is_zero()) return k;
        }
    }
    throw AmbiguousError("cannot certify floor of field element (reducible modulus?)");
}

Scalar FieldElement::to_scalar(int bits) const {
    if (is_rational()) return Scalar::exact(c_[0]);
    auto [lo, hi] = enclosure(bits + 4);
    return Scalar::interval(lo, hi, bits);
}

double FieldElement::to_double() const {
    auto [lo, hi] = enclosure(64);
    return Rational((lo + hi) / 2).get_d();
}

// ---------------------------------------------------------------------------
// RealNumber

RealNumber RealNumber::parse(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char ch) { return ch == ' '; }), s.end());
    if (s.rfind("root:", 0) == 0) {
        std::string rest = s.substr(5);
        auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw DomainError("root literal needs a bracket: root:<poly>:[lo,hi]");
        IntPolynomial p = IntPolynomial::parse(rest.substr(0, colon));
        std::string br = rest.substr(colon + 1);
        if (br.size() < 2 || br.front() != '[' || br.back() != ']')
            throw DomainError("bad root bracket in: " + text);
        std::string body = br.substr(1, br.size() - 2);
        auto comma = body.find(',');
        if (comma == std::string::npos) throw DomainError("root bracket needs two endpoints: " + text);
        Rational lo = parse_rational(body.substr(0, comma));
        Rational hi = parse_rational(body.substr(comma + 1));
        if (p.degree() == 1) {
            Rational r = Rational(-p.c[0]) / Rational(p.c[1]);
            r.canonicalize();
            return RealNumber(r);
        }
        // Collapse to a rational when the bracketed root is rational (small
        // divisor screen; mirrors the modulus check).
        if (p.degree() <= 3 && p.c[0] != 0) {
            std::vector<Integer> nums, dens;
            auto divisors = [](const Integer& n, std::vector<Integer>& out) {
                Integer a = abs(n);
                for (Integer d = 1; d * d <= a && d <= 100000; ++d)
                    if (a % d == 0) {
                        out.push_back(d);
                        out.push_back(a / d);
                    }
            };
            divisors(p.c[0], nums);
            divisors(p.c[static_cast<size_t>(p.degree())], dens);
            for (const auto& nu : nums)
                for (const auto& de : dens)
                    for (int sign : {1, -1}) {
                        Rational cand(sign * nu, de);
                        cand.canonicalize();
                        if (lo <= cand && cand <= hi && p.eval(cand) == 0) return RealNumber(cand);
                    }
        }
        auto root = std::make_shared<AlgebraicReal>(p, lo, hi);
        Rational exact;
        if (root->is_exactly(&exact)) return RealNumber(exact);
        return RealNumber(std::shared_ptr<const AlgebraicReal>(root));
    }
    return RealNumber(parse_rational(s));
}

bool RealNumber::is_rational() const { return std::holds_alternative<Rational>(v_); }

const Rational& RealNumber::rational() const {
    if (!is_rational()) throw DomainError("real number is not rational");
    return std::get<Rational>(v_);
}

std::shared_ptr<const AlgebraicReal> RealNumber::algebraic() const {
    if (is_rational()) throw DomainError("real number is rational");
    return std::get<std::shared_ptr<const AlgebraicReal>>(v_);
}

std::pair<Rational, Rational> RealNumber::enclosure(int bits) const {
    if (is_rational()) return {rational(), rational()};
    return algebraic()->enclosure(bits);
}

Scalar RealNumber::to_scalar(int bits) const {
    if (is_rational()) return Scalar::exact(rational());
    return algebraic()->to_scalar(bits);
}

double RealNumber::to_double() const {
    if (is_rational()) return rational().get_d();
    return algebraic()->to_double();
}

} // namespace betadyn
