#include "betadyn/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace betadyn {

const char* regime_name(Regime r) {
    switch (r) {
    case Regime::FullMeasure: return "full-measure";
    case Regime::CountableZero: return "countable-zero";
    case Regime::CaseAB: return "caseA-B";
    case Regime::CaseAC: return "caseA-C";
    case Regime::WuSmall: return "wu-small";
    case Regime::WuLarge: return "wu-large";
    case Regime::Boundary: return "boundary";
    }
    return "?";
}

double log_ratio(const BetaSystem& sys1, const BetaSystem& sys2) {
    // log beta1 / log beta2 from 256-bit enclosures; the double rounding is
    // far below every tolerance used downstream.
    Scalar b1 = sys1.beta(256), b2 = sys2.beta(256);
    auto ln = [](const Scalar& s) {
        mpfr_t t;
        mpfr_init2(t, 256);
        if (s.is_exact()) mpfr_set_q(t, s.rational().get_mpq_t(), MPFR_RNDN);
        else {
            mpfr_add(t, s.lower().get(), s.upper().get(), MPFR_RNDN);
            mpfr_div_2ui(t, t, 1, MPFR_RNDN);
        }
        mpfr_log(t, t, MPFR_RNDN);
        double d = mpfr_get_d(t, MPFR_RNDN);
        mpfr_clear(t);
        return d;
    };
    return ln(b1) / ln(b2);
}

ABCValues abc(double vhat, double v, double L) {
    if (!(L > 0) || L > 1) throw DomainError("L must lie in (0,1]");
    if (vhat < 0) throw DomainError("vhat must be nonnegative");
    ABCValues r;
    double phi; // (v - vhat - vhat v) / ((1+v)(v - vhat))
    if (std::isinf(v)) {
        phi = 0.0;
    } else {
        if (v == vhat) throw DomainError("v == vhat > 0 is outside the formula domain");
        if (v < vhat) throw DomainError("need vhat < v");
        phi = (v - vhat - vhat * v) / ((1 + v) * (v - vhat));
    }
    r.A = (1 + L) * phi + 1 - L;
    r.B = (1 + L) / L * phi;
    if (std::isinf(v)) {
        r.C = 1.0;
    } else {
        r.C = (v - vhat - v * vhat * (1 + 1 / L)) / ((1 + v) * (v - vhat)) + 1;
    }
    return r;
}

int compare_beta_power(const BetaSystem& sys1, const BetaSystem& sys2, double v) {
    if (std::isinf(v)) return 1; // beta1^inf > beta2 always (beta1 > 1)
    double e = 1 + v;
    // Exact comparison when the exponent is a small integer.
    if (e == std::floor(e) && e <= 64) {
        long p = static_cast<long>(e);
        const bool r1 = sys1.exact() && sys1.field()->is_rational();
        const bool r2 = sys2.exact() && sys2.field()->is_rational();
        if (r1 && r2) {
            Scalar lhs = Scalar::exact(sys1.field()->rational_value()).pow_int(p);
            auto c = lhs.compare(Scalar::exact(sys2.field()->rational_value()));
            return *c;
        }
        if (sys1.exact() && sys2.exact() && sys1.field() == sys2.field()) {
            FieldElement diff = sys1.field()->generator().pow(p) - sys2.field()->generator();
            return diff.sign();
        }
        if (sys1.exact() && !sys1.field()->is_rational() && r2) {
            FieldElement diff =
                sys1.field()->generator().pow(p) - sys1.field()->from_rational(sys2.field()->rational_value());
            return diff.sign();
        }
        if (sys2.exact() && !sys2.field()->is_rational() && r1) {
            Rational b1 = sys1.field()->rational_value();
            Scalar lhs = Scalar::exact(b1).pow_int(p);
            // compare rational lhs against algebraic beta2
            FieldElement diff = sys2.field()->from_rational(lhs.rational()) - sys2.field()->generator();
            return diff.sign();
        }
    }
    // Interval comparison of (1+v) log beta1 vs log beta2 with escalation.
    for (int bits = 128; bits <= (1 << 14); bits *= 2) {
        Scalar b1 = sys1.beta(bits), b2 = sys2.beta(bits);
        mpfr_t l1l, l1u, l2l, l2u;
        mpfr_inits2(bits, l1l, l1u, l2l, l2u, (mpfr_ptr) nullptr);
        auto setlog = [&](const Scalar& s, mpfr_ptr lo, mpfr_ptr up) {
            if (s.is_exact()) {
                mpfr_set_q(lo, s.rational().get_mpq_t(), MPFR_RNDD);
                mpfr_set_q(up, s.rational().get_mpq_t(), MPFR_RNDU);
            } else {
                mpfr_set(lo, s.lower().get(), MPFR_RNDD);
                mpfr_set(up, s.upper().get(), MPFR_RNDU);
            }
            mpfr_log(lo, lo, MPFR_RNDD);
            mpfr_log(up, up, MPFR_RNDU);
        };
        setlog(b1, l1l, l1u);
        setlog(b2, l2l, l2u);
        mpfr_mul_d(l1l, l1l, e, MPFR_RNDD);
        mpfr_mul_d(l1u, l1u, e, MPFR_RNDU);
        int out = 2;
        if (mpfr_cmp(l1u, l2l) < 0) out = -1;
        else if (mpfr_cmp(l1l, l2u) > 0) out = 1;
        mpfr_clears(l1l, l1u, l2l, l2u, (mpfr_ptr) nullptr);
        if (out != 2) return out;
    }
    throw AmbiguousError("beta1^{1+v} vs beta2 undecidable at the precision ceiling "
                         "(possible exact power relation)");
}

namespace {

void check_ordered(const BetaSystem& sys1, const BetaSystem& sys2) {
    auto c = sys1.beta(96).compare(sys2.beta(96));
    if (c.has_value() && *c > 0) throw DomainError("need beta2 >= beta1");
}

bool proved_flag(double L, double vhat, double v) {
    if (vhat <= 0) return true;
    double bound = std::isinf(v) ? vhat : (vhat / v) * (1 + v);
    return L > bound;
}

} // namespace

DimensionResult dim_e(const BetaSystem& sys1, const BetaSystem& sys2, double vhat, double v) {
    check_ordered(sys1, sys2);
    if (vhat < 0 || v < 0 || std::isnan(v) || std::isnan(vhat))
        throw DomainError("exponents must be nonnegative");
    double L = log_ratio(sys1, sys2);
    DimensionResult res;
    res.proved = proved_flag(L, vhat, v);
    if (vhat == 0 && v == 0) {
        res.value = 2;
        res.regime = Regime::FullMeasure;
        return res;
    }
    double ceiling = std::isinf(v) ? 1.0 : v / (1 + v);
    if (vhat > ceiling) {
        res.value = 0;
        res.regime = Regime::CountableZero;
        return res;
    }
    if (std::isinf(v)) {
        // contained in every asymptotic level set; dimension 0
        res.value = 0;
        res.regime = Regime::CaseAB;
        return res;
    }
    ABCValues f = abc(vhat, v, L);
    int cmp = compare_beta_power(sys1, sys2, v);
    if (cmp > 0) {
        res.value = std::min(f.A, f.B);
        res.regime = (vhat == ceiling) ? Regime::Boundary : Regime::CaseAB;
    } else {
        res.value = std::min(f.A, f.C);
        res.regime = (vhat == ceiling) ? Regime::Boundary : Regime::CaseAC;
    }
    res.value = std::max(0.0, std::min(2.0, res.value));
    return res;
}

DimensionResult dim_w(const BetaSystem& sys1, const BetaSystem& sys2, double v) {
    check_ordered(sys1, sys2);
    if (v < 0 || std::isnan(v)) throw DomainError("v must be nonnegative");
    DimensionResult res;
    if (v == 0) {
        res.value = 2;
        res.regime = Regime::FullMeasure;
        return res;
    }
    if (std::isinf(v)) {
        res.value = 0;
        res.regime = Regime::CountableZero;
        return res;
    }
    double L = log_ratio(sys1, sys2);
    double small = (2 + v - v * L) / (1 + v);
    double large = (1 + L) / ((1 + v) * L);
    int cmp = compare_beta_power(sys1, sys2, v);
    if (cmp < 0) {
        res.value = small;
        res.regime = Regime::WuSmall;
    } else {
        res.value = std::min(small, large);
        res.regime = Regime::WuLarge;
    }
    res.value = std::max(0.0, std::min(2.0, res.value));
    return res;
}

DimensionResult dim_u(const BetaSystem& sys1, const BetaSystem& sys2, double vhat) {
    check_ordered(sys1, sys2);
    if (vhat < 0 || std::isnan(vhat)) throw DomainError("vhat must be nonnegative");
    DimensionResult res;
    if (vhat == 0) {
        res.value = 2;
        res.regime = Regime::FullMeasure;
        return res;
    }
    if (vhat > 1) {
        res.value = 0;
        res.regime = Regime::CountableZero;
        return res;
    }
    if (vhat == 1) {
        // only v = infinity is compatible, and that level set is null
        res.value = 0;
        res.regime = Regime::Boundary;
        res.argmax_v = std::numeric_limits<double>::infinity();
        return res;
    }
    double v0 = vhat / (1 - vhat);
    auto objective = [&](double v) { return dim_e(sys1, sys2, vhat, v).value; };

    // Dense multiplicative grid on [v0, Vmax], then golden-section refinement
    // around the best bracket.
    const double VMAX = 1e6;
    double best_v = v0, best = 0.0;
    std::vector<double> grid;
    grid.push_back(v0);
    for (double t = 1e-4; v0 + t <= VMAX; t *= 1.15) grid.push_back(v0 + t);
    grid.push_back(VMAX);
    for (double v : grid) {
        double val = objective(v);
        if (val > best) {
            best = val;
            best_v = v;
        }
    }
    // v -> inf limit is 0 (the B factor vanishes); nothing to add there.
    // bracket around best grid point
    double lo = best_v, hi = best_v;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] == best_v) {
            lo = (i > 0) ? grid[i - 1] : best_v;
            hi = (i + 1 < grid.size()) ? grid[i + 1] : best_v;
            break;
        }
    }
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = objective(c), fd = objective(d);
    for (int it = 0; it < 200 && (b - a) > 1e-10 * std::max(1.0, std::fabs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    double vstar = (a + b) / 2;
    double fstar = objective(vstar);
    if (fstar < best) {
        vstar = best_v;
        fstar = best;
    }
    DimensionResult at = dim_e(sys1, sys2, vhat, vstar);
    res.value = fstar;
    res.regime = at.regime;
    res.proved = at.proved;
    res.argmax_v = vstar;
    return res;
}

} // namespace betadyn
