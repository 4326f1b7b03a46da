#include "betadyn/cylinders.hpp"

namespace betadyn {

ExactCylinder exact_cylinder(const BetaSystem& sys, const Word& w) {
    if (!is_admissible(sys, w)) throw NotAdmissibleError("cylinder of an inadmissible word");
    ExactCylinder c;
    c.word = w;
    c.order = static_cast<long>(w.size());
    c.left = sys.word_value(w);
    auto succ = successor(sys, w);
    c.right = succ ? sys.word_value(*succ) : sys.field()->one();
    return c;
}

Cylinder cylinder(const BetaSystem& sys, const Word& w) {
    ExactCylinder e = exact_cylinder(sys, w);
    Cylinder c;
    c.word = e.word;
    c.order = e.order;
    int bits = sys.policy().base_bits;
    c.left = e.left.to_scalar(bits);
    c.right = e.right.to_scalar(bits);
    return c;
}

bool is_full(const BetaSystem& sys, const Word& w) {
    ExactCylinder c = exact_cylinder(sys, w);
    FieldElement diff = c.length() - sys.beta_pow_neg(c.order);
    return diff.is_zero();
}

bool full_concat_check(const BetaSystem& sys, const Word& full_w, const Word& any_w) {
    if (!is_full(sys, full_w))
        throw PreconditionViolatedError("first word is not full");
    if (!is_admissible(sys, any_w))
        throw NotAdmissibleError("second word is not admissible");
    Word concat = full_w;
    concat.insert(concat.end(), any_w.begin(), any_w.end());
    bool adm = is_admissible(sys, concat);
    if (adm) {
        FieldElement lhs = exact_cylinder(sys, concat).length();
        FieldElement rhs = exact_cylinder(sys, full_w).length() * exact_cylinder(sys, any_w).length();
        if (!(lhs - rhs).is_zero())
            throw Error("product law violated for a full prefix"); // unreachable
    }
    return adm;
}

std::vector<ExactCylinder> cylinders_of_order(const BetaSystem& sys, long n, const Budget& budget) {
    std::vector<ExactCylinder> out;
    enumerate_words(sys, n, [&](const Word& w) {
        out.push_back(exact_cylinder(sys, w));
        return true;
    }, budget);
    return out;
}

} // namespace betadyn
