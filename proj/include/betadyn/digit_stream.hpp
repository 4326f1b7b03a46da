#pragma once

// Finite or lazily-generated digit sequences. Positions are 1-indexed to
// match the digit indexing of expansions.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "betadyn/beta_system.hpp"

namespace betadyn {

class DigitStream {
public:
    DigitStream() = default;

    static DigitStream from_word(Word w);
    static DigitStream periodic(std::vector<int> period);
    // Generator appends digits to the buffer; it must grow the buffer by at
    // least one digit per call or mark exhaustion by returning false.
    static DigitStream from_generator(std::function<bool(std::vector<int8_t>&)> gen);
    // Digits of the expansion of x in the given system.
    static DigitStream expansion(const BetaSystem& sys, const Scalar& x);

    // 1-indexed digit; throws DomainError past the end of a finite stream.
    int digit(std::int64_t pos) const;
    // Materialize and return min(n, available) digits.
    const std::vector<int8_t>& prefix(std::int64_t n) const;
    // Number of digits available up to `upto` (== upto for generators that
    // keep producing).
    std::int64_t available(std::int64_t upto) const;
    bool finite() const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

} // namespace betadyn
