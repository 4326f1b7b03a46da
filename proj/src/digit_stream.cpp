#include "betadyn/digit_stream.hpp"

#include <mutex>

#include "betadyn/errors.hpp"

namespace betadyn {

struct DigitStream::Impl {
    mutable std::mutex mu;
    mutable std::vector<int8_t> buf;
    std::function<bool(std::vector<int8_t>&)> gen; // null for finite
    bool exhausted = false;

    void materialize(std::int64_t n) const {
        std::lock_guard<std::mutex> lock(mu);
        auto* self = const_cast<Impl*>(this);
        while (!self->exhausted && static_cast<std::int64_t>(buf.size()) < n) {
            size_t before = buf.size();
            if (!self->gen || !self->gen(self->buf)) {
                self->exhausted = true;
                break;
            }
            if (buf.size() == before) self->exhausted = true; // defensive stop
        }
    }
};

DigitStream DigitStream::from_word(Word w) {
    DigitStream s;
    s.impl_ = std::make_shared<Impl>();
    s.impl_->buf.reserve(w.size());
    for (int d : w) s.impl_->buf.push_back(static_cast<int8_t>(d));
    s.impl_->exhausted = true;
    return s;
}

DigitStream DigitStream::periodic(std::vector<int> period) {
    if (period.empty()) throw DomainError("empty period");
    DigitStream s;
    s.impl_ = std::make_shared<Impl>();
    auto p = std::make_shared<std::vector<int>>(std::move(period));
    s.impl_->gen = [p](std::vector<int8_t>& buf) {
        for (int d : *p) buf.push_back(static_cast<int8_t>(d));
        return true;
    };
    return s;
}

DigitStream DigitStream::from_generator(std::function<bool(std::vector<int8_t>&)> gen) {
    DigitStream s;
    s.impl_ = std::make_shared<Impl>();
    s.impl_->gen = std::move(gen);
    return s;
}

DigitStream DigitStream::expansion(const BetaSystem& sys, const Scalar& x) {
    if (sys.alphabet_max() > 127)
        throw DomainError("digit streams support alphabets up to 127");
    DigitStream s;
    s.impl_ = std::make_shared<Impl>();
    auto it = std::make_shared<BetaSystem::DigitIterator>(sys.expansion_iterator(x));
    s.impl_->gen = [it](std::vector<int8_t>& buf) {
        for (int i = 0; i < 64; ++i) buf.push_back(static_cast<int8_t>(it->next()));
        return true;
    };
    return s;
}

int DigitStream::digit(std::int64_t pos) const {
    if (pos < 1) throw DomainError("digit positions are 1-indexed");
    impl_->materialize(pos);
    if (static_cast<std::int64_t>(impl_->buf.size()) < pos)
        throw DomainError("digit position past the end of a finite stream");
    return impl_->buf[static_cast<size_t>(pos - 1)];
}

const std::vector<int8_t>& DigitStream::prefix(std::int64_t n) const {
    impl_->materialize(n);
    return impl_->buf;
}

std::int64_t DigitStream::available(std::int64_t upto) const {
    impl_->materialize(upto);
    return std::min<std::int64_t>(upto, static_cast<std::int64_t>(impl_->buf.size()));
}

bool DigitStream::finite() const { return impl_->gen == nullptr; }

} // namespace betadyn
