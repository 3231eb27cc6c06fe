#include "vfair/combinatorics.hpp"

#include <limits>

namespace vfair {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b)
{
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

std::uint64_t factorial(std::size_t n)
{
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i)
        f = saturating_mul(f, i);
    return f;
}

MixedRadix::MixedRadix(std::vector<std::size_t> radices) : radices_(std::move(radices)), digits_(radices_.size(), 0)
{
    for (auto r : radices_)
        if (r == 0)
            throw PreconditionError("mixed radix with an empty digit range");
}

bool MixedRadix::next()
{
    for (std::size_t i = digits_.size(); i-- > 0;) {
        if (++digits_[i] < radices_[i])
            return true;
        digits_[i] = 0;
    }
    return false;
}

std::uint64_t MixedRadix::total() const
{
    std::uint64_t t = 1;
    for (auto r : radices_)
        t = saturating_mul(t, r);
    return t;
}

std::uint64_t MixedRadix::linear() const { return encode(digits_); }

std::uint64_t MixedRadix::encode(const std::vector<std::size_t>& digits) const
{
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < radices_.size(); ++i)
        v = v * radices_[i] + digits[i];
    return v;
}

std::vector<std::size_t> MixedRadix::decode(std::uint64_t linear) const
{
    std::vector<std::size_t> d(radices_.size());
    for (std::size_t i = radices_.size(); i-- > 0;) {
        d[i] = static_cast<std::size_t>(linear % radices_[i]);
        linear /= radices_[i];
    }
    return d;
}

} // namespace vfair
