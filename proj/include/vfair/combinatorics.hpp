#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "vfair/errors.hpp"

namespace vfair {

/// n!, saturating at UINT64_MAX.
std::uint64_t factorial(std::size_t n);

/// a * b, saturating at UINT64_MAX.
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

/// Calls f(perm) for every permutation of `items` in lexicographic order of
/// positions. Stops early when f returns false. Returns false if stopped.
template <class T, class F>
bool for_each_permutation(std::vector<T> items, F&& f)
{
    std::vector<std::size_t> idx(items.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<T> perm(items.size());
    do {
        for (std::size_t i = 0; i < idx.size(); ++i)
            perm[i] = items[idx[i]];
        if (!f(perm))
            return false;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return true;
}

/// Odometer over a mixed-radix digit vector; the last digit varies fastest.
class MixedRadix
{
public:
    explicit MixedRadix(std::vector<std::size_t> radices);

    const std::vector<std::size_t>& digits() const { return digits_; }
    /// Advances; returns false after the last combination (digits reset).
    bool next();
    /// Product of radices, saturating.
    std::uint64_t total() const;
    /// Row-major linear index of the current digits.
    std::uint64_t linear() const;
    /// Digits of a row-major linear index.
    std::vector<std::size_t> decode(std::uint64_t linear) const;
    std::uint64_t encode(const std::vector<std::size_t>& digits) const;

private:
    std::vector<std::size_t> radices_;
    std::vector<std::size_t> digits_;
};

} // namespace vfair
