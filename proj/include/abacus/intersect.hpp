#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "abacus/stream.hpp"

namespace abacus {

/// Size ratio above which galloping beats a linear merge.
inline constexpr std::size_t kGallopRatio = 32;

namespace detail {

// Exponential search for the first element >= target in [first, last).
// Adds one to `comparisons` per probe.
inline const Ordinal* gallop(const Ordinal* first, const Ordinal* last,
                             Ordinal target, std::uint64_t& comparisons) {
  std::size_t step = 1;
  const Ordinal* lo = first;
  const Ordinal* hi = first;
  while (hi < last) {
    ++comparisons;
    if (*hi >= target) break;
    lo = hi + 1;
    hi = (static_cast<std::size_t>(last - hi) > step) ? hi + step : last;
    step <<= 1;
  }
  while (lo < hi) {
    ++comparisons;
    const Ordinal* mid = lo + (hi - lo) / 2;
    if (*mid < target)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace detail

/// Visits every element of a ∩ b in ascending order. Both inputs must be
/// sorted and duplicate-free. Cost is linear in the smaller set when sizes
/// are lopsided (galloping) and a linear merge otherwise. `comparisons`
/// accumulates the element checks performed.
template <typename Visit>
void for_each_common(std::span<const Ordinal> a, std::span<const Ordinal> b,
                     std::uint64_t& comparisons, Visit&& visit) {
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return;
  if (b.size() / a.size() >= kGallopRatio) {
    const Ordinal* cursor = b.data();
    const Ordinal* end = b.data() + b.size();
    for (Ordinal x : a) {
      cursor = detail::gallop(cursor, end, x, comparisons);
      if (cursor == end) return;
      if (*cursor == x) {
        visit(x);
        ++cursor;
      }
    }
    return;
  }
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    ++comparisons;
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      visit(a[i]);
      ++i;
      ++j;
    }
  }
}

inline std::uint64_t intersect_count(std::span<const Ordinal> a,
                                     std::span<const Ordinal> b,
                                     std::uint64_t& comparisons) {
  std::uint64_t n = 0;
  for_each_common(a, b, comparisons, [&](Ordinal) { ++n; });
  return n;
}

inline std::vector<Ordinal> intersect(std::span<const Ordinal> a,
                                      std::span<const Ordinal> b) {
  std::vector<Ordinal> out;
  std::uint64_t comparisons = 0;
  for_each_common(a, b, comparisons, [&](Ordinal x) { out.push_back(x); });
  return out;
}

}  // namespace abacus
