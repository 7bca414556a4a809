#pragma once

#include <cstddef>
#include <vector>

namespace lcs {

// Visits the size-k subsets of `items` in lexicographic order of positions.
// Stops early when `fn` returns true; returns whether it did.
template <class T, class Fn>
bool for_each_subset_of_size(const std::vector<T>& items, std::size_t k, Fn&& fn) {
  std::size_t n = items.size();
  if (k > n) return false;
  std::vector<T> cur;
  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) pos[i] = i;
  for (;;) {
    cur.clear();
    for (std::size_t p : pos) cur.push_back(items[p]);
    if (fn(static_cast<const std::vector<T>&>(cur))) return true;
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++pos[i - 1];
    for (std::size_t j = i; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
}

// Visits subsets of `items` by increasing size up to `max_size`, each size in
// lexicographic order of positions. Stops early when `fn` returns true;
// returns whether it did.
template <class T, class Fn>
bool for_each_subset(const std::vector<T>& items, std::size_t max_size, Fn&& fn) {
  if (max_size > items.size()) max_size = items.size();
  for (std::size_t k = 0; k <= max_size; ++k)
    if (for_each_subset_of_size(items, k, fn)) return true;
  return false;
}

}  // namespace lcs
