#pragma once

#include <functional>
#include <vector>

#include "shiftpart/error.hpp"
#include "shiftpart/etaq/partition_spec.hpp"
#include "shiftpart/exact/rational.hpp"

namespace shiftpart {

// p_S(0..n_max) by 0/1-knapsack over the allowed parts in ascending order.
inline std::vector<Integer> count_table(const PartitionSpec& s, i64 n_max) {
  if (n_max < 0) return {};
  std::vector<Integer> dp(static_cast<std::size_t>(n_max + 1), 0);
  dp[0] = 1;
  for (i64 l = 1; l <= n_max; ++l) {
    if (!s.allows(l)) continue;
    for (i64 n = n_max; n >= l; --n) {
      const Integer& src = dp[static_cast<std::size_t>(n - l)];
      if (sgn(src) != 0) dp[static_cast<std::size_t>(n)] += src;
    }
  }
  return dp;
}

// Knapsack state after all parts < next_part: dp[n] is already final for n < next_part.
struct KnapsackState {
  i64 next_part = 1;
  std::vector<Integer> dp;
};

// count_table that can stop and resume; `hook` sees the state every `every` parts-range.
inline std::vector<Integer> count_table_resumable(const PartitionSpec& s, i64 n_max, KnapsackState state,
                                                  const std::function<void(const KnapsackState&)>& hook = {},
                                                  i64 every = 10000) {
  if (n_max < 0) return {};
  if (state.dp.empty()) {
    state.dp.assign(static_cast<std::size_t>(n_max + 1), 0);
    state.dp[0] = 1;
    state.next_part = 1;
  }
  if (static_cast<i64>(state.dp.size()) != n_max + 1) throw domain_error("knapsack state has the wrong length");
  auto& dp = state.dp;
  for (i64 l = state.next_part; l <= n_max; ++l) {
    if (s.allows(l))
      for (i64 n = n_max; n >= l; --n) {
        const Integer& src = dp[static_cast<std::size_t>(n - l)];
        if (sgn(src) != 0) dp[static_cast<std::size_t>(n)] += src;
      }
    if (hook && every > 0 && l % every == 0 && l < n_max) {
      state.next_part = l + 1;
      hook(state);
    }
  }
  state.next_part = n_max + 1;
  return std::move(state.dp);
}

inline Integer count_ps(const PartitionSpec& s, i64 n) {
  if (n < 0) return 0;
  return count_table(s, n)[static_cast<std::size_t>(n)];
}

}  // namespace shiftpart
