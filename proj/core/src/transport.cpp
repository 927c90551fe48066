#include "vmi/transport.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_map>

namespace vmi {

std::vector<std::int64_t> plan_transport(std::int64_t n, std::span<const Displacement> support) {
  if (n < 1) throw std::invalid_argument("plan_transport: n must be >= 1");
  const std::set<Displacement> steps(support.begin(), support.end());
  Displacement g = 0;
  Displacement largest = 0;
  for (Displacement d : steps) {
    if (d == 0) throw std::invalid_argument("plan_transport: support contains 0");
    if (!steps.contains(-d)) throw NonSymmetricKernel("plan_transport: support is not symmetric");
    g = std::gcd(g, d < 0 ? -d : d);
    largest = std::max(largest, d < 0 ? -d : d);
  }
  if (g != 1) throw Unreachable("plan_transport: support does not generate Z");

  // Shortest decomposition of n - 1 by breadth-first search; a shortest word
  // never needs to leave [-bound, bound].
  const std::int64_t target = n - 1;
  const std::int64_t bound = target + largest * largest + largest;
  std::unordered_map<std::int64_t, Displacement> via;  // value -> last step
  std::deque<std::int64_t> frontier{0};
  via.emplace(0, 0);
  while (!frontier.empty() && !via.contains(target)) {
    const std::int64_t v = frontier.front();
    frontier.pop_front();
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      const std::int64_t next = v + *it;
      if (next < -bound || next > bound || via.contains(next)) continue;
      via.emplace(next, *it);
      frontier.push_back(next);
    }
  }
  if (!via.contains(target)) throw Unreachable("plan_transport: no decomposition found");

  std::vector<Displacement> word;
  for (std::int64_t v = target; v != 0; v -= via.at(v)) word.push_back(via.at(v));
  std::sort(word.begin(), word.end(), std::greater<>());

  std::vector<std::int64_t> path{1};
  for (Displacement d : word) path.push_back(path.back() + d);
  return path;
}

}  // namespace vmi
