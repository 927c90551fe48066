#pragma once

// Positive transport paths: n_0 = 1, ..., n_m = n with every n_k >= 1 and
// every step n_k - n_{k-1} in a symmetric support.  Built by writing n - 1 as
// a shortest sum of support elements, sorting the steps in descending order
// and taking partial sums from 1.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "vmi/kernels.hpp"

namespace vmi {

class Unreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws NonSymmetricKernel if `support` is not closed under negation,
// Unreachable if it does not generate Z, std::invalid_argument if n < 1.
std::vector<std::int64_t> plan_transport(std::int64_t n, std::span<const Displacement> support);

}  // namespace vmi
