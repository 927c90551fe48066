#pragma once

// Boundary particle configurations y(i) = 1{x(i) != x(i+1)}.  For an
// interface state the particle count is finite and odd; the map x -> y is a
// bijection between interface states and odd particle sets.

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmi/interface_config.hpp"

namespace vmi {

class BoundaryConfig {
 public:
  // {-1}, the image of the Heaviside state.
  BoundaryConfig() : particles_{-1} {}

  // Throws std::invalid_argument on duplicates or an even particle count.
  explicit BoundaryConfig(std::vector<Site> particles);

  const std::vector<Site>& particles() const noexcept { return particles_; }
  std::size_t size() const noexcept { return particles_.size(); }
  bool occupied(Site i) const noexcept;
  Site leftmost() const noexcept { return particles_.front(); }
  Site rightmost() const noexcept { return particles_.back(); }

  // Number of particles in [lo, hi].
  std::size_t count_in(Site lo, Site hi) const noexcept;

  // Symmetric difference with an even-sized flip set.
  BoundaryConfig flipped(std::span<const Site> sites) const;

  std::string to_string() const;

  friend auto operator<=>(const BoundaryConfig&, const BoundaryConfig&) = default;

 private:
  struct Unchecked {};
  BoundaryConfig(Unchecked, std::vector<Site> particles) : particles_(std::move(particles)) {}

  std::vector<Site> particles_;
};

BoundaryConfig boundary(const InterfaceConfig& x);

// Inverse of boundary(): x(i) = parity of the number of particles left of i.
InterfaceConfig interface_from_boundary(const BoundaryConfig& y);

}  // namespace vmi
