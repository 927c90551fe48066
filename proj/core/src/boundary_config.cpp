#include "vmi/boundary_config.hpp"

#include <algorithm>

namespace vmi {

BoundaryConfig::BoundaryConfig(std::vector<Site> particles) : particles_(std::move(particles)) {
  std::sort(particles_.begin(), particles_.end());
  if (std::adjacent_find(particles_.begin(), particles_.end()) != particles_.end()) {
    throw std::invalid_argument("boundary configuration: duplicate particle");
  }
  if (particles_.size() % 2 == 0) {
    throw std::invalid_argument("boundary configuration: particle count must be odd, got " +
                                std::to_string(particles_.size()));
  }
}

bool BoundaryConfig::occupied(Site i) const noexcept {
  return std::binary_search(particles_.begin(), particles_.end(), i);
}

std::size_t BoundaryConfig::count_in(Site lo, Site hi) const noexcept {
  if (hi < lo) return 0;
  const auto a = std::lower_bound(particles_.begin(), particles_.end(), lo);
  const auto b = std::upper_bound(a, particles_.end(), hi);
  return static_cast<std::size_t>(b - a);
}

BoundaryConfig BoundaryConfig::flipped(std::span<const Site> sites) const {
  std::vector<Site> toggles(sites.begin(), sites.end());
  std::sort(toggles.begin(), toggles.end());
  std::vector<Site> out;
  out.reserve(particles_.size() + toggles.size());
  std::set_symmetric_difference(particles_.begin(), particles_.end(), toggles.begin(), toggles.end(),
                                std::back_inserter(out));
  if (out.size() % 2 == 0) {
    throw std::logic_error("boundary flip changed particle-count parity");
  }
  return BoundaryConfig(Unchecked{}, std::move(out));
}

std::string BoundaryConfig::to_string() const {
  std::string out = "{";
  for (std::size_t k = 0; k < particles_.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(particles_[k]);
  }
  return out + "}";
}

BoundaryConfig boundary(const InterfaceConfig& x) {
  std::vector<Site> out;
  for (Site i = x.first_one() - 1; i <= x.last_zero(); ++i) {
    if (x.at(i) != x.at(i + 1)) out.push_back(i);
  }
  return BoundaryConfig(std::move(out));
}

InterfaceConfig interface_from_boundary(const BoundaryConfig& y) {
  const Site lo = y.leftmost() + 1;
  const Site hi = y.rightmost();
  std::string bits;
  int value = 1;
  // y(lo - 1) is a particle, so x(lo) = 1
  for (Site i = lo; i <= hi; ++i) {
    bits.push_back(static_cast<char>('0' + value));
    if (y.occupied(i)) value ^= 1;
  }
  return InterfaceConfig::from_bits(lo, bits);
}

}  // namespace vmi
