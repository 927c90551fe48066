#pragma once

// Interface states: x in {0,1}^Z with x(i) = 0 far left and x(i) = 1 far
// right.  A state is stored as the window [b, e] between its leftmost one b
// and its rightmost zero e; outside the window the configuration is
// deterministic.  Translates of the Heaviside state have an empty window
// (e = b - 1).

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vmi {

using Site = std::int64_t;

class NotAnInterface : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InterfaceConfig {
 public:
  // The Heaviside state x_H(i) = 1{i >= 0}.
  InterfaceConfig();

  static InterfaceConfig heaviside() { return InterfaceConfig(); }

  // Bits are the values of x on [offset, offset + bits.size()); left of the
  // string x = 0, right of it x = 1.  The result is trimmed, so any 0/1
  // string is accepted.  Throws NotAnInterface on characters other than 0/1.
  static InterfaceConfig from_bits(Site offset, std::string_view bits);

  int at(Site i) const noexcept {
    if (i < first_one_) return 0;
    if (i > last_zero_) return 1;
    return cells_[static_cast<std::size_t>(i - base_)];
  }

  // Leftmost one (b) and rightmost zero (e).  e == b - 1 iff the window is empty.
  Site first_one() const noexcept { return first_one_; }
  Site last_zero() const noexcept { return last_zero_; }
  std::size_t window_size() const noexcept {
    return static_cast<std::size_t>(last_zero_ - first_one_ + 1);
  }
  bool is_heaviside_translate() const noexcept { return last_zero_ < first_one_; }

  // '0'/'1' characters over [b, e].
  std::string window() const;

  void flip_site(Site i);

  // Shift by k sites: y(i) = x(i - k).
  void translate(Site k) noexcept;

  friend bool operator==(const InterfaceConfig& a, const InterfaceConfig& b);

 private:
  void reserve_around(Site lo, Site hi);

  Site base_ = 0;             // site of cells_[0]
  std::vector<std::uint8_t> cells_;
  Site first_one_ = 0;
  Site last_zero_ = -1;
};

// x^Delta; the sites in `delta` must be distinct.
InterfaceConfig flip(InterfaceConfig x, std::span<const Site> delta);

// Exchange the values at i and j (no-op if they agree).
InterfaceConfig swap(const InterfaceConfig& x, Site i, Site j);

InterfaceConfig translate(InterfaceConfig x, Site k);

// Number of inversions |{(i, j): i < j, x(i) > x(j)}|.  Throws
// std::overflow_error if the count does not fit in 64 bits.
std::uint64_t f_cd(const InterfaceConfig& x);

struct InterfaceCounts {
  std::uint64_t total = 0;  // I_n
  std::uint64_t up = 0;     // I^01_n
  std::uint64_t down = 0;   // I^10_n
};

// I_n, I^01_n, I^10_n for n >= 1.
InterfaceCounts interface_counts(const InterfaceConfig& x, std::int64_t n);

struct ThinnedCounts {
  std::uint64_t up = 0;    // I^01_{n,m}
  std::uint64_t down = 0;  // I^10_{n,m}
};

// Counts of 0->1 and 1->0 changes along the sublattice nZ + m, 0 <= m < n.
ThinnedCounts thinned_counts(const InterfaceConfig& x, std::int64_t n, std::int64_t m);

// max{i: x(i) != x(i+1)} - min{i: x(i) != x(i+1)}.
inline std::uint64_t width(const InterfaceConfig& x) noexcept {
  return x.is_heaviside_translate() ? 0 : x.window_size();
}

// Translation-invariant key: the window bits with the offset dropped.
class CanonicalClass {
 public:
  CanonicalClass() = default;
  explicit CanonicalClass(std::string bits) : bits_(std::move(bits)) {}

  const std::string& bits() const noexcept { return bits_; }
  bool is_heaviside() const noexcept { return bits_.empty(); }
  std::uint64_t hash() const noexcept;

  friend auto operator<=>(const CanonicalClass&, const CanonicalClass&) = default;

 private:
  std::string bits_;
};

CanonicalClass canonical(const InterfaceConfig& x);

// Same value as canonical(x).hash() without materializing the key.
std::uint64_t canonical_hash(const InterfaceConfig& x) noexcept;

}  // namespace vmi
