#include "vmi/interface_config.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "vmi/hash.hpp"

namespace vmi {

InterfaceConfig::InterfaceConfig() = default;

InterfaceConfig InterfaceConfig::from_bits(Site offset, std::string_view bits) {
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw NotAnInterface("interface window must contain only '0' and '1', got '" + std::string(1, c) + "'");
    }
  }
  const auto len = static_cast<Site>(bits.size());
  const auto one = bits.find('1');
  const auto zero = bits.rfind('0');

  InterfaceConfig x;
  if (one == std::string_view::npos) {
    x.first_one_ = offset + len;
    x.last_zero_ = x.first_one_ - 1;
  } else if (zero == std::string_view::npos || zero < one) {
    x.first_one_ = offset + static_cast<Site>(one);
    x.last_zero_ = x.first_one_ - 1;
  } else {
    x.first_one_ = offset + static_cast<Site>(one);
    x.last_zero_ = offset + static_cast<Site>(zero);
  }
  x.base_ = x.first_one_;
  x.cells_.clear();
  for (Site i = x.first_one_; i <= x.last_zero_; ++i) {
    x.cells_.push_back(static_cast<std::uint8_t>(bits[static_cast<std::size_t>(i - offset)] - '0'));
  }
  (void)len;
  return x;
}

std::string InterfaceConfig::window() const {
  std::string out;
  out.reserve(window_size());
  for (Site i = first_one_; i <= last_zero_; ++i) out.push_back(static_cast<char>('0' + at(i)));
  return out;
}

void InterfaceConfig::reserve_around(Site lo, Site hi) {
  const Site have_lo = base_;
  const Site have_hi = base_ + static_cast<Site>(cells_.size()) - 1;
  if (!cells_.empty() && lo >= have_lo && hi <= have_hi) return;

  // Rebuild around the live window only; stale cells outside [b, e] are
  // never read.
  const Site live_lo = std::min(lo, first_one_);
  const Site live_hi = std::max(hi, last_zero_);
  const Site slack = std::max<Site>(16, (live_hi - live_lo + 1) / 2);
  const Site new_base = live_lo - slack;
  std::vector<std::uint8_t> grown(static_cast<std::size_t>(live_hi - live_lo + 1 + 2 * slack), 0);
  for (Site i = first_one_; i <= last_zero_; ++i) {
    grown[static_cast<std::size_t>(i - new_base)] = cells_[static_cast<std::size_t>(i - base_)];
  }
  cells_ = std::move(grown);
  base_ = new_base;
}

void InterfaceConfig::flip_site(Site i) {
  auto cell = [this](Site k) -> std::uint8_t& { return cells_[static_cast<std::size_t>(k - base_)]; };
  const bool empty_window = last_zero_ < first_one_;

  if (i < first_one_) {
    // 0 -> 1 left of the window.
    if (empty_window && i == last_zero_) {
      first_one_ = i;
      last_zero_ = i - 1;
      return;
    }
    reserve_around(i, last_zero_);
    for (Site k = i + 1; k < first_one_; ++k) cell(k) = 0;
    cell(i) = 1;
    first_one_ = i;
    return;
  }
  if (i > last_zero_) {
    // 1 -> 0 right of the window.
    if (empty_window && i == first_one_) {
      first_one_ = i + 1;
      last_zero_ = i;
      return;
    }
    reserve_around(first_one_, i);
    for (Site k = last_zero_ + 1; k < i; ++k) cell(k) = 1;
    cell(i) = 0;
    last_zero_ = i;
    return;
  }

  // Inside [b, e].
  std::uint8_t& c = cell(i);
  c ^= 1U;
  if (c == 1 && i == last_zero_) {
    Site k = i - 1;
    while (k >= first_one_ && cell(k) == 1) --k;
    last_zero_ = k >= first_one_ ? k : first_one_ - 1;
  } else if (c == 0 && i == first_one_) {
    Site k = i + 1;
    while (k <= last_zero_ && cell(k) == 0) ++k;
    first_one_ = k <= last_zero_ ? k : last_zero_ + 1;
  }
}

void InterfaceConfig::translate(Site k) noexcept {
  base_ += k;
  first_one_ += k;
  last_zero_ += k;
}

bool operator==(const InterfaceConfig& a, const InterfaceConfig& b) {
  if (a.first_one_ != b.first_one_ || a.last_zero_ != b.last_zero_) return false;
  for (Site i = a.first_one_; i <= a.last_zero_; ++i) {
    if (a.at(i) != b.at(i)) return false;
  }
  return true;
}

InterfaceConfig flip(InterfaceConfig x, std::span<const Site> delta) {
  for (Site s : delta) x.flip_site(s);
  return x;
}

InterfaceConfig swap(const InterfaceConfig& x, Site i, Site j) {
  if (x.at(i) == x.at(j)) return x;
  const Site pair[2] = {i, j};
  return flip(x, pair);
}

InterfaceConfig translate(InterfaceConfig x, Site k) {
  x.translate(k);
  return x;
}

std::uint64_t f_cd(const InterfaceConfig& x) {
  std::uint64_t zeros = 0;
  std::uint64_t total = 0;
  for (Site i = x.last_zero(); i >= x.first_one(); --i) {
    if (x.at(i) == 0) {
      ++zeros;
    } else if (__builtin_add_overflow(total, zeros, &total)) {
      throw std::overflow_error("f_cd: inversion count overflow");
    }
  }
  return total;
}

InterfaceCounts interface_counts(const InterfaceConfig& x, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("interface_counts: n must be >= 1");
  InterfaceCounts out;
  for (Site i = x.first_one() - n; i <= x.last_zero(); ++i) {
    const int a = x.at(i);
    const int b = x.at(i + n);
    if (a == 0 && b == 1) ++out.up;
    if (a == 1 && b == 0) ++out.down;
  }
  out.total = out.up + out.down;
  return out;
}

ThinnedCounts thinned_counts(const InterfaceConfig& x, std::int64_t n, std::int64_t m) {
  if (n < 1 || m < 0 || m >= n) {
    throw std::invalid_argument("thinned_counts: need n >= 1 and 0 <= m < n");
  }
  ThinnedCounts out;
  const Site lo = x.first_one() - n;
  // first site >= lo congruent to m mod n
  Site start = lo + (((m - lo) % n) + n) % n;
  for (Site s = start; s <= x.last_zero(); s += n) {
    const int a = x.at(s);
    const int b = x.at(s + n);
    if (a == 0 && b == 1) ++out.up;
    if (a == 1 && b == 0) ++out.down;
  }
  return out;
}

std::uint64_t CanonicalClass::hash() const noexcept { return fnv1a64(bits_); }

CanonicalClass canonical(const InterfaceConfig& x) { return CanonicalClass(x.window()); }

std::uint64_t canonical_hash(const InterfaceConfig& x) noexcept {
  Fnv1a64 h;
  for (Site i = x.first_one(); i <= x.last_zero(); ++i) h.update(static_cast<char>('0' + x.at(i)));
  return h.value();
}

}  // namespace vmi
