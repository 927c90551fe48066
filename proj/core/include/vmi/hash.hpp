#pragma once

#include <cstdint>
#include <string_view>

namespace vmi {

// 64-bit FNV-1a.  Used for canonical-class keys and config digests, where a
// stable, platform-independent value matters more than speed.
class Fnv1a64 {
 public:
  void update(char c) noexcept {
    state_ ^= static_cast<std::uint8_t>(c);
    state_ *= 0x100000001b3ULL;
  }
  void update(std::string_view s) noexcept {
    for (char c : s) update(c);
  }
  std::uint64_t value() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a64(std::string_view s) noexcept {
  Fnv1a64 h;
  h.update(s);
  return h.value();
}

}  // namespace vmi
