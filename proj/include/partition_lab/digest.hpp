#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

namespace plab {

/// 64-bit FNV-1a.
class Fnv1a {
public:
  Fnv1a& bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
      h_ ^= p[k];
      h_ *= 0x100000001b3ull;
    }
    return *this;
  }
  Fnv1a& text(std::string_view s) { return bytes(s.data(), s.size()); }
  Fnv1a& number(double x) { return bytes(&x, sizeof x); }
  Fnv1a& numbers(std::span<const double> xs) { return bytes(xs.data(), xs.size_bytes()); }

  std::uint64_t value() const noexcept { return h_; }
  std::string hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int k = 0; k < 16; ++k) s[15 - k] = digits[(h_ >> (4 * k)) & 0xf];
    return s;
  }

private:
  std::uint64_t h_ = 0xcbf29ce484222325ull;
};

} // namespace plab
