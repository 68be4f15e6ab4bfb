#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace codedxbar {

/// GF(2^m) for m in {1, 4, 8}. Elements are bytes in [0, q). GF(256) uses
/// the reduction polynomial x^8 + x^4 + x^3 + x + 1 (0x11B), GF(16) uses
/// x^4 + x + 1.
///
/// Payload bytes are treated as packed symbols: 8 GF(2) symbols, 2 GF(16)
/// symbols or 1 GF(256) symbol per byte, so any byte string is a valid
/// payload in every field.
class GaloisField {
 public:
  /// Shared instance for q in {2, 16, 256}; throws ValidationError otherwise.
  static const GaloisField& get(int order);

  int order() const { return order_; }
  int degree() const { return degree_; }

  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return a ^ b; }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[a][b]; }
  /// Throws ArithmeticError for 0.
  std::uint8_t inv(std::uint8_t a) const;
  std::uint8_t div(std::uint8_t a, std::uint8_t b) const { return mul(a, inv(b)); }

  /// dst += c * src on packed payload bytes.
  void mul_add(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t c) const;
  void scale(std::span<std::uint8_t> dst, std::uint8_t c) const;

 private:
  explicit GaloisField(int degree);
  std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b) const;

  int degree_;
  int order_;
  unsigned polynomial_;
  std::vector<std::array<std::uint8_t, 256>> mul_;       // element x element
  std::vector<std::array<std::uint8_t, 256>> byte_mul_;  // element x packed byte
  std::vector<std::uint8_t> inv_;
};

}  // namespace codedxbar
