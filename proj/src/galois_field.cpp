#include "codedxbar/galois_field.hpp"

#include "codedxbar/errors.hpp"

namespace codedxbar {

const GaloisField& GaloisField::get(int order) {
  static const GaloisField gf2(1);
  static const GaloisField gf16(4);
  static const GaloisField gf256(8);
  switch (order) {
    case 2: return gf2;
    case 16: return gf16;
    case 256: return gf256;
    default: throw ValidationError("unsupported field order " + std::to_string(order));
  }
}

GaloisField::GaloisField(int degree) : degree_(degree), order_(1 << degree) {
  switch (degree) {
    case 1: polynomial_ = 0x3; break;
    case 4: polynomial_ = 0x13; break;
    case 8: polynomial_ = 0x11B; break;
    default: throw ValidationError("unsupported field degree");
  }
  mul_.assign(static_cast<std::size_t>(order_), {});
  for (int a = 0; a < order_; ++a)
    for (int b = 0; b < order_; ++b)
      mul_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          slow_mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b));
  inv_.assign(static_cast<std::size_t>(order_), 0);
  for (int a = 1; a < order_; ++a)
    for (int b = 1; b < order_; ++b)
      if (mul_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] == 1)
        inv_[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>(b);

  const int per_byte = 8 / degree_;
  const unsigned mask = static_cast<unsigned>(order_ - 1);
  byte_mul_.assign(static_cast<std::size_t>(order_), {});
  for (int c = 0; c < order_; ++c) {
    for (int byte = 0; byte < 256; ++byte) {
      unsigned out = 0;
      for (int k = 0; k < per_byte; ++k) {
        unsigned sym = (static_cast<unsigned>(byte) >> (k * degree_)) & mask;
        out |= static_cast<unsigned>(mul_[static_cast<std::size_t>(c)][sym]) << (k * degree_);
      }
      byte_mul_[static_cast<std::size_t>(c)][static_cast<std::size_t>(byte)] = static_cast<std::uint8_t>(out);
    }
  }
}

std::uint8_t GaloisField::slow_mul(std::uint8_t a, std::uint8_t b) const {
  unsigned x = a, y = b, product = 0;
  while (y) {
    if (y & 1u) product ^= x;
    y >>= 1;
    x <<= 1;
    if (x & static_cast<unsigned>(order_)) x ^= polynomial_;
  }
  return static_cast<std::uint8_t>(product);
}

std::uint8_t GaloisField::inv(std::uint8_t a) const {
  if (a == 0) throw ArithmeticError("inverse of zero");
  return inv_[a];
}

void GaloisField::mul_add(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src,
                          std::uint8_t c) const {
  if (c == 0) return;
  const auto& table = byte_mul_[c];
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= table[src[i]];
}

void GaloisField::scale(std::span<std::uint8_t> dst, std::uint8_t c) const {
  const auto& table = byte_mul_[c];
  for (auto& b : dst) b = table[b];
}

}  // namespace codedxbar
