#include <doctest.h>

#include "codedxbar/coding.hpp"
#include "codedxbar/errors.hpp"
#include "codedxbar/galois_field.hpp"
#include "oracles.hpp"

using namespace codedxbar;

namespace {

std::vector<std::uint8_t> dense(std::initializer_list<int> v) {
  std::vector<std::uint8_t> out;
  for (int x : v) out.push_back(static_cast<std::uint8_t>(x));
  return out;
}

CodedPacket packet(std::initializer_list<int> coeffs, Payload payload) {
  CodedPacket p;
  p.coefficients = CoefficientVector::from_dense(dense(coeffs));
  p.payload = std::move(payload);
  return p;
}

void check_axioms(const GaloisField& f, unsigned a, unsigned b, unsigned c) {
  const auto A = static_cast<std::uint8_t>(a), B = static_cast<std::uint8_t>(b),
             C = static_cast<std::uint8_t>(c);
  CHECK(f.mul(A, B) == f.mul(B, A));
  CHECK(f.mul(f.mul(A, B), C) == f.mul(A, f.mul(B, C)));
  CHECK(f.mul(A, f.add(B, C)) == f.add(f.mul(A, B), f.mul(A, C)));
  CHECK(f.add(f.add(A, B), C) == f.add(A, f.add(B, C)));
}

}  // namespace

TEST_CASE("field axioms, exhaustive for GF(2) and GF(16)") {
  for (int q : {2, 16}) {
    const auto& f = GaloisField::get(q);
    for (unsigned a = 0; a < static_cast<unsigned>(q); ++a) {
      CHECK(f.add(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(a)) == 0);
      CHECK(f.mul(static_cast<std::uint8_t>(a), 1) == a);
      if (a) CHECK(f.mul(static_cast<std::uint8_t>(a), f.inv(static_cast<std::uint8_t>(a))) == 1);
      for (unsigned b = 0; b < static_cast<unsigned>(q); ++b) {
        CHECK(f.mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)) ==
              oracle::gf_mul(a, b, oracle::poly_for(q), oracle::degree_for(q)));
        for (unsigned c = 0; c < static_cast<unsigned>(q); ++c) check_axioms(f, a, b, c);
      }
    }
  }
}

TEST_CASE("GF(256) against the log-table oracle") {
  const auto& f = GaloisField::get(256);
  const oracle::LogTables logs;
  for (unsigned a = 0; a < 256; ++a)
    for (unsigned b = 0; b < 256; ++b) REQUIRE(f.mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)) == logs.mul(a, b));
  CHECK(f.mul(0x02, 0x80) == 0x1B);
  CHECK(f.mul(0x53, 0xCA) == 0x01);
  CHECK(f.inv(0x53) == 0xCA);
  Rng rng(9);
  for (int i = 0; i < 10000; ++i)
    check_axioms(f, static_cast<unsigned>(rng.below(256)), static_cast<unsigned>(rng.below(256)),
                 static_cast<unsigned>(rng.below(256)));
  CHECK_THROWS_AS(f.inv(0), ArithmeticError);
  CHECK_THROWS_AS(GaloisField::get(4), ValidationError);
}

TEST_CASE("packed payload arithmetic") {
  Rng rng(4);
  for (int q : {2, 16, 256}) {
    const auto& f = GaloisField::get(q);
    const int m = oracle::degree_for(q);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::uint8_t> dst(9), src(9);
      for (auto& x : dst) x = static_cast<std::uint8_t>(rng.below(256));
      for (auto& x : src) x = static_cast<std::uint8_t>(rng.below(256));
      const auto c = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(q)));
      auto expect = dst;
      for (std::size_t i = 0; i < src.size(); ++i)
        for (int s = 0; s < 8; s += m) {
          const unsigned sym = (src[i] >> s) & ((1u << m) - 1);
          expect[i] ^= static_cast<std::uint8_t>(oracle::gf_mul(sym, c, oracle::poly_for(q), m) << s);
        }
      f.mul_add(dst, src, c);
      CHECK(dst == expect);
    }
  }
}

TEST_CASE("rank and basis") {
  const auto& f256 = GaloisField::get(256);
  CHECK(rank_and_basis(f256, {dense({1, 0, 0}), dense({0, 1, 0}), dense({0, 0, 1})}).rank == 3);
  CHECK(rank_and_basis(f256, {dense({5, 7}), dense({5, 7})}).rank == 1);
  // GF(4) = {0, 1, w, w^2} sits in GF(16) as {0, 1, 6, 7}; rows (1,2,0),
  // (0,1,1), (1,3,1) over GF(4) become (1,6,0), (0,1,1), (1,7,1)
  const auto& f16 = GaloisField::get(16);
  CHECK(f16.mul(6, 6) == 7);
  CHECK(rank_and_basis(f16, {dense({1, 6, 0}), dense({0, 1, 1}), dense({1, 7, 1})}).rank == 2);

  Rng rng(12);
  for (int q : {2, 16, 256}) {
    const auto& f = GaloisField::get(q);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t rows = 1 + rng.below(6), cols = 1 + rng.below(6);
      std::vector<std::vector<std::uint8_t>> m(rows, std::vector<std::uint8_t>(cols));
      for (auto& r : m)
        for (auto& x : r) x = static_cast<std::uint8_t>(rng.below(rng.below(3) == 0 ? 2 : static_cast<std::uint64_t>(q)));
      auto res = rank_and_basis(f, m);
      CHECK(res.rank == oracle::rank(m, q));
      // basis spans the same space
      auto both = m;
      for (auto& b : res.basis) both.push_back(b);
      CHECK(oracle::rank(both, q) == res.rank);
      CHECK(oracle::rank(res.basis, q) == res.rank);
    }
  }
}

TEST_CASE("encode") {
  const auto& f2 = GaloisField::get(2);
  PacketPool pool(0, 0, 3);
  pool.add({0x0F, 0xAA, 0x01});
  pool.add({0xF0, 0x0A, 0x03});
  CHECK(encode(f2, pool, CoefficientVector::unit(2, 1)).payload == Payload{0xF0, 0x0A, 0x03});
  CHECK(encode(f2, pool, CoefficientVector::from_dense(dense({1, 1}))).payload == Payload{0xFF, 0xA0, 0x02});
  CHECK(encode(f2, pool, CoefficientVector(2)).payload == Payload{0, 0, 0});
  CHECK_THROWS_AS(encode(f2, pool, CoefficientVector::unit(3, 0)), DimensionError);
}

TEST_CASE("absorb and decode") {
  const auto& f = GaloisField::get(256);
  ReceiverState r(f, 1);
  CHECK(r.absorb(packet({1, 0}, {7})));
  CHECK_FALSE(r.absorb(packet({1, 0}, {7})));
  CHECK(r.rank() == 1);
  auto not_ready = r.decode(2);
  CHECK_FALSE(not_ready.ready);
  CHECK(not_ready.deficiency == 1);
  CHECK(r.absorb(packet({0, 1}, {9})));
  CHECK_FALSE(r.absorb(packet({1, 1}, {7 ^ 9})));
  CHECK(r.decode(2).payloads == std::vector<Payload>{{7}, {9}});
  CHECK_THROWS_AS(r.absorb(packet({1}, {7})), ContractError);

  // a payload that contradicts the received span
  ReceiverState bad(f, 1);
  bad.absorb(packet({1, 0}, {1}));
  bad.absorb(packet({0, 1}, {2}));
  bad.absorb(packet({1, 1}, {0}));
  CHECK_THROWS_AS(bad.decode(2), IntegrityError);
}

TEST_CASE("fig1 frame: output 1 decodes P1 and P1 xor P2") {
  const auto& f2 = GaloisField::get(2);
  PacketPool pool(0, 0, 4);
  pool.add({1, 2, 3, 4});
  pool.add({9, 8, 7, 6});
  ReceiverState out1(f2, 4);
  std::vector<std::size_t> decoded;
  CHECK(out1.absorb(encode(f2, pool, CoefficientVector::unit(2, 0)), &decoded));
  CHECK(decoded == std::vector<std::size_t>{0});
  decoded.clear();
  CHECK(out1.absorb(encode(f2, pool, CoefficientVector::from_dense(dense({1, 1}))), &decoded));
  CHECK(decoded == std::vector<std::size_t>{1});
  auto d = out1.decode(2);
  REQUIRE(d.ready);
  CHECK(d.payloads[0] == pool.packet(0));
  CHECK(d.payloads[1] == pool.packet(1));
}

TEST_CASE("round trip on random batches") {
  Rng rng(21);
  for (int q : {2, 16, 256}) {
    const auto& f = GaloisField::get(q);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 1 + rng.below(8);
      PacketPool pool(0, 0, 16);
      for (std::size_t i = 0; i < n; ++i) {
        Payload p(16);
        for (auto& b : p) b = static_cast<std::uint8_t>(rng.below(256));
        pool.add(p);
      }
      ReceiverState r(f, 16);
      int sent = 0;
      while (r.rank() < n && sent < 500) {
        std::vector<std::uint8_t> c(n);
        for (auto& x : c) x = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(q)));
        const std::size_t before = r.rank();
        const bool innovative = r.absorb(encode(f, pool, CoefficientVector::from_dense(c)));
        CHECK(innovative == (r.rank() == before + 1));
        ++sent;
      }
      auto d = r.decode(n);
      REQUIRE(d.ready);
      for (std::size_t i = 0; i < n; ++i) CHECK(d.payloads[i] == pool.packet(i));
      CHECK(r.decoded_count() == n);
    }
  }
}

TEST_CASE("find innovative") {
  Rng rng(1);
  const auto& f2 = GaloisField::get(2);
  auto line = [&](std::initializer_list<int> v) {
    auto s = std::make_unique<ReceiverState>(f2, 1);
    s->absorb(packet(v, {0}));
    return s;
  };
  {
    auto a = line({1, 0});
    auto b = line({0, 1});
    std::vector<const ReceiverState*> rs{a.get(), b.get()};
    auto v = find_innovative(f2, 2, rs, rng);
    REQUIRE(v);
    CHECK(v->dense() == dense({1, 1}));
  }
  {
    auto a = line({1, 0});
    auto b = line({0, 1});
    auto c = line({1, 1});
    std::vector<const ReceiverState*> rs{a.get(), b.get(), c.get()};
    CHECK_FALSE(find_innovative(f2, 2, rs, rng));
  }
  {
    std::vector<const ReceiverState*> none;
    auto v = find_innovative(GaloisField::get(256), 4, none, rng);
    REQUIRE(v);
    CHECK(v->dense() == dense({1, 0, 0, 0}));
  }
  {
    auto full = line({1});
    std::vector<const ReceiverState*> rs{full.get()};
    CHECK_THROWS_AS(find_innovative(f2, 1, rs, rng), ContractError);
  }
}

TEST_CASE("innovative vector exists whenever q > k") {
  Rng rng(31);
  for (int q : {16, 256}) {
    const auto& f = GaloisField::get(q);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + rng.below(10);
      const std::size_t k = 1 + rng.below(std::min<std::uint64_t>(static_cast<std::uint64_t>(q - 1), 8));
      std::vector<std::unique_ptr<ReceiverState>> states;
      std::vector<const ReceiverState*> view;
      for (std::size_t i = 0; i < k; ++i) {
        auto s = std::make_unique<ReceiverState>(f, 1);
        const std::size_t dim = rng.below(n);
        while (s->rank() < dim) {
          std::vector<std::uint8_t> c(n);
          for (auto& x : c) x = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(q)));
          s->absorb(CodedPacket{0, 0, CoefficientVector::from_dense(c), {0}});
        }
        view.push_back(s.get());
        states.push_back(std::move(s));
      }
      auto v = find_innovative(f, n, view, rng);
      REQUIRE(v);
      for (auto& s : states) {
        const std::size_t before = s->rank();
        CHECK(s->absorb(CodedPacket{0, 0, *v, {0}}));
        CHECK(s->rank() == before + 1);
      }
    }
  }
}

TEST_CASE("serialization is canonical") {
  CodedPacket p{3, 7, CoefficientVector::from_dense(dense({0, 5})), {0xAB}};
  const auto bytes = serialize(p);
  CHECK(bytes == std::vector<std::uint8_t>{3, 0, 0, 0, 7, 0, 0, 0, 2, 0, 0, 0, 0, 5, 0xAB});
  CHECK(serialize(p) == bytes);
}
