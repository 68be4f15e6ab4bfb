#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "codedxbar/galois_field.hpp"
#include "codedxbar/rng.hpp"

namespace codedxbar {

/// Coefficient vector over the first `dimension` packets of a pool, stored
/// sparsely (nonzero entries sorted by index). Pools only grow, so a vector
/// is implicitly zero-padded when compared against a larger pool.
class CoefficientVector {
 public:
  struct Entry {
    std::uint32_t index;
    std::uint8_t value;
  };

  CoefficientVector() = default;
  explicit CoefficientVector(std::size_t dimension) : dimension_(dimension) {}
  static CoefficientVector from_dense(std::span<const std::uint8_t> dense);
  static CoefficientVector unit(std::size_t dimension, std::size_t index);

  std::size_t dimension() const { return dimension_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::uint8_t at(std::size_t index) const;
  /// Appends an entry; indices must be strictly increasing.
  void push_back(std::uint32_t index, std::uint8_t value);
  std::vector<std::uint8_t> dense() const;

  friend bool operator==(const CoefficientVector& a, const CoefficientVector& b);

 private:
  std::size_t dimension_ = 0;
  std::vector<Entry> entries_;
};

using Payload = std::vector<std::uint8_t>;

/// Original packets of one flow batch in arrival order.
class PacketPool {
 public:
  PacketPool(int flow, long batch, std::size_t payload_length)
      : flow_(flow), batch_(batch), payload_length_(payload_length) {}

  int flow() const { return flow_; }
  long batch() const { return batch_; }
  std::size_t payload_length() const { return payload_length_; }
  std::size_t size() const { return packets_.size(); }
  const Payload& packet(std::size_t i) const { return packets_[i]; }
  void add(Payload payload);

 private:
  int flow_;
  long batch_;
  std::size_t payload_length_;
  std::vector<Payload> packets_;
};

struct CodedPacket {
  int flow = 0;
  long batch = 0;
  CoefficientVector coefficients;
  Payload payload;
};

/// Canonical bytes: flow, batch, n (little-endian u32), n coefficient
/// bytes, payload.
std::vector<std::uint8_t> serialize(const CodedPacket& packet);

struct RankResult {
  std::size_t rank = 0;
  std::vector<std::vector<std::uint8_t>> basis;  ///< reduced row echelon form
};

/// Dense Gauss-Jordan elimination over the field.
RankResult rank_and_basis(const GaloisField& field, std::vector<std::vector<std::uint8_t>> rows);

/// Linear combination of the pool: byte b of the payload is the sum over p
/// of coeff_p * packet_p[b]. Throws DimensionError unless the vector
/// dimension equals the pool size.
CodedPacket encode(const GaloisField& field, const PacketPool& pool,
                   const CoefficientVector& coefficients);

struct DecodeResult {
  bool ready = false;
  std::size_t deficiency = 0;
  std::vector<Payload> payloads;
};

/// What one output holds of one flow batch: the received coefficient rows in
/// reduced row echelon form together with the matching payload combinations.
/// Pivot rows with no other nonzero entry are decoded packets.
class ReceiverState {
 public:
  ReceiverState(const GaloisField& field, std::size_t payload_length);

  const GaloisField& field() const { return *field_; }
  std::size_t rank() const { return rows_.size(); }
  std::size_t dimension() const { return dimension_; }
  std::size_t decoded_count() const { return decoded_count_; }
  /// Smallest coordinate that is not a pivot column; e_index is then
  /// outside the received span. Equals dimension() at full rank.
  std::size_t first_unknown() const { return first_unknown_; }

  bool contains(const CoefficientVector& v) const;
  bool is_decoded(std::size_t index) const;
  /// Recovered packet `index`; only valid when is_decoded(index).
  const Payload& decoded_payload(std::size_t index) const;

  /// Adds a received packet. Returns true iff it raised the rank. Indices
  /// of packets that became decodable are appended to `newly_decoded`.
  /// Throws ContractError when the packet's dimension is below the
  /// dimension already seen.
  bool absorb(const CodedPacket& packet, std::vector<std::size_t>* newly_decoded = nullptr);

  /// All original payloads in pool order once rank == batch_size; otherwise
  /// not ready with the rank deficiency. Throws IntegrityError when an
  /// earlier packet contradicted the received span.
  DecodeResult decode(std::size_t batch_size) const;

 private:
  struct Row {
    std::uint32_t pivot;
    std::vector<CoefficientVector::Entry> tail;  // entries besides the unit pivot
    Payload payload;
  };

  std::vector<CoefficientVector::Entry> reduce(const CoefficientVector& v, Payload* payload) const;
  void grow(std::size_t dimension);

  const GaloisField* field_;
  std::size_t payload_length_;
  std::size_t dimension_ = 0;
  std::size_t first_unknown_ = 0;
  std::size_t decoded_count_ = 0;
  bool inconsistent_ = false;
  std::vector<Row> rows_;
  std::vector<std::int32_t> pivot_row_;
  std::vector<std::size_t> pending_;  // rows with a nonempty tail
};

/// A coefficient vector over a pool of dimension n that lies outside every
/// given receiver's span, so one transmission raises all their ranks.
///
/// Candidates are drawn uniformly at random (nonzero) from the span of the
/// receivers' first unknown coordinates; that span escapes each receiver, so
/// a draw fails with probability at most k/q. After 64 failed draws the
/// search falls back to exhaustive enumeration of that span, then of the
/// whole space, when either has at most 2^16 vectors. Returns nullopt only
/// when exhaustive search proves that no such vector exists.
///
/// Throws ContractError if a receiver is already at rank n or has seen a
/// larger dimension, and CodingFailure if the search is inconclusive.
std::optional<CoefficientVector> find_innovative(const GaloisField& field, std::size_t n,
                                                 std::span<const ReceiverState* const> receivers,
                                                 Rng& rng);

}  // namespace codedxbar
