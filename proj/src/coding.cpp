#include "codedxbar/coding.hpp"

#include <algorithm>

#include "codedxbar/errors.hpp"

namespace codedxbar {

using Entry = CoefficientVector::Entry;

CoefficientVector CoefficientVector::from_dense(std::span<const std::uint8_t> dense) {
  CoefficientVector v(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i]) v.entries_.push_back({static_cast<std::uint32_t>(i), dense[i]});
  return v;
}

CoefficientVector CoefficientVector::unit(std::size_t dimension, std::size_t index) {
  if (index >= dimension) throw DimensionError("unit vector index out of range");
  CoefficientVector v(dimension);
  v.entries_.push_back({static_cast<std::uint32_t>(index), 1});
  return v;
}

std::uint8_t CoefficientVector::at(std::size_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, std::size_t i) { return e.index < i; });
  return it != entries_.end() && it->index == index ? it->value : 0;
}

void CoefficientVector::push_back(std::uint32_t index, std::uint8_t value) {
  if (index >= dimension_ || (!entries_.empty() && entries_.back().index >= index))
    throw DimensionError("coefficient entries must be increasing and within the dimension");
  if (value) entries_.push_back({index, value});
}

std::vector<std::uint8_t> CoefficientVector::dense() const {
  std::vector<std::uint8_t> out(dimension_, 0);
  for (const auto& e : entries_) out[e.index] = e.value;
  return out;
}

bool operator==(const CoefficientVector& a, const CoefficientVector& b) {
  if (a.dimension_ != b.dimension_ || a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i)
    if (a.entries_[i].index != b.entries_[i].index || a.entries_[i].value != b.entries_[i].value)
      return false;
  return true;
}

void PacketPool::add(Payload payload) {
  if (payload.size() != payload_length_) throw DimensionError("payload length mismatch");
  packets_.push_back(std::move(payload));
}

std::vector<std::uint8_t> serialize(const CodedPacket& packet) {
  std::vector<std::uint8_t> out;
  auto put32 = [&](std::uint64_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  put32(static_cast<std::uint64_t>(packet.flow));
  put32(static_cast<std::uint64_t>(packet.batch));
  put32(packet.coefficients.dimension());
  auto dense = packet.coefficients.dense();
  out.insert(out.end(), dense.begin(), dense.end());
  out.insert(out.end(), packet.payload.begin(), packet.payload.end());
  return out;
}

RankResult rank_and_basis(const GaloisField& field, std::vector<std::vector<std::uint8_t>> rows) {
  RankResult result;
  if (rows.empty()) return result;
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw DimensionError("rank: inconsistent row lengths");
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const std::uint8_t inv = field.inv(rows[rank][c]);
    for (auto& x : rows[rank]) x = field.mul(x, inv);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const std::uint8_t f = rows[r][c];
      for (std::size_t j = 0; j < cols; ++j) rows[r][j] ^= field.mul(f, rows[rank][j]);
    }
    ++rank;
  }
  rows.resize(rank);
  result.rank = rank;
  result.basis = std::move(rows);
  return result;
}

CodedPacket encode(const GaloisField& field, const PacketPool& pool,
                   const CoefficientVector& coefficients) {
  if (coefficients.dimension() != pool.size())
    throw DimensionError("coefficient vector has dimension " +
                         std::to_string(coefficients.dimension()) + ", pool has " +
                         std::to_string(pool.size()) + " packets");
  CodedPacket out;
  out.flow = pool.flow();
  out.batch = pool.batch();
  out.coefficients = coefficients;
  out.payload.assign(pool.payload_length(), 0);
  for (const auto& e : coefficients.entries()) field.mul_add(out.payload, pool.packet(e.index), e.value);
  return out;
}

ReceiverState::ReceiverState(const GaloisField& field, std::size_t payload_length)
    : field_(&field), payload_length_(payload_length) {}

void ReceiverState::grow(std::size_t dimension) {
  if (dimension <= dimension_) return;
  dimension_ = dimension;
  pivot_row_.resize(dimension, -1);
}

std::vector<Entry> ReceiverState::reduce(const CoefficientVector& v, Payload* payload) const {
  std::vector<Entry> acc;
  acc.reserve(v.entries().size() * 2);
  for (const auto& e : v.entries()) {
    std::int32_t row = e.index < pivot_row_.size() ? pivot_row_[e.index] : -1;
    if (row < 0) {
      acc.push_back(e);
      continue;
    }
    const Row& r = rows_[static_cast<std::size_t>(row)];
    for (const auto& t : r.tail) acc.push_back({t.index, field_->mul(e.value, t.value)});
    if (payload) field_->mul_add(*payload, r.payload, e.value);
  }
  std::sort(acc.begin(), acc.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
  std::vector<Entry> out;
  for (const auto& e : acc) {
    if (!out.empty() && out.back().index == e.index) {
      out.back().value ^= e.value;
      if (out.back().value == 0) out.pop_back();
    } else if (e.value) {
      out.push_back(e);
    }
  }
  return out;
}

bool ReceiverState::contains(const CoefficientVector& v) const { return reduce(v, nullptr).empty(); }

bool ReceiverState::is_decoded(std::size_t index) const {
  if (index >= pivot_row_.size() || pivot_row_[index] < 0) return false;
  return rows_[static_cast<std::size_t>(pivot_row_[index])].tail.empty();
}

const Payload& ReceiverState::decoded_payload(std::size_t index) const {
  if (!is_decoded(index)) throw ContractError("packet is not decoded");
  return rows_[static_cast<std::size_t>(pivot_row_[index])].payload;
}

bool ReceiverState::absorb(const CodedPacket& packet, std::vector<std::size_t>* newly_decoded) {
  const auto& coeffs = packet.coefficients;
  if (coeffs.dimension() < dimension_)
    throw ContractError("packet dimension " + std::to_string(coeffs.dimension()) +
                        " is below the receiver's dimension " + std::to_string(dimension_));
  if (packet.payload.size() != payload_length_) throw ContractError("payload length mismatch");
  grow(coeffs.dimension());

  Payload payload = packet.payload;
  std::vector<Entry> residual = reduce(coeffs, &payload);
  if (residual.empty()) {
    if (std::any_of(payload.begin(), payload.end(), [](std::uint8_t b) { return b != 0; }))
      inconsistent_ = true;
    return false;
  }

  const std::uint32_t pivot = residual.front().index;
  const std::uint8_t inv = field_->inv(residual.front().value);
  Row fresh{pivot, {}, std::move(payload)};
  for (std::size_t i = 1; i < residual.size(); ++i)
    fresh.tail.push_back({residual[i].index, field_->mul(residual[i].value, inv)});
  field_->scale(fresh.payload, inv);

  // Clear the new pivot column from rows that still have a tail.
  std::vector<std::size_t> still_pending;
  still_pending.reserve(pending_.size());
  std::vector<Entry> merged;
  for (std::size_t idx : pending_) {
    Row& row = rows_[idx];
    auto it = std::lower_bound(row.tail.begin(), row.tail.end(), pivot,
                               [](const Entry& e, std::uint32_t c) { return e.index < c; });
    if (it == row.tail.end() || it->index != pivot) {
      still_pending.push_back(idx);
      continue;
    }
    const std::uint8_t f = it->value;
    merged.clear();
    auto a = row.tail.begin();
    auto b = fresh.tail.begin();
    while (a != row.tail.end() || b != fresh.tail.end()) {
      if (a != row.tail.end() && a->index == pivot) {
        ++a;
        continue;
      }
      if (b == fresh.tail.end() || (a != row.tail.end() && a->index < b->index)) {
        merged.push_back(*a++);
      } else if (a == row.tail.end() || b->index < a->index) {
        merged.push_back({b->index, field_->mul(f, b->value)});
        ++b;
      } else {
        std::uint8_t v = a->value ^ field_->mul(f, b->value);
        if (v) merged.push_back({a->index, v});
        ++a;
        ++b;
      }
    }
    row.tail.swap(merged);
    field_->mul_add(row.payload, fresh.payload, f);
    if (row.tail.empty()) {
      ++decoded_count_;
      if (newly_decoded) newly_decoded->push_back(row.pivot);
    } else {
      still_pending.push_back(idx);
    }
  }
  pending_.swap(still_pending);

  const std::size_t idx = rows_.size();
  pivot_row_[pivot] = static_cast<std::int32_t>(idx);
  if (fresh.tail.empty()) {
    ++decoded_count_;
    if (newly_decoded) newly_decoded->push_back(pivot);
  } else {
    pending_.push_back(idx);
  }
  rows_.push_back(std::move(fresh));
  while (first_unknown_ < dimension_ && pivot_row_[first_unknown_] >= 0) ++first_unknown_;
  return true;
}

DecodeResult ReceiverState::decode(std::size_t batch_size) const {
  if (inconsistent_) throw IntegrityError("received payloads are inconsistent with their coefficients");
  if (dimension_ > batch_size) throw ContractError("receiver has seen more packets than the batch holds");
  DecodeResult result;
  if (rank() < batch_size) {
    result.deficiency = batch_size - rank();
    return result;
  }
  result.ready = true;
  result.payloads.resize(batch_size);
  for (const Row& row : rows_) result.payloads[row.pivot] = row.payload;
  return result;
}

namespace {

bool innovative_for_all(const CoefficientVector& v,
                        std::span<const ReceiverState* const> receivers) {
  for (const ReceiverState* r : receivers)
    if (r->contains(v)) return false;
  return true;
}

// Enumerates nonzero vectors supported on `support` (sorted); returns the
// first one accepted by every receiver.
std::optional<CoefficientVector> exhaustive(const GaloisField& field, std::size_t n,
                                            const std::vector<std::uint32_t>& support,
                                            std::span<const ReceiverState* const> receivers) {
  const auto q = static_cast<unsigned>(field.order());
  std::vector<unsigned> digits(support.size(), 0);
  for (;;) {
    std::size_t k = digits.size();
    while (k > 0) {
      --k;
      if (++digits[k] < q) break;
      digits[k] = 0;
      if (k == 0) return std::nullopt;
    }
    if (digits.empty()) return std::nullopt;
    CoefficientVector v(n);
    for (std::size_t i = 0; i < support.size(); ++i)
      v.push_back(support[i], static_cast<std::uint8_t>(digits[i]));
    if (innovative_for_all(v, receivers)) return v;
  }
}

bool small_space(unsigned q, std::size_t dims) {
  double size = 1;
  for (std::size_t i = 0; i < dims; ++i) {
    size *= q;
    if (size > 65536.0) return false;
  }
  return true;
}

}  // namespace

std::optional<CoefficientVector> find_innovative(const GaloisField& field, std::size_t n,
                                                 std::span<const ReceiverState* const> receivers,
                                                 Rng& rng) {
  if (n == 0) throw ContractError("find_innovative on an empty pool");
  for (const ReceiverState* r : receivers) {
    if (r->dimension() > n) throw ContractError("receiver dimension exceeds the pool");
    if (r->rank() >= n) throw ContractError("receiver already holds the whole pool");
  }
  if (receivers.empty()) return CoefficientVector::unit(n, 0);

  std::vector<std::uint32_t> window;
  for (const ReceiverState* r : receivers) window.push_back(static_cast<std::uint32_t>(r->first_unknown()));
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());

  const auto q = static_cast<std::uint64_t>(field.order());
  constexpr int kAttempts = 64;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    CoefficientVector v(n);
    for (std::uint32_t idx : window) v.push_back(idx, static_cast<std::uint8_t>(rng.below(q)));
    if (v.is_zero()) continue;
    if (innovative_for_all(v, receivers)) return v;
  }

  if (small_space(field.order(), window.size()))
    if (auto v = exhaustive(field, n, window, receivers)) return v;
  if (window.size() < n && small_space(field.order(), n)) {
    std::vector<std::uint32_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<std::uint32_t>(i);
    return exhaustive(field, n, all, receivers);
  }
  if (window.size() == n && small_space(field.order(), n)) return std::nullopt;
  throw CodingFailure("no innovative vector found for " + std::to_string(receivers.size()) +
                      " receivers over GF(" + std::to_string(field.order()) + ")");
}

}  // namespace codedxbar
