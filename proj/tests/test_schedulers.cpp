#include <doctest.h>

#include "codedxbar/errors.hpp"
#include "codedxbar/schedulers.hpp"
#include "oracles.hpp"

using namespace codedxbar;

namespace {

ConflictGraph fig1_graph() {
  const auto fig1 = pattern_fig1();
  return build_enhanced_conflict_graph(fig1.pattern);
}

}  // namespace

TEST_CASE("mwss on the fig1 graph") {
  const auto g = fig1_graph();
  std::vector<std::int64_t> w{2, 2, 2, 1, 1, 1};
  CHECK(mwss_exact(g, w) == VertexSet::of({0, 1, 2}));
  w = {0, 0, 0, 5, 1, 1};
  CHECK(mwss_exact(g, w) == VertexSet::of({3}));
  w = {0, 0, 0, 0, 0, 0};
  CHECK(mwss_exact(g, w).empty());
  // tie between {0,1,2} and {0,1,5}: lexicographically smaller wins
  w = {1, 1, 1, 0, 0, 1};
  CHECK(mwss_exact(g, w) == VertexSet::of({0, 1, 2}));
}

TEST_CASE("mwss input validation") {
  const auto g = fig1_graph();
  std::vector<std::int64_t> short_w{1, 1};
  CHECK_THROWS_AS(mwss_exact(g, short_w), DimensionError);
  std::vector<std::int64_t> neg{1, 1, 1, -1, 0, 0};
  CHECK_THROWS_AS(mwss_exact(g, neg), ValidationError);
  ConflictGraph big(45);
  std::vector<std::int64_t> w(45, 1);
  CHECK_THROWS_AS(mwss_exact(big, w), SizeCapError);
}

TEST_CASE("mwss agrees with brute force") {
  Rng rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(trial < 140 ? 14 : 20));
    const auto g = oracle::random_graph(n, 1 + rng.below(4), 5, rng);
    std::vector<std::int64_t> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = static_cast<std::int64_t>(rng.below(rng.below(2) ? 4 : 50));
    const VertexSet got = mwss_exact(g, w);
    CHECK(g.is_stable(got));
    CHECK(got.bits() == oracle::mwss(g, w));
  }
}

TEST_CASE("mwss is invariant under positive scaling") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(12));
    const auto g = oracle::random_graph(n, 1, 2, rng);
    std::vector<std::int64_t> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = static_cast<std::int64_t>(rng.below(20));
    auto scaled = w;
    const auto c = static_cast<std::int64_t>(1 + rng.below(9));
    for (auto& x : scaled) x *= c;
    CHECK(mwss_exact(g, w) == mwss_exact(g, scaled));
  }
}

TEST_CASE("randomized mwss never loses weight") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(14));
    const auto g = oracle::random_graph(n, 2, 5, rng);
    std::vector<std::int64_t> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = static_cast<std::int64_t>(rng.below(10));
    const VertexSet prev = random_maximal_stable_set(g, w, rng);
    CHECK(g.is_stable(prev));
    const VertexSet next = mwss_randomized(g, w, prev, 3, rng);
    CHECK(g.is_stable(next));
    CHECK(set_weight(next, w) >= set_weight(prev, w));
    for (int v : next.members()) CHECK(w[static_cast<std::size_t>(v)] > 0);
  }
  const auto g = fig1_graph();
  std::vector<std::int64_t> w{1, 1, 1, 1, 1, 1};
  CHECK_THROWS_AS(mwss_randomized(g, w, VertexSet::of({0, 3}), 1, rng), ValidationError);
}

TEST_CASE("randomized mwss converges on fig1") {
  const auto g = fig1_graph();
  std::vector<std::int64_t> w{2, 2, 2, 1, 1, 1};
  Rng rng(3);
  VertexSet s;
  for (int i = 0; i < 50; ++i) s = mwss_randomized(g, w, s, 2, rng);
  CHECK(set_weight(s, w) == 6);
}

TEST_CASE("offline executor serves the frame") {
  const auto fig1 = pattern_fig1();
  const auto frame = build_offline_schedule(fig1.pattern, fig1.rates);
  REQUIRE(frame.frame_length == 3);
  CHECK(frame.slots[0] == VertexSet::of({0, 1, 5}));

  const auto& f2 = GaloisField::get(2);
  std::vector<CodedFlow> flows;
  for (std::size_t i = 0; i < fig1.pattern.num_flows(); ++i)
    flows.emplace_back(static_cast<int>(i), 0, fig1.pattern.flows()[i].fanout.size(), f2, 4);
  flows[0].pool.add({1, 1, 1, 1});
  flows[0].pool.add({2, 2, 2, 2});
  flows[3].pool.add({3, 3, 3, 3});
  Rng rng(1);

  auto d = offline_executor(fig1.pattern, f2, frame, 3, flows, rng);  // wraps to slot 0
  CHECK(d.config == frame.slots[0]);
  REQUIRE(d.services.size() == 2);
  CHECK(d.services[0].flow == 0);
  CHECK(d.services[0].subflows == std::vector<int>{0, 1});
  CHECK(d.services[0].delivered == std::vector<int>{0, 1});
  CHECK(d.services[1].flow == 3);
  CHECK(d.services[1].delivered == std::vector<int>{5});
  CHECK(flows[3].receivers[0].decoded_count() == 1);

  for (long t = 1; t < 3; ++t) offline_executor(fig1.pattern, f2, frame, t, flows, rng);
  for (const auto& r : flows[0].receivers) {
    auto dec = r.decode(2);
    REQUIRE(dec.ready);
    CHECK(dec.payloads[0] == flows[0].pool.packet(0));
    CHECK(dec.payloads[1] == flows[0].pool.packet(1));
  }
}

TEST_CASE("serve_coded skips saturated receivers") {
  const auto fig1 = pattern_fig1();
  const auto& f = GaloisField::get(256);
  std::vector<CodedFlow> flows;
  for (std::size_t i = 0; i < fig1.pattern.num_flows(); ++i)
    flows.emplace_back(static_cast<int>(i), 0, fig1.pattern.flows()[i].fanout.size(), f, 1);
  flows[0].pool.add({42});
  Rng rng(2);
  auto d = serve_coded(fig1.pattern, f, VertexSet::of({0, 1, 2}), flows, rng);
  REQUIRE(d.services.size() == 1);
  CHECK(d.services[0].delivered.size() == 3);
  d = serve_coded(fig1.pattern, f, VertexSet::of({0, 1, 2}), flows, rng);
  CHECK((d.services.empty() || d.services[0].delivered.empty()));
}

TEST_CASE("uncoded queues and the fanout policy") {
  TrafficPattern unicast(1, 1, {Flow{0, {0}}});
  UncodedQueues q(unicast);
  q.arrive(0, 0);
  q.arrive(0, 1);
  CHECK(q.total_backlog() == 2);
  Rng rng(1);
  PolicyDecision prev;
  auto d = uncoded_fanout_policy(unicast, q, prev, 2, rng);
  REQUIRE(d.services.size() == 1);
  CHECK(d.services[0].uncoded_outputs == 1u);
  auto gone = q.serve(0, 1);
  REQUIRE(gone);
  CHECK(gone->arrival == 0);
  CHECK(q.total_backlog() == 1);

  const auto fig1 = pattern_fig1();
  UncodedQueues mq(fig1.pattern);
  mq.arrive(0, 0);
  CHECK(mq.backlog(0) == 3);
  CHECK_FALSE(mq.serve(0, 0b011));
  CHECK(mq.backlog(0) == 1);
  CHECK(mq.queue(0).front().residual == 0b100u);
  auto out = mq.serve(0, 0b100);
  REQUIRE(out);
  CHECK(mq.total_backlog() == 0);

  // fanout splitting: a lone broadcast packet takes every free output
  mq.arrive(0, 5);
  mq.arrive(1, 5);
  for (int i = 0; i < 20; ++i) {
    auto pick = uncoded_fanout_policy(fig1.pattern, mq, prev, 3, rng);
    std::uint32_t outputs_used = 0;
    for (const auto& s : pick.services) {
      const auto& fanout = fig1.pattern.flows()[static_cast<std::size_t>(s.flow)].fanout;
      for (std::size_t k = 0; k < fanout.size(); ++k)
        if ((s.uncoded_outputs >> k) & 1u) {
          CHECK(((outputs_used >> fanout[k]) & 1u) == 0u);
          outputs_used |= 1u << fanout[k];
        }
    }
    CHECK(pick.services.size() <= 2);
  }
}
