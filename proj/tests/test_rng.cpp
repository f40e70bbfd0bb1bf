#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "sparseal/rng.hpp"

using namespace sparseal;

TEST_CASE("same seed and stream replay the identical u64 sequence") {
  RngState a(42, 7);
  RngState b(42, 7);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct seeds or streams give distinct sequences") {
  RngState a(42, 7);
  RngState b(43, 7);
  RngState c(42, 8);
  int diff_seed = 0;
  int diff_stream = 0;
  RngState a2(42, 7);
  for (int i = 0; i < 32; ++i) {
    const std::uint64_t va = a.next_u64();
    if (va != b.next_u64()) ++diff_seed;
    if (a2.next_u64() != c.next_u64()) ++diff_stream;
  }
  // 32 independent 64-bit collisions are impossible in practice.
  CHECK(diff_seed > 0);
  CHECK(diff_stream > 0);
}

TEST_CASE("output is a pure function of the counter position") {
  RngState a(9, 1);
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 10; ++i) first.push_back(a.next_u64());

  // Reconstruct and skip ahead by consuming; values at equal positions match.
  RngState b(9, 1);
  for (int i = 0; i < 5; ++i) (void)b.next_u64();
  for (int i = 5; i < 10; ++i) CHECK(b.next_u64() == first[static_cast<std::size_t>(i)]);
}

TEST_CASE("substream depends only on (seed, stream, id), not the parent counter") {
  RngState parent(123, 4);
  RngState before = parent.substream(17);
  for (int i = 0; i < 100; ++i) (void)parent.next_u64();
  RngState after = parent.substream(17);
  for (int i = 0; i < 16; ++i) CHECK(before.next_u64() == after.next_u64());
}

TEST_CASE("substreams with different ids are distinct and stable") {
  RngState parent(5, 0);
  std::set<std::uint64_t> firsts;
  for (std::uint64_t id = 0; id < 200; ++id) {
    RngState s = parent.substream(id);
    firsts.insert(s.next_u64());
  }
  CHECK(firsts.size() == 200);

  RngState s1 = parent.substream(3);
  RngState s2 = parent.substream(3);
  for (int i = 0; i < 8; ++i) CHECK(s1.next_u64() == s2.next_u64());
}

TEST_CASE("substream of substream stays deterministic") {
  RngState parent(77, 2);
  RngState g1 = parent.substream(10).substream(20);
  RngState g2 = parent.substream(10).substream(20);
  for (int i = 0; i < 8; ++i) CHECK(g1.next_u64() == g2.next_u64());
}

TEST_CASE("next_unit lies in [0,1) and next_unit_pos in (0,1]") {
  RngState rng(1, 1);
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double p = rng.next_unit_pos();
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  // Sanity: draws actually spread over the interval.
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("uniform draws have the right mean") {
  RngState rng(2, 1);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.next_unit();
  // sd of the mean is 1/sqrt(12 n) ~ 6.5e-4; allow 5 sigma.
  CHECK(std::abs(sum / n - 0.5) < 3.3e-3);
}

TEST_CASE("gaussian draws have near-standard moments") {
  RngState rng(3, 1);
  const int n = 200000;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sumsq += g * g;
    CHECK(std::isfinite(g));
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.011);      // 5 sigma = 5/sqrt(n)
  CHECK(std::abs(var - 1.0) < 0.016);  // 5 sigma ~ 5*sqrt(2/n)
}

TEST_CASE("fill_gaussian result depends only on state and length") {
  RngState a(11, 6);
  RngState b(11, 6);
  std::vector<double> va(7);
  std::vector<double> vb(7);
  a.fill_gaussian(va);
  b.fill_gaussian(vb);
  CHECK(va == vb);

  // The next fill continues deterministically too.
  std::vector<double> wa(5);
  std::vector<double> wb(5);
  a.fill_gaussian(wa);
  b.fill_gaussian(wb);
  CHECK(wa == wb);
}

TEST_CASE("fill_gaussian splits on pair boundaries reproduce the bulk fill") {
  // Pairs are consumed in position order with no cached spare, so splitting a
  // fill at an even offset yields exactly the same values.
  RngState a(13, 6);
  RngState b(13, 6);
  std::vector<double> bulk(9);
  a.fill_gaussian(bulk);
  std::vector<double> head(4);
  std::vector<double> tail(5);
  b.fill_gaussian(head);
  b.fill_gaussian(tail);
  for (std::size_t i = 0; i < 4; ++i) CHECK(bulk[i] == head[i]);
  for (std::size_t i = 0; i < 5; ++i) CHECK(bulk[4 + i] == tail[i]);
}

TEST_CASE("default-constructed state is usable and reproducible") {
  RngState a;
  RngState b;
  CHECK(a.next_u64() == b.next_u64());
}
