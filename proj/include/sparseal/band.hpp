#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sparseal/world.hpp"

namespace sparseal {

// Sampling region {x : |normal.x| <= width}, or the whole space when
// full_space is set (normal/width are then ignored).
struct Band {
  Vec normal;
  double width = 0.0;
  bool full_space = false;

  static Band all_of() { return Band{{}, 0.0, true}; }
  static Band slab(Vec normal, double width) { return Band{std::move(normal), width, false}; }
};

struct EpochCounts {
  std::uint64_t unlabeled = 0;  // marginal draws attempted
  std::uint64_t rejected = 0;   // draws outside the band
  std::uint64_t queries = 0;    // labels requested
};

// Per-epoch tallies plus overall totals; one entry per begin_epoch call.
struct QueryLedger {
  std::vector<EpochCounts> epochs;

  void begin_epoch() { epochs.emplace_back(); }
  EpochCounts& current();
  EpochCounts totals() const;
};

// Row-major batch of labeled points; all rows share one dimension.
struct SampleBatch {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> xs;
  std::vector<std::int8_t> ys;

  std::span<const double> x(std::size_t i) const { return {xs.data() + i * dim, dim}; }
  int y(std::size_t i) const { return ys[i]; }
  void reserve(std::size_t n);
  void append(std::span<const double> x, int y);
};

struct DrawOptions {
  // 0 selects the default cap 1e4 * n / max(acceptance, 1e-6).
  std::uint64_t attempt_cap = 0;
};

// Fraction of marginal mass inside the band: 1 for full space, band_mass
// otherwise.
double expected_acceptance(const Band& band, const MarginalDistribution& marginal);

// Draws n labeled points from the marginal conditioned on the band by
// rejection, labeling only accepted points. Counts land in the ledger's
// current epoch. Throws SamplingStarvationError when the attempt cap is hit.
SampleBatch draw_from_band(const Band& band, std::size_t n, const World& world,
                           QueryLedger& ledger, RngState& rng, const DrawOptions& opts = {});

}  // namespace sparseal
