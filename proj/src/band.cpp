#include "sparseal/band.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparseal/errors.hpp"

namespace sparseal {

EpochCounts& QueryLedger::current() {
  if (epochs.empty()) throw InternalError("QueryLedger: no epoch started");
  return epochs.back();
}

EpochCounts QueryLedger::totals() const {
  EpochCounts sum;
  for (const EpochCounts& e : epochs) {
    sum.unlabeled += e.unlabeled;
    sum.rejected += e.rejected;
    sum.queries += e.queries;
  }
  return sum;
}

void SampleBatch::reserve(std::size_t n) {
  xs.reserve(n * dim);
  ys.reserve(n);
}

void SampleBatch::append(std::span<const double> x, int y) {
  if (x.size() != dim) throw ParameterError("SampleBatch: row dimension mismatch");
  xs.insert(xs.end(), x.begin(), x.end());
  ys.push_back(static_cast<std::int8_t>(y));
  ++count;
}

double expected_acceptance(const Band& band, const MarginalDistribution& marginal) {
  if (band.full_space) return 1.0;
  return band_mass(marginal, band.normal, band.width);
}

SampleBatch draw_from_band(const Band& band, std::size_t n, const World& world,
                           QueryLedger& ledger, RngState& rng, const DrawOptions& opts) {
  if (n == 0) throw ParameterError("draw_from_band: need n >= 1");
  if (!band.full_space) {
    if (band.normal.size() != static_cast<std::size_t>(world.marginal.dim)) {
      throw ParameterError("draw_from_band: band normal dimension mismatch");
    }
    if (!(band.width > 0.0)) throw ParameterError("draw_from_band: band width must be positive");
  }

  std::uint64_t cap = opts.attempt_cap;
  if (cap == 0) {
    const double acceptance = std::max(expected_acceptance(band, world.marginal), 1e-6);
    cap = static_cast<std::uint64_t>(1e4 * static_cast<double>(n) / acceptance);
  }

  EpochCounts& counts = ledger.current();
  SampleBatch batch;
  batch.dim = static_cast<std::size_t>(world.marginal.dim);
  batch.reserve(n);

  Vec x(batch.dim);
  std::uint64_t attempts = 0;
  while (batch.count < n) {
    if (attempts >= cap) {
      throw SamplingStarvationError(
          "draw_from_band: attempt cap " + std::to_string(cap) + " reached with " +
          std::to_string(batch.count) + "/" + std::to_string(n) + " accepted");
    }
    ++attempts;
    ++counts.unlabeled;
    sample_x_into(world.marginal, rng, x);
    if (!band.full_space && std::abs(dot(band.normal, x)) > band.width) {
      ++counts.rejected;
      continue;
    }
    ++counts.queries;
    batch.append(x, label(x, world.target, world.noise, rng));
  }
  return batch;
}

}  // namespace sparseal
