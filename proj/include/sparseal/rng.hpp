#pragma once

#include <cstdint>
#include <span>

namespace sparseal {

// Counter-based generator. Output i is a pure function of (seed, stream, i),
// so any number of logically independent streams can be derived up front and
// consumed in parallel without shared state. Replaying with the same
// (seed, stream) reproduces the sequence exactly on any platform.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t counter = 0;

  RngState() { rekey(); }
  RngState(std::uint64_t seed_, std::uint64_t stream_) : seed(seed_), stream(stream_) { rekey(); }

  std::uint64_t next_u64();
  double next_unit();      // uniform in [0, 1)
  double next_unit_pos();  // uniform in (0, 1], safe for log()
  double next_gaussian();  // standard normal
  // Fills out[] with iid standard normals. Box-Muller pairs are consumed in
  // position order and no spare is cached, so the result depends only on the
  // state and out.size(), not on previous fill boundaries.
  void fill_gaussian(std::span<double> out);

  // Independent generator keyed by id. Depends only on (seed, stream, id),
  // never on this generator's counter, so per-item substreams can be taken
  // inside a parallel loop in any order.
  RngState substream(std::uint64_t id) const;

 private:
  std::uint64_t key_ = 0;
  void rekey();
};

}  // namespace sparseal
