#include "sparseal/rng.hpp"

#include <cmath>

namespace sparseal {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

void RngState::rekey() {
  key_ = mix64(mix64(seed + kGolden) ^ mix64(stream + 0xd1b54a32d192ed03ULL));
}

std::uint64_t RngState::next_u64() {
  return mix64(key_ + (++counter) * kGolden);
}

double RngState::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngState::next_unit_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngState::next_gaussian() {
  const double u1 = next_unit_pos();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

void RngState::fill_gaussian(std::span<double> out) {
  std::size_t i = 0;
  for (; i + 1 < out.size(); i += 2) {
    const double u1 = next_unit_pos();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = kTwoPi * u2;
    out[i] = r * std::cos(a);
    out[i + 1] = r * std::sin(a);
  }
  if (i < out.size()) out[i] = next_gaussian();
}

RngState RngState::substream(std::uint64_t id) const {
  RngState child;
  child.seed = seed;
  child.stream = mix64(stream ^ mix64(id + 0x2545f4914f6cdd1dULL));
  child.counter = 0;
  child.rekey();
  return child;
}

}  // namespace sparseal
