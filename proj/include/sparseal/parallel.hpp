#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sparseal {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// All parallel reductions below accumulate into a fixed number of slots and
// reduce the slots in index order. The result therefore depends only on the
// slot count, never on how many threads ran or how iterations were scheduled,
// which keeps every floating-point output bit-for-bit reproducible.
inline constexpr int kReduceSlots = 128;

inline std::size_t slot_begin(std::size_t n, int slot) {
  return n * static_cast<std::size_t>(slot) / kReduceSlots;
}

// Deterministic parallel sum of term(i) over i in [0, n).
template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
  double slots[kReduceSlots];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int s = 0; s < kReduceSlots; ++s) {
    double acc = 0.0;
    const std::size_t hi = slot_begin(n, s + 1);
    for (std::size_t i = slot_begin(n, s); i < hi; ++i) acc += term(i);
    slots[s] = acc;
  }
  double total = 0.0;
  for (int s = 0; s < kReduceSlots; ++s) total += slots[s];
  return total;
}

// Serial left-to-right reference for blocked_sum. Kept for equivalence tests
// and the kernel benchmark; not bit-identical to the blocked order.
template <class Term>
double blocked_sum_serial(std::size_t n, Term&& term) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += term(i);
  return acc;
}

// Deterministic parallel count of pred(i) over i in [0, n). Integer
// reduction, so it matches the serial count exactly.
template <class Pred>
std::size_t blocked_count(std::size_t n, Pred&& pred) {
  std::size_t total = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : total)
#endif
  for (std::size_t i = 0; i < n; ++i) {
    if (pred(i)) ++total;
  }
  return total;
}

// Deterministic parallel accumulation of dim-length contributions.
// add(i, acc) must add row i's contribution into acc[0..dim). Slot buffers
// are reduced coordinate-wise in slot order. `scratch` is reused between
// calls to avoid reallocating kReduceSlots*dim doubles in hot loops.
template <class Add>
void blocked_accumulate(std::size_t n, std::size_t dim, Add&& add, double* out,
                        std::vector<double>& scratch) {
  scratch.assign(static_cast<std::size_t>(kReduceSlots) * dim, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int s = 0; s < kReduceSlots; ++s) {
    double* acc = scratch.data() + static_cast<std::size_t>(s) * dim;
    const std::size_t hi = slot_begin(n, s + 1);
    for (std::size_t i = slot_begin(n, s); i < hi; ++i) add(i, acc);
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t j = 0; j < dim; ++j) {
    double acc = 0.0;
    for (int s = 0; s < kReduceSlots; ++s) acc += scratch[static_cast<std::size_t>(s) * dim + j];
    out[j] = acc;
  }
}

}  // namespace sparseal
