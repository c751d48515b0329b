#pragma once

#include <cstddef>
#include <future>
#include <utility>

namespace moe {

/// Deterministic pairwise (binary-tree) reduction of term(i) for i in
/// [begin, end). The split points depend only on the index range, never on
/// the worker count, so the result is bit-identical for any `workers` value.
/// Top levels of the tree are dispatched to std::async while the remaining
/// spawn budget allows; every leaf of size <= 32 is summed sequentially.
template <class Term>
double pairwise_sum(std::size_t begin, std::size_t end, Term&& term,
                    unsigned workers = 1) {
  struct Impl {
    static double run(std::size_t b, std::size_t e, Term& t, unsigned budget) {
      const std::size_t n = e - b;
      if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += t(i);
        return s;
      }
      const std::size_t mid = b + n / 2;
      if (budget > 1 && n >= 4096) {
        auto right = std::async(std::launch::async, [&t, mid, e, budget] {
          return run(mid, e, t, budget / 2);
        });
        const double left = run(b, mid, t, budget - budget / 2);
        return left + right.get();
      }
      return run(b, mid, t, budget) + run(mid, e, t, budget);
    }
  };
  return Impl::run(begin, end, term, workers == 0 ? 1 : workers);
}

/// Applies fn(i) for i in [0, count) with the same deterministic splitting.
/// fn must be safe to call concurrently for distinct i.
template <class Fn>
void parallel_for_index(std::size_t count, Fn&& fn, unsigned workers = 1) {
  struct Impl {
    static void run(std::size_t b, std::size_t e, Fn& f, unsigned budget) {
      const std::size_t n = e - b;
      if (budget <= 1 || n < 2) {
        for (std::size_t i = b; i < e; ++i) f(i);
        return;
      }
      const std::size_t mid = b + n / 2;
      auto right = std::async(std::launch::async, [&f, mid, e, budget] {
        run(mid, e, f, budget / 2);
      });
      run(b, mid, f, budget - budget / 2);
      right.get();
    }
  };
  Impl::run(0, count, fn, workers == 0 ? 1 : workers);
}

}  // namespace moe
