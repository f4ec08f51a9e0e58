#ifndef HULLPEEL_RANDOM_HPP
#define HULLPEEL_RANDOM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace hullpeel {

using Rng = std::mt19937_64;

/// Recorded in every report so runs can be replayed.
inline constexpr const char* kRngAlgorithm =
    "mt19937_64 per trial, seeded splitmix64(s ^ splitmix64(trial)) with s = splitmix64(seed + schedule index)";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for one trial of a seeded experiment.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return Rng(splitmix64(seed ^ splitmix64(trial)));
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs fn(trial) for trial = 0..trials-1 on up to `threads` workers and
/// returns the results indexed by trial, so reductions over the vector are
/// independent of scheduling. The first exception thrown is rethrown.
template <class Fn>
auto run_trials(std::size_t trials, unsigned threads, Fn&& fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> out(trials);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
  if (threads == 1) {
    for (std::size_t t = 0; t < trials; ++t) out[t] = fn(t);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < trials; t += threads) out[t] = fn(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace hullpeel

#endif  // HULLPEEL_RANDOM_HPP
