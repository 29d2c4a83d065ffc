#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace exchboot {

// Counter-based generator (Philox4x32-10). A stream is identified by a
// 64-bit key and a 64-bit stream id; the remaining 64 counter bits index
// blocks within the stream, so every (key, stream) pair is independent and
// can be created anywhere without shared state.
class Philox4x32 {
public:
  using result_type = std::uint64_t;

  Philox4x32(std::uint64_t key, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);

private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
};

// SplitMix64 finalizer, used to turn structured ids into well-spread keys.
std::uint64_t mix64(std::uint64_t z);

// Generator for draw `index` of a run seeded with `master_seed`.
Philox4x32 draw_rng(std::uint64_t master_seed, std::uint64_t index);

// Child seed for nested runs (e.g. trial t of an experiment).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

// Uniform integer in [0, bound) by Lemire's multiply-and-reject method.
std::uint64_t bounded(Philox4x32& rng, std::uint64_t bound);

// Uniform double in [0, 1) with 53 random bits.
double uniform01(Philox4x32& rng);

// Standard normal via Box-Muller; one variate per call.
double standard_normal(Philox4x32& rng);

}  // namespace exchboot
