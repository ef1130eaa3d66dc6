#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>

namespace hapsim::sim {

/// Counter-based random stream. Draw k is a pure function of
/// (root seed, stream id, k), so interleaving draws across entities never
/// changes what any single entity sees.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t root_seed, std::string_view stream_id);

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform integer on [0, bound). bound must be > 0.
  std::uint64_t uniform_int(std::uint64_t bound);
  /// Exponential with the given mean; strictly positive.
  double exponential(double mean = 1.0);

  std::uint64_t draw_at(std::uint64_t counter) const;
  std::uint64_t counter() const { return counter_; }
  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

std::uint64_t hash_id(std::string_view id);

/// Hands out one stream per entity id; asking twice for the same id is an error.
class RngRegistry {
 public:
  explicit RngRegistry(std::uint64_t root_seed) : root_seed_(root_seed) {}

  RngStream fork(std::string_view stream_id);
  std::uint64_t root_seed() const { return root_seed_; }

 private:
  std::uint64_t root_seed_;
  std::set<std::string, std::less<>> used_;
};

}  // namespace hapsim::sim
