#include "hapsim/sim/rng.hpp"

#include <cmath>

#include "hapsim/error.hpp"

namespace hapsim::sim {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t hash_id(std::string_view id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t root_seed, std::string_view stream_id)
    : key_(mix64(mix64(root_seed + kGolden) ^ mix64(hash_id(stream_id)))) {}

std::uint64_t RngStream::draw_at(std::uint64_t counter) const {
  return mix64(key_ + (counter + 1) * kGolden);
}

std::uint64_t RngStream::next_u64() { return draw_at(counter_++); }

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw Error("uniform_int: bound must be positive");
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % bound;
}

double RngStream::exponential(double mean) {
  // u in (0, 1) keeps the draw finite and strictly positive.
  double u = uniform();
  while (u == 0.0) u = uniform();
  return -mean * std::log(u);
}

RngStream RngRegistry::fork(std::string_view stream_id) {
  auto [it, inserted] = used_.emplace(stream_id);
  if (!inserted) throw Error("duplicate rng stream id: " + std::string(stream_id));
  return RngStream(root_seed_, stream_id);
}

}  // namespace hapsim::sim
