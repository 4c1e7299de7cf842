#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace blockboot {

// SplitMix64 step (Vigna's mixer).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a stream seed from a master seed and a path of counters
// (grid id, replication, phase). Distinct paths give streams that are
// independent for all practical purposes, so scheduling order and worker
// count never influence results.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

std::mt19937_64 make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Standard-normal innovation stream backed by a dedicated engine.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace blockboot
