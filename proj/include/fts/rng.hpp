#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace fts::rng {

// Identifier stored alongside cached quantile tables; draws are only
// comparable across runs that used the same algorithm.
inline constexpr const char* kAlgorithm = "mt19937_64/boxmuller/v1";

// splitmix64 step; the basis of all seed derivation.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic seed derivation: fold an arbitrary list of tags into a
// base seed. chain(seed).mix(a).mix(b).value() is order-sensitive.
class SeedChain {
 public:
  explicit SeedChain(std::uint64_t base) : state_(base) {}
  SeedChain mix(std::uint64_t tag) const;
  std::uint64_t value() const;

 private:
  std::uint64_t state_;
};

std::uint64_t fnv1a(const std::string& text);

// mt19937_64 with explicitly-coded output mappings so results are
// bit-identical across standard libraries (std distributions are not).
class Engine {
 public:
  explicit Engine(std::uint64_t seed) : gen_(seed) {}

  // Uniform on (0,1]: (top 53 bits + 1) * 2^-53. Never zero, so safe
  // under log().
  double uniform_pos();
  // Uniform on [0,1).
  double uniform();

  // Standard normal via Box-Muller; draws arrive in pairs, the second is
  // cached.
  double normal();

  // Student t with 5 degrees of freedom: Z / sqrt(chi2_5 / 5), the chi2
  // built from 5 squared normals.
  double student_t5();

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Standard normal quantile (Wichura's PPND16 rational approximation,
// |error| < 1e-15 for p in (0,1)).
double normal_quantile(double p);

}  // namespace fts::rng
