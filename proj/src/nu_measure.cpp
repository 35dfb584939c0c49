#include "fts/nu_measure.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>

#include "fts/common.hpp"

namespace fts::core {

NuMeasure::NuMeasure(std::vector<double> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  require(!support_.empty(), "nu needs at least one atom");
  require(support_.size() == weights_.size(), "nu support/weight length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    require(support_[i] > 0.0 && support_[i] < 1.0, "nu atoms must lie in (0,1)");
    if (i > 0) require(support_[i] > support_[i - 1], "nu support must be strictly increasing");
    require(weights_[i] >= 0.0, "nu weights must be nonnegative");
    total += weights_[i];
  }
  require(std::fabs(total - 1.0) <= 1e-12, "nu weights must sum to one");
}

NuMeasure NuMeasure::uniform_atoms(std::size_t k) {
  require(k >= 1, "nu needs at least one atom");
  std::vector<double> support(k);
  std::vector<double> weights(k, 1.0 / static_cast<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    support[i] = static_cast<double>(i + 1) / static_cast<double>(k + 1);
  return NuMeasure(std::move(support), std::move(weights));
}

std::string NuMeasure::fingerprint() const {
  // FNV-1a over the exact bit patterns of support and weights.
  std::uint64_t h = 1469598103934665603ull;
  auto eat = [&h](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  };
  for (double v : support_) eat(v);
  for (double v : weights_) eat(v);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace fts::core
