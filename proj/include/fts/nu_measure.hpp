#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fts::core {

// Discrete probability measure on (0,1): the atoms the self-normalizer
// integrates over. Support strictly increasing, weights nonnegative and
// summing to one (tolerance 1e-12).
class NuMeasure {
 public:
  NuMeasure(std::vector<double> support, std::vector<double> weights);

  // Uniform measure on {i/(k+1) : i = 1..k}.
  static NuMeasure uniform_atoms(std::size_t k);

  std::size_t size() const { return support_.size(); }
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

  // Stable content fingerprint used in quantile cache keys.
  std::string fingerprint() const;

  bool operator==(const NuMeasure& other) const = default;

 private:
  std::vector<double> support_;
  std::vector<double> weights_;
};

}  // namespace fts::core
