#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fts/core_ops.hpp"
#include "fts/nu_measure.hpp"

namespace fts::pivotal {

// Limit-law family of the self-normalized statistics. Each member is a
// ratio B(1) / normalizer with B a standard Brownian motion and the
// normalizer the nu-functional of lambda * (B(lambda) - lambda * B(1)):
//   W:         sqrt( integral of the square dnu )
//   WStar:     nu-esssup of the absolute value
//   WStarStar: integral of the absolute value dnu
enum class PivotKind { W, WStar, WStarStar };

const char* to_string(PivotKind kind);
PivotKind pivot_kind_from_string(const std::string& name);

// Pivot family matching a normalizer kind (standard -> W, sup -> WStar,
// abs -> WStarStar).
PivotKind pivot_for(core::NormalizerKind kind);

struct SimulationSettings {
  std::size_t replications = 100000;
  // Brownian path steps; default is a multiple of 20 so the default nu
  // support {i/20} lands on exact path nodes.
  std::size_t bm_steps = 2000;
  std::uint64_t seed = 42;
};

// Monte Carlo draws of the pivot law. Deterministic in (kind, nu,
// settings); draws whose normalizer is exactly zero are re-simulated.
// Work is partitioned into fixed-size streams with derived seeds and
// merged by stream index, so any parallel schedule gives the same output.
std::vector<double> simulate_pivot_draws(PivotKind kind, const core::NuMeasure& nu,
                                         const SimulationSettings& settings);

// Order-statistic quantile with linear interpolation at h = (n-1)p + 1.
// draws need not be sorted; p in [0,1].
double quantile(std::vector<double> draws, double p);

// Frozen quantile table for one pivot law.
class PivotalQuantiles {
 public:
  PivotalQuantiles(PivotKind kind, core::NuMeasure nu, SimulationSettings settings,
                   std::map<double, double> table);

  PivotKind kind() const { return kind_; }
  const core::NuMeasure& nu() const { return nu_; }
  const SimulationSettings& settings() const { return settings_; }
  const std::map<double, double>& table() const { return table_; }
  const std::string& rng_algorithm() const { return rng_algorithm_; }

  // Exact probability lookup (tolerance 1e-12); missing -> error.
  double at(double p) const;

  std::string cache_key() const;
  std::string to_json() const;
  static PivotalQuantiles from_json(const std::string& text);

 private:
  PivotKind kind_;
  core::NuMeasure nu_;
  SimulationSettings settings_;
  std::string rng_algorithm_;
  std::map<double, double> table_;
};

// Probabilities tabulated by default: both tails plus the median.
const std::vector<double>& default_probabilities();

PivotalQuantiles build_quantile_table(PivotKind kind, const core::NuMeasure& nu,
                                      const std::vector<double>& probabilities,
                                      const SimulationSettings& settings);

// Disk cache. Location: explicit dir argument, else $FTS_CACHE_DIR, else
// ./.fts_cache. Load validates that every key field matches.
std::string cache_dir_or_default(const std::string& dir);
std::optional<PivotalQuantiles> load_cached(const std::string& dir, PivotKind kind,
                                            const core::NuMeasure& nu,
                                            const SimulationSettings& settings);
void save_cached(const std::string& dir, const PivotalQuantiles& q);

// Load from cache or build-and-save. notice (optional) receives a line
// when a rebuild happens.
PivotalQuantiles ensure_table(const std::string& dir, PivotKind kind,
                              const core::NuMeasure& nu,
                              const std::vector<double>& probabilities,
                              const SimulationSettings& settings,
                              std::string* notice = nullptr);

}  // namespace fts::pivotal
