#include "fts/pivotal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fts/common.hpp"
#include "fts/rng.hpp"

namespace fts::pivotal {

namespace {

constexpr std::size_t kStreamChunk = 8192;

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", p);
  return std::string(buf);
}

// One pivot draw from an already-seeded engine. The Brownian path is
// visited once; B is recorded at the checkpoint indices (floor of
// lambda * bm_steps) and at the terminal node.
double one_draw(PivotKind kind, const core::NuMeasure& nu,
                const std::vector<std::size_t>& checkpoints, std::size_t bm_steps,
                rng::Engine& engine) {
  const double sd = std::sqrt(1.0 / static_cast<double>(bm_steps));
  const std::size_t k = nu.size();
  std::vector<double> b_at(k, 0.0);
  for (;;) {
    double b = 0.0;
    std::size_t next = 0;
    while (next < k && checkpoints[next] == 0) ++next;
    for (std::size_t step = 1; step <= bm_steps; ++step) {
      b += sd * engine.normal();
      while (next < k && checkpoints[next] == step) b_at[next++] = b;
    }
    const double b1 = b;
    double den = 0.0;
    switch (kind) {
      case PivotKind::W: {
        double acc = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
          const double lam = nu.support()[i];
          const double d = lam * (b_at[i] - lam * b1);
          acc += nu.weights()[i] * d * d;
        }
        den = std::sqrt(acc);
        break;
      }
      case PivotKind::WStar: {
        double sup = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
          if (nu.weights()[i] <= 0.0) continue;
          const double lam = nu.support()[i];
          sup = std::max(sup, std::fabs(lam * (b_at[i] - lam * b1)));
        }
        den = sup;
        break;
      }
      case PivotKind::WStarStar: {
        double acc = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
          const double lam = nu.support()[i];
          acc += nu.weights()[i] * std::fabs(lam * (b_at[i] - lam * b1));
        }
        den = acc;
        break;
      }
    }
    if (den > 0.0) return b1 / den;
    // Degenerate path (probability zero up to rounding): draw a fresh one.
  }
}

}  // namespace

const char* to_string(PivotKind kind) {
  switch (kind) {
    case PivotKind::W: return "W";
    case PivotKind::WStar: return "Wstar";
    case PivotKind::WStarStar: return "Wstarstar";
  }
  return "?";
}

PivotKind pivot_kind_from_string(const std::string& name) {
  if (name == "W") return PivotKind::W;
  if (name == "Wstar") return PivotKind::WStar;
  if (name == "Wstarstar") return PivotKind::WStarStar;
  throw precondition_error("unknown pivot kind: " + name);
}

PivotKind pivot_for(core::NormalizerKind kind) {
  switch (kind) {
    case core::NormalizerKind::standard: return PivotKind::W;
    case core::NormalizerKind::sup: return PivotKind::WStar;
    case core::NormalizerKind::abs: return PivotKind::WStarStar;
  }
  return PivotKind::W;
}

std::vector<double> simulate_pivot_draws(PivotKind kind, const core::NuMeasure& nu,
                                         const SimulationSettings& settings) {
  require(settings.replications >= 1, "need at least one replication");
  require(settings.bm_steps >= 2, "need at least two path steps");

  std::vector<std::size_t> checkpoints(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) {
    checkpoints[i] = static_cast<std::size_t>(
        floor_index(nu.support()[i] * static_cast<double>(settings.bm_steps)));
  }

  const std::size_t reps = settings.replications;
  std::vector<double> draws(reps);
  const std::size_t n_streams = (reps + kStreamChunk - 1) / kStreamChunk;

  auto run_stream = [&](std::size_t s) {
    const std::size_t lo = s * kStreamChunk;
    const std::size_t hi = std::min(reps, lo + kStreamChunk);
    rng::Engine engine(rng::SeedChain(settings.seed).mix(0x70697674ull).mix(s).value());
    for (std::size_t r = lo; r < hi; ++r)
      draws[r] = one_draw(kind, nu, checkpoints, settings.bm_steps, engine);
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (workers == 1 || n_streams == 1) {
    for (std::size_t s = 0; s < n_streams; ++s) run_stream(s);
  } else {
    std::vector<std::future<void>> pending;
    pending.reserve(n_streams);
    for (std::size_t s = 0; s < n_streams; ++s)
      pending.push_back(std::async(std::launch::async, run_stream, s));
    for (auto& f : pending) f.get();
  }
  return draws;
}

double quantile(std::vector<double> draws, double p) {
  require(!draws.empty(), "quantile of an empty draw set");
  require(p >= 0.0 && p <= 1.0, "quantile probability must lie in [0,1]");
  std::sort(draws.begin(), draws.end());
  const double h = (static_cast<double>(draws.size()) - 1.0) * p;
  const auto idx = static_cast<std::size_t>(std::floor(h));
  const double g = h - static_cast<double>(idx);
  if (idx + 1 >= draws.size()) return draws.back();
  return draws[idx] + g * (draws[idx + 1] - draws[idx]);
}

PivotalQuantiles::PivotalQuantiles(PivotKind kind, core::NuMeasure nu,
                                   SimulationSettings settings,
                                   std::map<double, double> table)
    : kind_(kind),
      nu_(std::move(nu)),
      settings_(settings),
      rng_algorithm_(rng::kAlgorithm),
      table_(std::move(table)) {
  require(!table_.empty(), "quantile table must be nonempty");
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& [p, v] : table_) {
    require(p > 0.0 && p < 1.0, "table probabilities must lie in (0,1)");
    require(v >= prev, "quantile table must be nondecreasing in p");
    prev = v;
  }
}

double PivotalQuantiles::at(double p) const {
  auto it = table_.lower_bound(p - 1e-12);
  if (it != table_.end() && std::fabs(it->first - p) <= 1e-12) return it->second;
  throw precondition_error("probability " + format_prob(p) +
                           " is not tabulated in the quantile table");
}

std::string PivotalQuantiles::cache_key() const {
  std::ostringstream key;
  key << to_string(kind_) << '|' << rng_algorithm_ << '|' << settings_.replications
      << '|' << settings_.bm_steps << '|' << settings_.seed << '|' << nu_.fingerprint();
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(rng::fnv1a(key.str())));
  return std::string(to_string(kind_)) + "-" + buf;
}

std::string PivotalQuantiles::to_json() const {
  nlohmann::json j;
  j["schema"] = "pivotal-quantiles/1";
  j["kind"] = to_string(kind_);
  j["rng_algorithm"] = rng_algorithm_;
  j["replications"] = settings_.replications;
  j["bm_steps"] = settings_.bm_steps;
  j["seed"] = settings_.seed;
  j["nu"]["support"] = nu_.support();
  j["nu"]["weights"] = nu_.weights();
  nlohmann::json q = nlohmann::json::object();
  for (const auto& [p, v] : table_) q[format_prob(p)] = v;
  j["quantiles"] = q;
  return j.dump(2);
}

PivotalQuantiles PivotalQuantiles::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("quantile table JSON parse failure: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "pivotal-quantiles/1")
      throw data_error("unsupported quantile table schema");
    SimulationSettings settings;
    settings.replications = j.at("replications").get<std::size_t>();
    settings.bm_steps = j.at("bm_steps").get<std::size_t>();
    settings.seed = j.at("seed").get<std::uint64_t>();
    core::NuMeasure nu(j.at("nu").at("support").get<std::vector<double>>(),
                       j.at("nu").at("weights").get<std::vector<double>>());
    std::map<double, double> table;
    for (const auto& [key, value] : j.at("quantiles").items())
      table[std::stod(key)] = value.get<double>();
    PivotalQuantiles out(pivot_kind_from_string(j.at("kind").get<std::string>()),
                         std::move(nu), settings, std::move(table));
    if (j.at("rng_algorithm").get<std::string>() != out.rng_algorithm())
      throw data_error("quantile table was built with a different rng algorithm");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("quantile table JSON is missing fields: ") + e.what());
  }
}

const std::vector<double>& default_probabilities() {
  static const std::vector<double> probs = {0.01, 0.025, 0.05, 0.10, 0.50,
                                            0.90, 0.95, 0.975, 0.99};
  return probs;
}

PivotalQuantiles build_quantile_table(PivotKind kind, const core::NuMeasure& nu,
                                      const std::vector<double>& probabilities,
                                      const SimulationSettings& settings) {
  require(!probabilities.empty(), "need at least one probability");
  std::vector<double> draws = simulate_pivot_draws(kind, nu, settings);
  std::sort(draws.begin(), draws.end());
  std::map<double, double> table;
  for (double p : probabilities) {
    require(p > 0.0 && p < 1.0, "table probabilities must lie in (0,1)");
    const double h = (static_cast<double>(draws.size()) - 1.0) * p;
    const auto idx = static_cast<std::size_t>(std::floor(h));
    const double g = h - static_cast<double>(idx);
    table[p] = (idx + 1 >= draws.size())
                   ? draws.back()
                   : draws[idx] + g * (draws[idx + 1] - draws[idx]);
  }
  return PivotalQuantiles(kind, nu, settings, std::move(table));
}

std::string cache_dir_or_default(const std::string& dir) {
  if (!dir.empty()) return dir;
  if (const char* env = std::getenv("FTS_CACHE_DIR"); env != nullptr && *env != '\0')
    return env;
  return ".fts_cache";
}

namespace {
std::filesystem::path cache_path(const std::string& dir, const PivotalQuantiles& q) {
  return std::filesystem::path(cache_dir_or_default(dir)) / (q.cache_key() + ".json");
}
}  // namespace

std::optional<PivotalQuantiles> load_cached(const std::string& dir, PivotKind kind,
                                            const core::NuMeasure& nu,
                                            const SimulationSettings& settings) {
  // Build a key-only probe to locate the file.
  std::map<double, double> probe_table{{0.5, 0.0}};
  PivotalQuantiles probe(kind, nu, settings, std::move(probe_table));
  const auto path = cache_path(dir, probe);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream text;
  text << in.rdbuf();
  PivotalQuantiles loaded = PivotalQuantiles::from_json(text.str());
  if (loaded.kind() != kind || !(loaded.nu() == nu) ||
      loaded.settings().replications != settings.replications ||
      loaded.settings().bm_steps != settings.bm_steps ||
      loaded.settings().seed != settings.seed)
    throw data_error("quantile cache entry does not match its key: " + path.string());
  return loaded;
}

void save_cached(const std::string& dir, const PivotalQuantiles& q) {
  const auto path = cache_path(dir, q);
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw data_error("cannot write quantile cache file: " + path.string());
  out << q.to_json() << '\n';
}

PivotalQuantiles ensure_table(const std::string& dir, PivotKind kind,
                              const core::NuMeasure& nu,
                              const std::vector<double>& probabilities,
                              const SimulationSettings& settings, std::string* notice) {
  if (auto cached = load_cached(dir, kind, nu, settings)) {
    const bool complete = std::all_of(
        probabilities.begin(), probabilities.end(), [&](double p) {
          try {
            cached->at(p);
            return true;
          } catch (const precondition_error&) {
            return false;
          }
        });
    if (complete) return *cached;
  }
  if (notice != nullptr)
    *notice = std::string("simulating ") + to_string(kind) + " quantiles (" +
              std::to_string(settings.replications) + " replications)";
  PivotalQuantiles built = build_quantile_table(kind, nu, probabilities, settings);
  save_cached(dir, built);
  return built;
}

}  // namespace fts::pivotal
