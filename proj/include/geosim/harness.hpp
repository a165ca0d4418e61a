#pragma once

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geosim/baselines.hpp"
#include "geosim/errors.hpp"
#include "geosim/fieldgen.hpp"
#include "geosim/grid.hpp"
#include "geosim/metrics.hpp"
#include "geosim/rng.hpp"
#include "geosim/transport.hpp"
#include "geosim/variogram.hpp"

namespace geosim {

enum class Method { MST, Copula, LU };

inline constexpr Method kAllMethods[] = {Method::MST, Method::Copula, Method::LU};

inline std::string_view method_id(Method m) {
  switch (m) {
    case Method::MST: return "mst";
    case Method::Copula: return "copula";
    case Method::LU: return "lu";
  }
  throw std::invalid_argument("method_id: unknown method");
}

inline Method parse_method(std::string_view id) {
  for (Method m : kAllMethods)
    if (method_id(m) == id) return m;
  throw std::invalid_argument("unknown method '" + std::string(id) + "'");
}

/// Full description of one experiment matrix run. Defaults reproduce the
/// reference setup: 25x25 grid, seed 42, spherical(1,12) X, exponential(1,6)
/// Y, k=8, beta=35, lambda=2.2, 15 lags up to 1.5x the larger range.
struct ExperimentConfig {
  int nx = 25;
  int ny = 25;
  std::uint64_t seed = 42;
  VariogramModel model_x{VariogramKind::Spherical, 1.0, 12.0};
  VariogramModel model_y{VariogramKind::Exponential, 1.0, 6.0};
  SinkhornParams sinkhorn{};
  int n_lags = 15;
  double max_lag_factor = 1.5;
  int hist_bins = 20;
  double noise_scale = 0.1;
  std::vector<RelationshipKind> relationships{kAllRelationships,
                                              kAllRelationships + std::size(kAllRelationships)};
  std::vector<Method> methods{kAllMethods, kAllMethods + std::size(kAllMethods)};

  [[nodiscard]] double max_lag() const {
    return max_lag_factor * std::max(model_x.range, model_y.range);
  }

  void validate() const {
    Grid2D probe(nx, ny); // throws on invalid dimensions
    (void)probe;
    sinkhorn.validate();
    if (n_lags < 2) throw std::invalid_argument("config: n_lags must be at least 2");
    if (!(max_lag_factor > 0.0))
      throw std::invalid_argument("config: max_lag_factor must be positive");
    if (hist_bins < 1) throw std::invalid_argument("config: hist_bins must be positive");
    if (!(noise_scale >= 0.0))
      throw std::invalid_argument("config: noise_scale must be nonnegative");
    for (std::size_t i = 0; i < relationships.size(); ++i)
      for (std::size_t j = i + 1; j < relationships.size(); ++j)
        if (relationships[i] == relationships[j])
          throw std::invalid_argument("config: duplicate relationship requested");
    for (std::size_t i = 0; i < methods.size(); ++i)
      for (std::size_t j = i + 1; j < methods.size(); ++j)
        if (methods[i] == methods[j])
          throw std::invalid_argument("config: duplicate method requested");
  }
};

// --- config file ----------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string str(value);
    const double v = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + std::string(key) + "' has invalid number '" +
                                std::string(value) + "'");
  }
}

inline long long parse_integer(std::string_view key, std::string_view value) {
  long long v = 0;
  const auto* begin = value.data();
  const auto* end = value.data() + value.size();
  const auto [p, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || p != end)
    throw std::invalid_argument("config: key '" + std::string(key) + "' has invalid integer '" +
                                std::string(value) + "'");
  return v;
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  const auto* begin = value.data();
  const auto* end = value.data() + value.size();
  const auto [p, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || p != end)
    throw std::invalid_argument("config: key '" + std::string(key) + "' has invalid integer '" +
                                std::string(value) + "'");
  return v;
}

inline std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t comma = value.find(',', pos);
    const std::string_view item =
        trim(value.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline VariogramKind parse_variogram_kind(std::string_view key, std::string_view value) {
  if (value == "spherical") return VariogramKind::Spherical;
  if (value == "exponential") return VariogramKind::Exponential;
  throw std::invalid_argument("config: key '" + std::string(key) +
                              "' must be 'spherical' or 'exponential'");
}

inline std::string_view variogram_kind_id(VariogramKind kind) {
  return kind == VariogramKind::Spherical ? "spherical" : "exponential";
}

} // namespace detail

/// Applies one flat key to the config. Unknown keys are errors.
inline void set_config_key(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  using detail::parse_integer;
  using detail::parse_real;
  using detail::parse_u64;

  if (key == "nx") cfg.nx = static_cast<int>(parse_integer(key, value));
  else if (key == "ny") cfg.ny = static_cast<int>(parse_integer(key, value));
  else if (key == "seed") cfg.seed = parse_u64(key, value);
  else if (key == "model_x_kind")
    cfg.model_x = VariogramModel(detail::parse_variogram_kind(key, value), cfg.model_x.sill,
                                 cfg.model_x.range);
  else if (key == "model_x_sill")
    cfg.model_x = VariogramModel(cfg.model_x.kind, parse_real(key, value), cfg.model_x.range);
  else if (key == "model_x_range")
    cfg.model_x = VariogramModel(cfg.model_x.kind, cfg.model_x.sill, parse_real(key, value));
  else if (key == "model_y_kind")
    cfg.model_y = VariogramModel(detail::parse_variogram_kind(key, value), cfg.model_y.sill,
                                 cfg.model_y.range);
  else if (key == "model_y_sill")
    cfg.model_y = VariogramModel(cfg.model_y.kind, parse_real(key, value), cfg.model_y.range);
  else if (key == "model_y_range")
    cfg.model_y = VariogramModel(cfg.model_y.kind, cfg.model_y.sill, parse_real(key, value));
  else if (key == "k") cfg.sinkhorn.k = static_cast<int>(parse_integer(key, value));
  else if (key == "beta") cfg.sinkhorn.beta = parse_real(key, value);
  else if (key == "lambda") cfg.sinkhorn.lambda = parse_real(key, value);
  else if (key == "max_outer") cfg.sinkhorn.max_outer = static_cast<int>(parse_integer(key, value));
  else if (key == "max_sinkhorn")
    cfg.sinkhorn.max_sinkhorn = static_cast<int>(parse_integer(key, value));
  else if (key == "tol_marginal") cfg.sinkhorn.tol_marginal = parse_real(key, value);
  else if (key == "n_lags") cfg.n_lags = static_cast<int>(parse_integer(key, value));
  else if (key == "max_lag_factor") cfg.max_lag_factor = parse_real(key, value);
  else if (key == "hist_bins") cfg.hist_bins = static_cast<int>(parse_integer(key, value));
  else if (key == "noise_scale") cfg.noise_scale = parse_real(key, value);
  else if (key == "relationships") {
    cfg.relationships.clear();
    for (const std::string& item : detail::split_list(value))
      cfg.relationships.push_back(parse_relationship(item));
  } else if (key == "methods") {
    cfg.methods.clear();
    for (const std::string& item : detail::split_list(value))
      cfg.methods.push_back(parse_method(item));
  } else {
    throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
  }
}

/// Parses a flat `key = value` file; '#' starts a comment, blank lines are
/// skipped, unknown keys are errors.
inline ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path.string() + "'");
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    const std::size_t hash = sv.find('#');
    if (hash != std::string_view::npos) sv = sv.substr(0, hash);
    sv = detail::trim(sv);
    if (sv.empty()) continue;
    const std::size_t eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config: " + path.string() + ":" + std::to_string(line_no) +
                                  ": expected 'key = value'");
    try {
      set_config_key(cfg, detail::trim(sv.substr(0, eq)), detail::trim(sv.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

// --- experiment matrix ----------------------------------------------------

struct CellResult {
  Method method = Method::MST;
  std::vector<double> sim_x, sim_y;
  EmpiricalVariogram vario_x, vario_y;
  std::optional<double> shape_similarity;
  std::optional<double> r_gamma_x;
  std::optional<double> r_gamma_y;
  bool sinkhorn_converged = true;
  double marginal_error = 0.0;
  std::string error; // nonempty if the cell failed outright
};

struct RelationshipRun {
  RelationshipKind kind = RelationshipKind::Step;
  std::vector<double> orig_x, orig_y;
  EmpiricalVariogram vario_x, vario_y;
  std::vector<CellResult> cells;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RelationshipRun> runs;
  std::array<double, 3> seconds{}; // simulation wall clock per Method index
};

/// Win counts per metric; winner of a (relationship, metric) pair is the
/// method with the largest defined value, earlier method order breaking ties.
struct WinTally {
  std::array<int, 3> shape{};
  std::array<int, 3> variogram_x{};
  std::array<int, 3> variogram_y{};

  [[nodiscard]] std::array<int, 3> overall() const {
    std::array<int, 3> total{};
    for (std::size_t i = 0; i < 3; ++i)
      total[i] = shape[i] + variogram_x[i] + variogram_y[i];
    return total;
  }
};

inline WinTally tally_wins(const ExperimentReport& report) {
  WinTally tally;
  const auto accumulate = [&](std::array<int, 3>& counts, auto metric_of) {
    for (const RelationshipRun& run : report.runs) {
      int best = -1;
      double best_val = 0.0;
      for (const CellResult& cell : run.cells) {
        const std::optional<double> v = metric_of(cell);
        if (!v) continue;
        if (best < 0 || *v > best_val) {
          best = static_cast<int>(cell.method);
          best_val = *v;
        }
      }
      if (best >= 0) counts[static_cast<std::size_t>(best)] += 1;
    }
  };
  accumulate(tally.shape, [](const CellResult& c) { return c.shape_similarity; });
  accumulate(tally.variogram_x, [](const CellResult& c) { return c.r_gamma_x; });
  accumulate(tally.variogram_y, [](const CellResult& c) { return c.r_gamma_y; });
  return tally;
}

namespace detail {

inline std::pair<double, double> union_range(std::span<const double> a, std::span<const double> b) {
  double lo = a[0], hi = a[0];
  for (double v : a) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : b) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi + 1e-9};
}

} // namespace detail

/// Runs the (relationship x method) matrix. The same master stream feeds the
/// generator for every relationship, so all rows share one X realization and
/// one structured-noise field, and each method draws from one fixed-label
/// sub-stream shared across rows; its X-half simulation is therefore a single
/// realization, as the relationship only enters through Y. Stream derivation
/// is order-independent, so parallel and serial execution agree and the report
/// depends only on the config. Per-cell metric failures are recorded as
/// undefined instead of aborting the matrix.
inline ExperimentReport run_experiments(const ExperimentConfig& config) {
  config.validate();
  const Grid2D grid(config.nx, config.ny);
  const Rng master(config.seed);
  const double max_lag = config.max_lag();

  ExperimentReport report;
  report.config = config;

  for (RelationshipKind kind : config.relationships) {
    auto [x, y] = generate_pair(grid, config.model_x, config.model_y,
                                Relationship(kind, config.noise_scale), master);

    RelationshipRun run;
    run.kind = kind;
    run.vario_x = empirical_variogram(x, config.n_lags, max_lag);
    run.vario_y = empirical_variogram(y, config.n_lags, max_lag);

    for (Method method : config.methods) {
      const Rng cell_rng = master.derive(method_id(method));
      CellResult cell;
      cell.method = method;

      const auto t0 = std::chrono::steady_clock::now();
      try {
        switch (method) {
          case Method::MST: {
            MstResult r = mst_direct(x, y, grid, config.sinkhorn, cell_rng);
            cell.sim_x = std::move(r.x.values);
            cell.sim_y = std::move(r.y.values);
            cell.sinkhorn_converged = r.sinkhorn_converged;
            cell.marginal_error = r.marginal_error;
            break;
          }
          case Method::Copula: {
            auto [sx, sy] = gaussian_copula_sim(x, y, grid, config.model_x, config.model_y, cell_rng);
            cell.sim_x = std::move(sx.values);
            cell.sim_y = std::move(sy.values);
            break;
          }
          case Method::LU: {
            auto [sx, sy] = lu_joint_sim(x, y, grid, config.model_x, config.model_y, cell_rng);
            cell.sim_x = std::move(sx.values);
            cell.sim_y = std::move(sy.values);
            break;
          }
        }
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      const auto t1 = std::chrono::steady_clock::now();
      report.seconds[static_cast<std::size_t>(method)] +=
          std::chrono::duration<double>(t1 - t0).count();

      if (cell.error.empty()) {
        try {
          const auto range_x = detail::union_range(x.values, cell.sim_x);
          const auto range_y = detail::union_range(y.values, cell.sim_y);
          const Histogram2D h_orig =
              histogram2d(x.values, y.values, config.hist_bins, range_x, range_y);
          const Histogram2D h_sim =
              histogram2d(cell.sim_x, cell.sim_y, config.hist_bins, range_x, range_y);
          cell.shape_similarity = shape_similarity(h_orig, h_sim);
        } catch (const std::exception&) {
          cell.shape_similarity = std::nullopt;
        }

        cell.vario_x = empirical_variogram(cell.sim_x, grid, config.n_lags, max_lag);
        cell.vario_y = empirical_variogram(cell.sim_y, grid, config.n_lags, max_lag);
        try {
          cell.r_gamma_x = variogram_correlation(run.vario_x, cell.vario_x);
        } catch (const metric_undefined&) {
          cell.r_gamma_x = std::nullopt;
        }
        try {
          cell.r_gamma_y = variogram_correlation(run.vario_y, cell.vario_y);
        } catch (const metric_undefined&) {
          cell.r_gamma_y = std::nullopt;
        }
      }
      run.cells.push_back(std::move(cell));
    }

    run.orig_x = std::move(x.values);
    run.orig_y = std::move(y.values);
    report.runs.push_back(std::move(run));
  }
  return report;
}

// --- output files ---------------------------------------------------------

namespace detail {

inline std::string format_fixed3(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

/// Shortest round-trip decimal representation; locale independent.
inline std::string format_full(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path.string() + "'");
  return out;
}

inline void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file '" + path.string() + "'");
}

inline void write_metric_csv(const ExperimentReport& report, const std::filesystem::path& path,
                             std::optional<double> CellResult::*metric) {
  auto out = open_output(path);
  out << "relationship";
  for (Method m : report.config.methods) out << ',' << method_id(m);
  out << '\n';
  for (const RelationshipRun& run : report.runs) {
    out << relationship_id(run.kind);
    for (const CellResult& cell : run.cells) out << ',' << format_fixed3(cell.*metric);
    out << '\n';
  }
  finish_output(out, path);
}

inline nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["nx"] = cfg.nx;
  j["ny"] = cfg.ny;
  j["seed"] = cfg.seed;
  j["model_x"] = {{"kind", detail::variogram_kind_id(cfg.model_x.kind)},
                  {"sill", cfg.model_x.sill},
                  {"range", cfg.model_x.range}};
  j["model_y"] = {{"kind", detail::variogram_kind_id(cfg.model_y.kind)},
                  {"sill", cfg.model_y.sill},
                  {"range", cfg.model_y.range}};
  j["k"] = cfg.sinkhorn.k;
  j["beta"] = cfg.sinkhorn.beta;
  j["lambda"] = cfg.sinkhorn.lambda;
  j["max_outer"] = cfg.sinkhorn.max_outer;
  j["max_sinkhorn"] = cfg.sinkhorn.max_sinkhorn;
  j["tol_marginal"] = cfg.sinkhorn.tol_marginal;
  j["n_lags"] = cfg.n_lags;
  j["max_lag_factor"] = cfg.max_lag_factor;
  j["hist_bins"] = cfg.hist_bins;
  j["noise_scale"] = cfg.noise_scale;
  auto rels = nlohmann::ordered_json::array();
  for (RelationshipKind k : cfg.relationships) rels.push_back(relationship_id(k));
  j["relationships"] = std::move(rels);
  auto methods = nlohmann::ordered_json::array();
  for (Method m : cfg.methods) methods.push_back(method_id(m));
  j["methods"] = std::move(methods);
  return j;
}

} // namespace detail

/// Writes shape.csv, variogram_x.csv, variogram_y.csv, summary.csv (3 decimal
/// places) and report.json (full precision, stable key order). Timing is kept
/// out of the files so reruns of the same config are byte-identical.
inline void emit_tables(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  detail::write_metric_csv(report, dir / "shape.csv", &CellResult::shape_similarity);
  detail::write_metric_csv(report, dir / "variogram_x.csv", &CellResult::r_gamma_x);
  detail::write_metric_csv(report, dir / "variogram_y.csv", &CellResult::r_gamma_y);

  const WinTally wins = tally_wins(report);
  {
    const auto path = dir / "summary.csv";
    auto out = detail::open_output(path);
    out << "metric";
    for (Method m : report.config.methods) out << ',' << method_id(m);
    out << '\n';
    const auto row = [&](std::string_view name, const std::array<int, 3>& counts) {
      out << name;
      for (Method m : report.config.methods) out << ',' << counts[static_cast<std::size_t>(m)];
      out << '\n';
    };
    row("shape", wins.shape);
    row("variogram_x", wins.variogram_x);
    row("variogram_y", wins.variogram_y);
    row("overall", wins.overall());
    detail::finish_output(out, path);
  }

  {
    nlohmann::ordered_json j;
    j["config"] = detail::config_json(report.config);
    auto results = nlohmann::ordered_json::array();
    for (const RelationshipRun& run : report.runs) {
      for (const CellResult& cell : run.cells) {
        nlohmann::ordered_json r;
        r["relationship"] = relationship_id(run.kind);
        r["method"] = method_id(cell.method);
        r["shape_similarity"] =
            cell.shape_similarity ? nlohmann::ordered_json(*cell.shape_similarity) : nullptr;
        r["r_gamma_x"] = cell.r_gamma_x ? nlohmann::ordered_json(*cell.r_gamma_x) : nullptr;
        r["r_gamma_y"] = cell.r_gamma_y ? nlohmann::ordered_json(*cell.r_gamma_y) : nullptr;
        r["sinkhorn_converged"] = cell.sinkhorn_converged;
        r["marginal_error"] = cell.marginal_error;
        if (!cell.error.empty()) r["error"] = cell.error;
        results.push_back(std::move(r));
      }
    }
    j["results"] = std::move(results);
    const WinTally tally = tally_wins(report);
    nlohmann::ordered_json wins_json;
    const auto wins_row = [&](const std::array<int, 3>& counts) {
      nlohmann::ordered_json w;
      for (Method m : report.config.methods)
        w[std::string(method_id(m))] = counts[static_cast<std::size_t>(m)];
      return w;
    };
    wins_json["shape"] = wins_row(tally.shape);
    wins_json["variogram_x"] = wins_row(tally.variogram_x);
    wins_json["variogram_y"] = wins_row(tally.variogram_y);
    wins_json["overall"] = wins_row(tally.overall());
    j["wins"] = std::move(wins_json);

    const auto path = dir / "report.json";
    auto out = detail::open_output(path);
    out << j.dump(2) << '\n';
    detail::finish_output(out, path);
  }
}

/// Writes per-cell scatter files and per-relationship variogram curve files:
/// scatter_<rel>_original.csv, scatter_<rel>_<method>.csv (columns x,y) and
/// variogram_<rel>_<var>.csv (columns lag, original, theoretical, then one per
/// method; lags whose bin was empty print as nan).
inline void emit_plotdata(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const double max_lag = report.config.max_lag();
  const double width = max_lag / report.config.n_lags;

  const auto write_scatter = [&](const std::filesystem::path& path,
                                 std::span<const double> xs, std::span<const double> ys) {
    auto out = detail::open_output(path);
    out << "x,y\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
      out << detail::format_full(xs[i]) << ',' << detail::format_full(ys[i]) << '\n';
    detail::finish_output(out, path);
  };

  // value of an empirical variogram at a configured lag center, if nonempty
  const auto lookup = [](const EmpiricalVariogram& v, double center) -> std::optional<double> {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v.lag_centers[i] == center) return v.semivariances[i];
    return std::nullopt;
  };

  for (const RelationshipRun& run : report.runs) {
    const std::string rel(relationship_id(run.kind));
    write_scatter(dir / ("scatter_" + rel + "_original.csv"), run.orig_x, run.orig_y);
    for (const CellResult& cell : run.cells) {
      if (!cell.error.empty()) continue;
      write_scatter(dir / ("scatter_" + rel + "_" + std::string(method_id(cell.method)) + ".csv"),
                    cell.sim_x, cell.sim_y);
    }

    for (int var = 0; var < 2; ++var) {
      const bool is_x = var == 0;
      const VariogramModel& model = is_x ? report.config.model_x : report.config.model_y;
      const EmpiricalVariogram& orig = is_x ? run.vario_x : run.vario_y;
      const auto path = dir / ("variogram_" + rel + (is_x ? "_x.csv" : "_y.csv"));
      auto out = detail::open_output(path);
      out << "lag,original,theoretical";
      for (const CellResult& cell : run.cells)
        if (cell.error.empty()) out << ',' << method_id(cell.method);
      out << '\n';
      for (int b = 0; b < report.config.n_lags; ++b) {
        const double center = (b + 0.5) * width;
        out << detail::format_full(center);
        const auto ov = lookup(orig, center);
        out << ',' << (ov ? detail::format_full(*ov) : "nan");
        out << ',' << detail::format_full(evaluate(model, center));
        for (const CellResult& cell : run.cells) {
          if (!cell.error.empty()) continue;
          const auto sv = lookup(is_x ? cell.vario_x : cell.vario_y, center);
          out << ',' << (sv ? detail::format_full(*sv) : "nan");
        }
        out << '\n';
      }
      detail::finish_output(out, path);
    }
  }
}

} // namespace geosim
