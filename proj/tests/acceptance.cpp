// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one [PASS]/[FAIL] line per criterion.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geosim/geosim.hpp"

using namespace geosim;
namespace fs = std::filesystem;

namespace {

void criterion_line(int num, const char* desc, bool ok) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", num, desc);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Default-config matrix shared by the result-table criteria.
const ExperimentReport& default_report() {
  static const ExperimentReport report = run_experiments(ExperimentConfig{});
  return report;
}

const CellResult& cell_of(const RelationshipRun& run, Method m) {
  for (const CellResult& cell : run.cells)
    if (cell.method == m) return cell;
  throw std::logic_error("method missing from run");
}

double metric_or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("criterion 1: permutation exactness and exact shape scores") {
  const ExperimentReport& report = default_report();
  bool ok = report.runs.size() == 5;
  for (const RelationshipRun& run : report.runs) {
    const CellResult& mst = cell_of(run, Method::MST);
    std::vector<std::pair<double, double>> in, out;
    for (std::size_t i = 0; i < run.orig_x.size(); ++i) {
      in.emplace_back(run.orig_x[i], run.orig_y[i]);
      out.emplace_back(mst.sim_x[i], mst.sim_y[i]);
    }
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    const bool multiset_exact = in == out;
    const bool shape_exact = mst.shape_similarity && *mst.shape_similarity == 1.0;
    if (!multiset_exact || !shape_exact)
      std::printf("  %s: multiset_exact=%d shape=%.17g\n",
                  std::string(relationship_id(run.kind)).c_str(), multiset_exact,
                  metric_or_nan(mst.shape_similarity));
    ok = ok && multiset_exact && shape_exact;
  }
  const bool runtime_ok = report.seconds[static_cast<int>(Method::MST)] < 5.0;
  if (!runtime_ok)
    std::printf("  mst runtime %.2fs\n", report.seconds[static_cast<int>(Method::MST)]);
  ok = ok && runtime_ok;
  criterion_line(1, "mst outputs are exact permutations, shape similarity 1.0, < 5 s total", ok);
  CHECK(ok);
}

TEST_CASE("criterion 2: baseline shape degradation and ordering") {
  const ExperimentReport& report = default_report();
  bool ok = true;
  for (const RelationshipRun& run : report.runs) {
    const double mst = metric_or_nan(cell_of(run, Method::MST).shape_similarity);
    const double cop = metric_or_nan(cell_of(run, Method::Copula).shape_similarity);
    const double lu = metric_or_nan(cell_of(run, Method::LU).shape_similarity);
    bool row_ok = mst > cop && mst > lu;
    if (run.kind == RelationshipKind::GaussianMix || run.kind == RelationshipKind::StepRandom)
      row_ok = row_ok && cop <= 0.65 && lu <= 0.65;
    if (!row_ok)
      std::printf("  %s: mst=%.3f copula=%.3f lu=%.3f\n",
                  std::string(relationship_id(run.kind)).c_str(), mst, cop, lu);
    ok = ok && row_ok;
  }
  criterion_line(2, "copula/lu <= 0.65 on gaussian_mix and step_random; mst beats both on all five",
                 ok);
  CHECK(ok);
}

TEST_CASE("criterion 3: variogram X quality bands") {
  const ExperimentReport& report = default_report();
  bool mst_ok = true;
  bool lu_ok = true;
  for (const RelationshipRun& run : report.runs) {
    const double mst = metric_or_nan(cell_of(run, Method::MST).r_gamma_x);
    const double lu = metric_or_nan(cell_of(run, Method::LU).r_gamma_x);
    mst_ok = mst_ok && mst >= 0.95;
    lu_ok = lu_ok && lu >= 0.95;
    std::printf("  %-16s mst r_x=%.4f  lu r_x=%.4f\n",
                std::string(relationship_id(run.kind)).c_str(), mst, lu);
  }
  const bool ok = mst_ok && lu_ok;
  criterion_line(3, "variogram X correlation >= 0.95 for mst (all five) and lu", ok);
  CHECK(ok);
}

TEST_CASE("criterion 4: variogram Y ordering") {
  const ExperimentReport& report = default_report();
  int wins = 0;
  for (const RelationshipRun& run : report.runs) {
    const double mst = metric_or_nan(cell_of(run, Method::MST).r_gamma_y);
    const double cop = metric_or_nan(cell_of(run, Method::Copula).r_gamma_y);
    const double lu = metric_or_nan(cell_of(run, Method::LU).r_gamma_y);
    bool row_win = mst > cop && mst > lu;
    if (!row_win && run.kind == RelationshipKind::StepRandom)
      row_win = mst < 0.6 && cop < 0.6 && lu < 0.6; // all-degraded row accepted
    wins += row_win ? 1 : 0;
  }
  const bool ok = wins >= 4;
  if (!ok) std::printf("  mst variogram-Y wins: %d/5\n", wins);
  criterion_line(4, "mst variogram Y beats both baselines on at least 4 of 5 relationships", ok);
  CHECK(ok);
}

TEST_CASE("criterion 5: coupling marginals within 1e-6") {
  const ExperimentReport& report = default_report();
  bool ok = true;
  for (const RelationshipRun& run : report.runs) {
    const CellResult& mst = cell_of(run, Method::MST);
    if (mst.marginal_error > 1e-6 || !mst.sinkhorn_converged) {
      std::printf("  %s: marginal_error=%.3g converged=%d\n",
                  std::string(relationship_id(run.kind)).c_str(), mst.marginal_error,
                  mst.sinkhorn_converged);
      ok = false;
    }
  }
  criterion_line(5, "every coupling in the default matrix has row/col sums within 1e-6 of 1/n", ok);
  CHECK(ok);
}

TEST_CASE("criterion 6: small-instance assignment oracle") {
  const auto t0 = std::chrono::steady_clock::now();
  const Rng master(2024);
  bool ok = true;

  for (int inst = 0; inst < 50; ++inst) {
    Rng rng = master.derive("oracle/" + std::to_string(inst));
    const int n = 4 + inst % 5; // n in 4..8
    Matrix v(n, 2), u(n, 2);
    for (Matrix* m : {&v, &u})
      for (int i = 0; i < n; ++i) {
        const double a = rng.normal(), b = rng.normal();
        const double norm = std::hypot(a, b);
        (*m)(i, 0) = a / norm;
        (*m)(i, 1) = b / norm;
      }
    std::vector<Point2> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) p = {rng.uniform(), rng.uniform()};

    SinkhornParams params;
    params.beta = 200.0;
    params.lambda = 0.0;
    params.k = 2;
    params.max_sinkhorn = 2000;
    params.tol_marginal = 1e-9;
    const Permutation pi =
        greedy_round(relational_match(v, u, knn_adjacency(pts, params.k), params));

    const auto total = [&](const std::vector<int>& p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const int j = p[static_cast<std::size_t>(i)];
        s += v(i, 0) * u(j, 0) + v(i, 1) * u(j, 1);
      }
      return s;
    };
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do best = std::max(best, total(perm));
    while (std::next_permutation(perm.begin(), perm.end()));

    const double got = total(pi);
    if (!(got >= best - 0.01 * std::abs(best))) {
      std::printf("  instance %d (n=%d): greedy %.6f vs optimal %.6f\n", inst, n, got, best);
      ok = false;
    }
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 10.0) std::printf("  oracle sweep took %.2fs\n", elapsed);
  ok = ok && elapsed < 10.0;
  criterion_line(6,
                 "greedy-rounded transport within 1% of brute-force optimum, 50 instances, < 10 s",
                 ok);
  CHECK(ok);
}

TEST_CASE("criterion 7: generator fidelity against theory") {
  const Grid2D grid(25, 25);
  bool ok = true;
  const auto check_model = [&](const VariogramModel& model, const char* name) {
    const Field f = fftma_field(grid, model, Rng(42));
    const double max_lag = 1.5 * model.range;
    const auto ev = empirical_variogram(f, 15, max_lag);
    std::vector<double> theory;
    for (double c : ev.lag_centers) theory.push_back(evaluate(model, c));
    const double r = pearson(ev.semivariances, theory);
    std::printf("  %s: empirical-vs-theory r=%.4f over %zu lags\n", name, r, ev.size());
    ok = ok && r >= 0.95;
  };
  check_model(VariogramModel{VariogramKind::Spherical, 1.0, 12.0}, "spherical(1,12)");
  check_model(VariogramModel{VariogramKind::Exponential, 1.0, 6.0}, "exponential(1,6)");
  criterion_line(7, "seed-42 fields correlate with their theoretical variograms at r >= 0.95", ok);
  CHECK(ok);
}

TEST_CASE("criterion 8: byte-identical reruns") {
  const fs::path base = fs::temp_directory_path() / "geosim_acceptance";
  const fs::path dir_a = base / "run_a";
  const fs::path dir_b = base / "run_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  emit_tables(default_report(), dir_a);
  emit_plotdata(default_report(), dir_a);

  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentReport fresh = run_experiments(ExperimentConfig{});
  const double matrix_seconds = seconds_since(t0);
  emit_tables(fresh, dir_b);
  emit_plotdata(fresh, dir_b);

  bool ok = true;
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    ++files;
    const fs::path other = dir_b / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      std::printf("  mismatch: %s\n", entry.path().filename().string().c_str());
      ok = false;
    }
  }
  std::size_t files_b = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir_b)) ++files_b;
  ok = ok && files == files_b && files > 0;

  if (matrix_seconds >= 60.0) {
    std::printf("  default matrix took %.1fs\n", matrix_seconds);
    ok = false;
  }
  criterion_line(8, "two full default runs emit byte-identical files (matrix < 60 s)", ok);
  CHECK(ok);
}

TEST_CASE("criterion 9: closed-form variogram checks") {
  bool ok = true;
  for (double sill : {1.0, 2.5}) {
    const VariogramModel sph{VariogramKind::Spherical, sill, 12.0};
    ok = ok && std::abs(evaluate(sph, 6.0) - 0.6875 * sill) <= 1e-12;
    const VariogramModel exp_m{VariogramKind::Exponential, sill, 6.0};
    ok = ok && std::abs(evaluate(exp_m, 6.0) - (1.0 - std::exp(-3.0)) * sill) <= 1e-12;
  }
  criterion_line(9, "spherical(a/2) = 0.6875*sill and exponential(a) = (1-e^-3)*sill to 1e-12", ok);
  CHECK(ok);
}

TEST_CASE("criterion 10: single transport run under 5 s") {
  const ExperimentConfig cfg;
  const Grid2D grid(cfg.nx, cfg.ny);
  const Rng master(cfg.seed);
  const auto [x, y] = generate_pair(grid, cfg.model_x, cfg.model_y,
                                    {RelationshipKind::Step, cfg.noise_scale}, master);
  const auto t0 = std::chrono::steady_clock::now();
  const MstResult r = mst_direct(x, y, grid, cfg.sinkhorn, master.derive("mst"));
  const double elapsed = seconds_since(t0);
  const bool ok = elapsed < 5.0 && r.x.values.size() == 625;
  std::printf("  mst_direct at n=625: %.2fs\n", elapsed);
  criterion_line(10, "one mst_direct call at n=625 completes in under 5 s", ok);
  CHECK(ok);
}
