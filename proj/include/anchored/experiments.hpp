#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "anchored/decomposition.hpp"
#include "anchored/geometry.hpp"
#include "anchored/kernels.hpp"
#include "anchored/pde.hpp"
#include "anchored/regression.hpp"
#include "anchored/weights.hpp"

namespace anchored {

struct KernelConfig {
  enum class Kind { anchored_h1, pinned_brownian, pinned_matern };
  Kind kind = Kind::anchored_h1;
  double nu = 2.5;
  double lengthscale = 1.0;
};

/// Per-coordinate factors from the kernel config; gamma weights from the
/// scheme, aligned with the family.
LambdaKernel build_lambda_kernel(const KernelConfig& config,
                                 const DownwardClosedFamily& family,
                                 const WeightScheme& gamma_scheme, const Box& box,
                                 const Anchor& anchor);

/// Uniform per-block point lists: m points per axis of every non-empty block,
/// the single empty point for u = {}.
std::map<std::uint64_t, std::vector<Point>> uniform_blocks(const DownwardClosedFamily& family,
                                                           const Box& box, int m);

/// Clenshaw-Curtis sparse-grid blocks with total level q_u = #u + q_offset,
/// mapped affinely from [-1,1]^u onto [a_u,b_u].
std::map<std::uint64_t, std::vector<Point>> sparse_blocks(const DownwardClosedFamily& family,
                                                          const Box& box, int q_offset);

struct TestGridSpec {
  int mc_points = 16384;
  std::uint64_t seed = 1;
  int tensor_m = 0;  // > 0 selects a tensor grid (dimension <= 4)
};

std::vector<Point> test_grid_points(const TestGridSpec& spec, const Box& box);

/// Evaluates the black box at each point (parallel, deterministic order).
std::vector<double> sample_function(const BlackBoxFunction& f, const std::vector<Point>& points);

struct ErrorPair {
  double l2 = 0.0;    // sqrt(mean squared difference) over the test grid
  double linf = 0.0;  // max absolute difference
};

ErrorPair error_norms(const std::vector<double>& approx, const std::vector<double>& truth);

struct PointLadder {
  enum class Scheme { uniform, sparse };
  Scheme scheme = Scheme::uniform;
  std::vector<int> steps;  // m per rung (uniform) or q offsets (sparse)
};

struct ExperimentConfig {
  BlackBoxFunction function;
  Box box;
  Anchor anchor;
  DownwardClosedFamily family;
  KernelConfig kernel;
  WeightScheme gamma_scheme = WeightScheme::constant(1.0);
  PointLadder ladder;
  LambdaRule lambda_rule;  // sobolev_h with h <= 0 pulls h from the rung's fill
  TestGridSpec test_grid;
  /// uniform rungs use the block-weighted fit, sparse rungs the plain one.
};

struct RateRow {
  int step = 0;
  long long n_points = 0;
  double fill = 0.0;
  double lambda = 0.0;
  double err_l2 = 0.0;
  double err_linf = 0.0;
  double wall_ms = 0.0;  // reported in summaries, never in CSV output
};

struct RateFitResult {
  double slope = 0.0;
  bool defined = false;
  int rows_used = 0;
  bool plateau = false;
  double plateau_level = 0.0;
};

/// Least-squares slope of log(err) against log(scale) (versus_h) or
/// -log(scale) (versus N). Rows from the first plateaued rung on (error
/// exceeding 0.5x its predecessor) are excluded.
RateFitResult fit_rate(const std::vector<double>& scale, const std::vector<double>& err,
                       bool versus_h);

struct RateReport {
  std::vector<RateRow> rows;
  RateFitResult rate;
  long long evaluations = 0;
};

RateReport run_convergence(const ExperimentConfig& config);

struct PdePipelineConfig {
  DiffusionProblem problem;
  QoiSpec qoi;
  int mesh = 100;
  double c = 0.6;          // weight exponent c in (1/2,1]
  double tolerance = 1e-3; // select_order target on the 2^(#u/2) tail
  int forced_order = -1;   // >= 0 skips select_order
  int q_offset = 2;        // sparse level q_u = #u + q_offset
  KernelConfig kernel;
  double fixed_lambda = 1e-8;   // used when use_mixed_rule is false
  bool use_mixed_rule = false;  // mixed-regularity lambda rule with this sigma
  double sigma = 2.0;
  TestGridSpec test_grid;
};

struct PdePipelineReport {
  EpsilonReport eps;
  int order = 0;
  bool order_met = true;
  double tail = 0.0;
  long long n_points = 0;
  double lambda = 0.0;
  double err_l2 = 0.0;
  double err_linf = 0.0;
  /// Predicted bound on ||u_G - u_{G,Lambda}||, up to the embedding constant.
  double predicted_truncation = 0.0;
  long long evaluations = 0;
};

/// Feasibility-checked end-to-end pipeline: weights from the psi ratios,
/// order selection, sparse-grid sampling of u_G, plain fit, test error.
PdePipelineReport run_pde_pipeline(const PdePipelineConfig& config);

}  // namespace anchored
