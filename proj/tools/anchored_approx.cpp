// anchored-approx: approximation of effectively low-dimensional functions by
// anchored decompositions and penalized kernel least squares, plus the
// parametric-PDE sampling pipeline. CSV in, CSV out; fixed column layouts.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "anchored/csv.hpp"
#include "anchored/decomposition.hpp"
#include "anchored/errors.hpp"
#include "anchored/experiments.hpp"
#include "anchored/geometry.hpp"
#include "anchored/index_sets.hpp"
#include "anchored/pde.hpp"
#include "anchored/registry.hpp"
#include "anchored/regression.hpp"
#include "anchored/rng.hpp"
#include "anchored/weights.hpp"

using namespace anchored;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out;

  int dim = 2;
  double box_lo = 0.0;
  double box_hi = 1.0;
  std::string anchor_text = "center";
  int family_order = 1;

  std::string kernel_kind = "anchored_h1";
  double nu = 2.5;
  double lengthscale = 1.0;

  std::string gamma_kind = "constant";
  double gamma_value = 1.0;
  double weight_c = 1.0;
  int weight_n = 0;
  int weight_m = 1;
  std::string alpha_text;

  std::string lambda_rule = "fixed";
  double lambda_value = 1e-6;
  double sigma = 3.0;
  double deff = 2.0;
  double f1 = 1.0, f2 = 1.0;

  int mc_points = 16384;
  int tensor_m = 0;

  json config;
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stod(token));
  }
  return out;
}

Box make_box(const CommonOptions& opt) { return Box::cube(opt.dim, opt.box_lo, opt.box_hi); }

Anchor make_anchor(const CommonOptions& opt, const Box& box) {
  Anchor anchor;
  if (opt.anchor_text == "center") {
    for (int j = 0; j < box.dim(); ++j) {
      anchor.c.push_back(0.5 * (box.lower[static_cast<std::size_t>(j)] +
                                box.upper[static_cast<std::size_t>(j)]));
    }
  } else {
    const auto values = parse_double_list(opt.anchor_text);
    if (values.size() == 1) {
      anchor.c.assign(static_cast<std::size_t>(box.dim()), values[0]);
    } else if (static_cast<int>(values.size()) == box.dim()) {
      anchor.c = values;
    } else {
      throw input_error("--anchor needs 'center', one value, or one value per dimension");
    }
  }
  validate_anchor(anchor, box);
  return anchor;
}

WeightScheme make_weight_scheme(const CommonOptions& opt) {
  if (opt.gamma_kind == "constant") return WeightScheme::constant(opt.gamma_value);
  if (opt.gamma_kind == "product") {
    std::vector<double> alpha;
    if (std::ifstream alpha_file(opt.alpha_text); alpha_file) {
      // One alpha_j per line (or comma-separated) from a file.
      std::string line;
      while (std::getline(alpha_file, line)) {
        for (double v : parse_double_list(line)) alpha.push_back(v);
      }
    } else {
      alpha = parse_double_list(opt.alpha_text);
    }
    if (alpha.empty()) {
      throw input_error("product weights need --alpha a1,a2,... or --alpha <file>");
    }
    if (static_cast<int>(alpha.size()) == 1 && opt.dim > 1) {
      alpha.assign(static_cast<std::size_t>(opt.dim), alpha[0]);
    }
    return WeightScheme::product_order_dependent(opt.weight_c, opt.weight_n, opt.weight_m,
                                                 std::move(alpha));
  }
  throw input_error("unknown gamma scheme '" + opt.gamma_kind + "'");
}

KernelConfig make_kernel_config(const CommonOptions& opt) {
  KernelConfig config;
  if (opt.kernel_kind == "anchored_h1") {
    config.kind = KernelConfig::Kind::anchored_h1;
  } else if (opt.kernel_kind == "pinned_brownian") {
    config.kind = KernelConfig::Kind::pinned_brownian;
  } else if (opt.kernel_kind == "pinned_matern") {
    config.kind = KernelConfig::Kind::pinned_matern;
  } else {
    throw input_error("unknown kernel kind '" + opt.kernel_kind + "'");
  }
  config.nu = opt.nu;
  config.lengthscale = opt.lengthscale;
  return config;
}

LambdaRule make_lambda_rule(const CommonOptions& opt) {
  LambdaRule rule;
  if (opt.lambda_rule == "fixed") {
    rule.kind = LambdaRule::Kind::fixed;
    rule.fixed_lambda = opt.lambda_value;
  } else if (opt.lambda_rule == "sobolev") {
    rule.kind = LambdaRule::Kind::sobolev_h;
    rule.sigma = opt.sigma;
    rule.dim = opt.deff;
    rule.h = 0.0;  // filled from the sampling set
  } else if (opt.lambda_rule == "mixed") {
    rule.kind = LambdaRule::Kind::mixed_logN;
    rule.sigma = opt.sigma;
    rule.n_points = 0.0;  // filled from the sampling set
  } else if (opt.lambda_rule == "ratio") {
    rule.kind = LambdaRule::Kind::ratio_f1_f2;
    rule.f1 = opt.f1;
    rule.f2 = opt.f2;
  } else {
    throw input_error("unknown lambda rule '" + opt.lambda_rule + "'");
  }
  return rule;
}

void apply_config(CommonOptions& opt) {
  if (opt.config_path.empty()) return;
  std::ifstream in(opt.config_path);
  if (!in) throw input_error("cannot open config file '" + opt.config_path + "'");
  try {
    in >> opt.config;
  } catch (const std::exception& e) {
    throw input_error("config parse error: " + std::string(e.what()));
  }
  const json& c = opt.config;
  if (c.contains("dim")) opt.dim = c["dim"].get<int>();
  if (c.contains("seed")) opt.seed = c["seed"].get<std::uint64_t>();
  if (c.contains("box")) {
    opt.box_lo = c["box"].value("lower", opt.box_lo);
    opt.box_hi = c["box"].value("upper", opt.box_hi);
  }
  if (c.contains("anchor")) {
    if (c["anchor"].is_string()) {
      opt.anchor_text = c["anchor"].get<std::string>();
    } else {
      opt.anchor_text = "";
      for (const auto& v : c["anchor"]) {
        if (!opt.anchor_text.empty()) opt.anchor_text += ",";
        opt.anchor_text += format_double(v.get<double>());
      }
    }
  }
  if (c.contains("family")) opt.family_order = c["family"].value("order", opt.family_order);
  if (c.contains("kernel")) {
    opt.kernel_kind = c["kernel"].value("kind", opt.kernel_kind);
    opt.nu = c["kernel"].value("nu", opt.nu);
    opt.lengthscale = c["kernel"].value("lengthscale", opt.lengthscale);
  }
  if (c.contains("gamma")) {
    opt.gamma_kind = c["gamma"].value("kind", opt.gamma_kind);
    opt.gamma_value = c["gamma"].value("value", opt.gamma_value);
    opt.weight_c = c["gamma"].value("c", opt.weight_c);
    opt.weight_n = c["gamma"].value("n", opt.weight_n);
    opt.weight_m = c["gamma"].value("m", opt.weight_m);
    if (c["gamma"].contains("alpha")) {
      opt.alpha_text = "";
      for (const auto& v : c["gamma"]["alpha"]) {
        if (!opt.alpha_text.empty()) opt.alpha_text += ",";
        opt.alpha_text += format_double(v.get<double>());
      }
    }
  }
  if (c.contains("lambda")) {
    opt.lambda_rule = c["lambda"].value("rule", opt.lambda_rule);
    opt.lambda_value = c["lambda"].value("value", opt.lambda_value);
    opt.sigma = c["lambda"].value("sigma", opt.sigma);
    opt.deff = c["lambda"].value("dim", opt.deff);
    opt.f1 = c["lambda"].value("f1", opt.f1);
    opt.f2 = c["lambda"].value("f2", opt.f2);
  }
  if (c.contains("test_grid")) {
    opt.mc_points = c["test_grid"].value("mc", opt.mc_points);
    opt.tensor_m = c["test_grid"].value("tensor_m", opt.tensor_m);
    opt.seed = c["test_grid"].value("seed", opt.seed);
  }
}

/// Fills PDE parameters from the config's "pde" block when present.
void apply_pde_config(const CommonOptions& opt, int& d, double& beta, double& theta,
                      int& mesh) {
  if (!opt.config.contains("pde")) return;
  const json& p = opt.config["pde"];
  d = p.value("d", d);
  beta = p.value("beta", beta);
  theta = p.value("theta", theta);
  mesh = p.value("mesh", mesh);
}

/// Writes to the --out path, or stdout when none was given.
void deliver(const CommonOptions& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(opt.out, std::ios::binary);
  if (!os) throw input_error("cannot open output file '" + opt.out + "'");
  os << text;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_points(const CommonOptions& opt, const std::string& scheme, int m, int q) {
  const Box box = make_box(opt);
  const Anchor anchor = make_anchor(opt, box);
  const auto family = order_family(opt.dim, opt.family_order);

  std::map<std::uint64_t, std::vector<Point>> blocks;
  if (scheme == "uniform") {
    blocks = uniform_blocks(family, box, m);
  } else if (scheme == "sparse") {
    blocks = sparse_blocks(family, box, q);
  } else {
    throw input_error("--scheme must be uniform or sparse");
  }
  const auto set = assemble_sampling_set(family, blocks, anchor, box);

  std::ostringstream os;
  write_points_csv(os, set);
  deliver(opt, os.str());
  std::cerr << "points: " << set.total_points() << " rows, fill distance "
            << format_double(set.fill())
            << (set.has_cross_block_duplicates ? ", cross-block duplicates present" : "")
            << "\n";
  return kExitOk;
}

int cmd_decompose(const CommonOptions& opt, const std::string& function, int samples) {
  const Box box = make_box(opt);
  const Anchor anchor = make_anchor(opt, box);
  const auto family = order_family(opt.dim, opt.family_order);
  const auto f = make_registry_function(function, opt.dim, box);

  Rng rng(opt.seed);
  std::ostringstream os;
  os << "block,mc_l2_norm\n";
  for (const auto& u : family.members) {
    double vol = 1.0;
    for (int j : u.indices()) {
      vol *= box.upper[static_cast<std::size_t>(j - 1)] -
             box.lower[static_cast<std::size_t>(j - 1)];
    }
    double mean_sq = 0.0;
    for (int s = 0; s < samples; ++s) {
      Point x_u;
      for (int j : u.indices()) {
        x_u.push_back(rng.uniform(box.lower[static_cast<std::size_t>(j - 1)],
                                  box.upper[static_cast<std::size_t>(j - 1)]));
      }
      const double v = anchored_component(f, u, anchor, x_u);
      mean_sq += v * v;
    }
    mean_sq /= static_cast<double>(samples);
    os << "\"" << u.to_string() << "\"," << format_double(std::sqrt(vol * mean_sq)) << "\n";
  }
  deliver(opt, os.str());
  std::cerr << "decompose: " << f.evaluations() << " black-box evaluations\n";
  return kExitOk;
}

int cmd_weights(const CommonOptions& opt, int order, double tolerance) {
  const auto scheme = make_weight_scheme(opt);
  if (opt.dim > kMaxEnumerationDim && scheme.kind == WeightScheme::Kind::constant) {
    throw capability_error("exact tail enumeration needs d <= " +
                           std::to_string(kMaxEnumerationDim) +
                           " and constant weights have no closed-form bound");
  }
  std::ostringstream os;
  os << "key,value\n";

  if (scheme.kind == WeightScheme::Kind::product_order_dependent) {
    os << "rho," << format_double(rho(scheme.c)) << "\n";
    const auto bound = tail_sum_bound(scheme, order);
    os << "alpha_sum," << format_double(bound.alpha_sum) << "\n";
    os << "alpha_sum_limit," << format_double(bound.alpha_sum_limit) << "\n";
    os << "condalpha_feasible," << (bound.feasible ? 1 : 0) << "\n";
    os << "geometric_base," << format_double(bound.geometric_base) << "\n";
    if (bound.feasible) {
      os << "tail_bound_L" << order << "," << format_double(bound.value) << "\n";
    }
    const auto eps_report = epsilon(scheme.c, scheme.alpha);
    os << "epsilon," << format_double(eps_report.value) << "\n";
    os << "epsilon_in_unit_interval," << (eps_report.in_unit_interval ? 1 : 0) << "\n";
    os << "condpsi_max_ok," << (eps_report.max_ratio_ok ? 1 : 0) << "\n";
    os << "condpsi_sum_ok," << (eps_report.sum_ok ? 1 : 0) << "\n";
  }

  if (opt.dim <= kMaxEnumerationDim) {
    const auto family = order_family(opt.dim, std::min(order, opt.dim));
    os << "tail_exact_e_half," << format_double(tail_sum_exact(scheme, family, 0.5)) << "\n";
    os << "tail_exact_e_one," << format_double(tail_sum_exact(scheme, family, 1.0)) << "\n";
  }
  if (tolerance > 0.0) {
    const auto sel = select_order(scheme, opt.dim, tolerance, 1.0);
    os << "selected_order," << sel.order << "\n";
    os << "selected_met," << (sel.met ? 1 : 0) << "\n";
    os << "selected_tail," << format_double(sel.tail) << "\n";
  }
  // Per-member gamma table for small dimensions.
  if (opt.dim <= 10) {
    for (const auto& u : order_family(opt.dim, std::min(order, opt.dim)).members) {
      os << "gamma" << u.to_string() << "," << format_double(gamma_weight(scheme, u))
         << "\n";
    }
  }
  deliver(opt, os.str());
  return kExitOk;
}

int cmd_fit(const CommonOptions& opt, const std::string& function,
            const std::string& points_path, bool force_plain) {
  const Box box = make_box(opt);
  const Anchor anchor = make_anchor(opt, box);

  std::ifstream pf(points_path);
  if (!pf) throw input_error("cannot open points csv '" + points_path + "'");
  const auto points_csv = read_points_csv(pf);
  if (points_csv.dim != opt.dim) {
    throw input_error("points csv dimension " + std::to_string(points_csv.dim) +
                      " does not match --dim " + std::to_string(opt.dim));
  }
  const auto sampling = sampling_set_from_csv(points_csv, anchor, box);

  std::vector<Point> X;
  std::vector<int> block_sizes;
  sampling.flatten(X, block_sizes);

  std::vector<double> y;
  std::ifstream maybe_file(function);
  if (maybe_file) {
    const auto samples = read_samples_csv(maybe_file);
    if (!samples.has_values || samples.points.size() != X.size()) {
      throw input_error("sample csv must carry one value per sampling point");
    }
    y = samples.values;
  } else {
    const auto f = make_registry_function(function, opt.dim, box);
    y = sample_function(f, X);
  }

  LambdaRule rule = make_lambda_rule(opt);
  if (rule.kind == LambdaRule::Kind::sobolev_h && !(rule.h > 0.0)) rule.h = sampling.fill();
  if (rule.kind == LambdaRule::Kind::mixed_logN && !(rule.n_points > 0.0)) {
    rule.n_points = static_cast<double>(X.size());
    rule.order = sampling.family.max_order();
  }
  const double lambda = select_lambda(rule);

  const auto kernel = build_lambda_kernel(make_kernel_config(opt), sampling.family,
                                          make_weight_scheme(opt), box, anchor);
  const RegressionModel model = force_plain ? fit_plain(kernel, X, y, lambda)
                                            : fit_weighted(kernel, sampling, y, lambda);

  std::vector<std::string> block_labels;
  for (std::size_t b = 0; b < sampling.blocks.size(); ++b) {
    for (std::size_t i = 0; i < sampling.blocks[b].size(); ++i) {
      block_labels.push_back(sampling.family.members[b].to_string());
    }
  }
  std::vector<double> alpha(model.alpha().data(), model.alpha().data() + model.alpha().size());

  std::ostringstream os;
  write_model_csv(os, block_labels, X, alpha);
  deliver(opt, os.str());
  std::cerr << "fit: N=" << X.size() << " lambda=" << format_double(lambda)
            << " residual=" << format_double(model.diagnostics().solve_residual)
            << " objective=" << format_double(model.diagnostics().objective_value) << "\n";
  return kExitOk;
}

int cmd_predict(const CommonOptions& opt, const std::string& model_path,
                const std::string& eval_path) {
  const Box box = make_box(opt);
  const Anchor anchor = make_anchor(opt, box);

  std::ifstream mf(model_path);
  if (!mf) throw input_error("cannot open model csv '" + model_path + "'");
  const auto model_csv = read_model_csv(mf);
  if (model_csv.dim != opt.dim) {
    throw input_error("model csv dimension does not match --dim");
  }

  std::vector<SubsetMask> masks;
  for (const auto& label : model_csv.blocks) masks.push_back(parse_subset(label, opt.dim));
  const auto family = make_family(opt.dim, masks);

  const auto kernel = build_lambda_kernel(make_kernel_config(opt), family,
                                          make_weight_scheme(opt), box, anchor);
  Eigen::VectorXd alpha =
      Eigen::Map<const Eigen::VectorXd>(model_csv.alpha.data(),
                                        static_cast<Eigen::Index>(model_csv.alpha.size()));
  const RegressionModel model(kernel, model_csv.points, {}, alpha, 1.0, false, {});

  std::ifstream ef(eval_path);
  if (!ef) throw input_error("cannot open eval csv '" + eval_path + "'");
  std::vector<Point> eval_points;
  int eval_dim = 0;
  if (ef.peek() == 'b') {  // points csv with a leading block column
    const auto pts = read_points_csv(ef);
    eval_points = pts.points;
    eval_dim = pts.dim;
  } else {
    const auto samples = read_samples_csv(ef);
    eval_points = samples.points;
    eval_dim = samples.dim;
  }
  if (eval_dim != opt.dim) throw input_error("eval csv dimension mismatch");

  const auto pred = model.predict(eval_points);
  std::ostringstream os;
  write_samples_csv(os, eval_points, pred, "prediction");
  deliver(opt, os.str());
  return kExitOk;
}

int cmd_rates(const CommonOptions& opt, const std::string& function,
              const std::string& scheme, const std::string& ladder_text) {
  const Box box = make_box(opt);
  ExperimentConfig config;
  config.box = box;
  config.anchor = make_anchor(opt, box);
  config.family = order_family(opt.dim, opt.family_order);
  config.function = make_registry_function(function, opt.dim, box);
  config.kernel = make_kernel_config(opt);
  config.gamma_scheme = make_weight_scheme(opt);
  config.lambda_rule = make_lambda_rule(opt);
  config.test_grid.mc_points = opt.mc_points;
  config.test_grid.tensor_m = opt.tensor_m;
  config.test_grid.seed = opt.seed;

  if (scheme == "uniform") {
    config.ladder.scheme = PointLadder::Scheme::uniform;
  } else if (scheme == "sparse") {
    config.ladder.scheme = PointLadder::Scheme::sparse;
  } else {
    throw input_error("--scheme must be uniform or sparse");
  }
  for (double v : parse_double_list(ladder_text)) {
    config.ladder.steps.push_back(static_cast<int>(v));
  }

  const auto report = run_convergence(config);

  std::ostringstream os;
  os << "step,n_points,fill,lambda,err_l2,err_linf\n";
  for (const auto& row : report.rows) {
    os << row.step << "," << row.n_points << "," << format_double(row.fill) << ","
       << format_double(row.lambda) << "," << format_double(row.err_l2) << ","
       << format_double(row.err_linf) << "\n";
  }
  deliver(opt, os.str());

  std::cerr << "rates: evaluations=" << report.evaluations;
  if (report.rate.defined) {
    std::cerr << " slope=" << format_double(report.rate.slope)
              << " rows_used=" << report.rate.rows_used;
  } else {
    std::cerr << " slope=undefined";
  }
  if (report.rate.plateau) {
    std::cerr << " plateau_level=" << format_double(report.rate.plateau_level);
  }
  for (const auto& row : report.rows) {
    std::cerr << "\n  step " << row.step << ": " << row.wall_ms << " ms";
  }
  std::cerr << "\n";
  return kExitOk;
}

int cmd_pde_sample(const CommonOptions& opt, int d, double beta, double theta, int mesh,
                   const std::string& points_path, const std::string& qoi_kind, double x0) {
  apply_pde_config(opt, d, beta, theta, mesh);
  const auto problem = DiffusionProblem::standard_affine(d, beta, theta);
  QoiSpec spec;
  if (qoi_kind == "mean") {
    spec.kind = QoiSpec::Kind::mean_value;
  } else if (qoi_kind == "point") {
    spec.kind = QoiSpec::Kind::point_value;
    spec.x0 = x0;
  } else {
    throw input_error("--qoi must be mean or point");
  }

  std::ifstream pf(points_path);
  if (!pf) throw input_error("cannot open points csv '" + points_path + "'");
  const auto points_csv = read_points_csv(pf);
  if (points_csv.dim != d) throw input_error("points csv dimension does not match --d");

  const auto values = sample_ug(problem, spec, points_csv.points, mesh);
  std::ostringstream os;
  write_samples_csv(os, points_csv.points, values, "ug");
  deliver(opt, os.str());
  return kExitOk;
}

int cmd_pde_pipeline(const CommonOptions& opt, int d, double beta, double theta, int mesh,
                     double c, double tolerance, int forced_order, int q_offset,
                     double lambda) {
  apply_pde_config(opt, d, beta, theta, mesh);
  PdePipelineConfig config;
  config.problem = DiffusionProblem::standard_affine(d, beta, theta);
  config.qoi.kind = QoiSpec::Kind::mean_value;
  config.mesh = mesh;
  config.c = c;
  config.tolerance = tolerance;
  config.forced_order = forced_order;
  config.q_offset = q_offset;
  config.fixed_lambda = lambda;
  config.kernel = make_kernel_config(opt);
  config.test_grid.mc_points = opt.mc_points;
  config.test_grid.seed = opt.seed;

  const auto report = run_pde_pipeline(config);
  std::ostringstream os;
  os << "key,value\n";
  os << "epsilon," << format_double(report.eps.value) << "\n";
  os << "order," << report.order << "\n";
  os << "order_met," << (report.order_met ? 1 : 0) << "\n";
  os << "tail," << format_double(report.tail) << "\n";
  os << "n_points," << report.n_points << "\n";
  os << "lambda," << format_double(report.lambda) << "\n";
  os << "err_l2," << format_double(report.err_l2) << "\n";
  os << "err_linf," << format_double(report.err_linf) << "\n";
  os << "predicted_truncation_bound," << format_double(report.predicted_truncation) << "\n";
  os << "evaluations," << report.evaluations << "\n";
  deliver(opt, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anchored-approx: anchored decompositions, Lambda-subspace kernel "
               "regression, and parametric-PDE experiments"};
  app.require_subcommand(1);

  CommonOptions opt;
  app.add_option("--config", opt.config_path, "JSON config; flags override its values");
  app.add_option("--seed", opt.seed, "seed for every randomized stage");
  app.add_option("--out", opt.out, "output CSV path (stdout when omitted)");
  app.add_option("--dim", opt.dim, "ambient dimension d");
  app.add_option("--box-lo", opt.box_lo, "box lower bound (all coordinates)");
  app.add_option("--box-hi", opt.box_hi, "box upper bound (all coordinates)");
  app.add_option("--anchor", opt.anchor_text, "'center', one value, or d comma-separated");
  app.add_option("--family-order", opt.family_order, "max subset size n of Lambda");
  app.add_option("--kernel", opt.kernel_kind, "anchored_h1 | pinned_brownian | pinned_matern");
  app.add_option("--nu", opt.nu, "Matern smoothness (0.5, 1.5, 2.5)");
  app.add_option("--lengthscale", opt.lengthscale, "Matern lengthscale");
  app.add_option("--gamma-scheme", opt.gamma_kind, "constant | product");
  app.add_option("--gamma", opt.gamma_value, "constant gamma value");
  app.add_option("--c", opt.weight_c, "weight exponent c in (1/2,1]");
  app.add_option("--n", opt.weight_n, "weight order shift n");
  app.add_option("--m", opt.weight_m, "weight divisor m");
  app.add_option("--alpha", opt.alpha_text, "comma-separated alpha_j for product weights");
  app.add_option("--lambda-rule", opt.lambda_rule, "fixed | sobolev | mixed | ratio");
  app.add_option("--lambda", opt.lambda_value, "lambda for the fixed rule");
  app.add_option("--sigma", opt.sigma, "smoothness exponent for the lambda rules");
  app.add_option("--deff", opt.deff, "effective block dimension for the sobolev rule");
  app.add_option("--f1", opt.f1, "F1 for the ratio rule");
  app.add_option("--f2", opt.f2, "F2 for the ratio rule");
  app.add_option("--mc", opt.mc_points, "Monte-Carlo test grid size");
  app.add_option("--tensor-m", opt.tensor_m, "tensor test grid points per axis (d <= 4)");

  // Global flags may appear after the subcommand name.
  auto add_subcommand = [&app](const std::string& name, const std::string& help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->fallthrough();
    return cmd;
  };

  // points
  auto* points_cmd = add_subcommand("points", "assemble a Lambda sampling set");
  std::string scheme = "uniform";
  int m = 5, q = 2;
  points_cmd->add_option("--scheme", scheme, "uniform | sparse");
  points_cmd->add_option("--m", m, "points per axis (uniform)");
  points_cmd->add_option("--q", q, "sparse level offset: q_u = #u + q");

  // decompose
  auto* decompose_cmd =
      add_subcommand("decompose", "Monte-Carlo norms of anchored components");
  std::string function = "additive-sin";
  int samples = 4096;
  decompose_cmd->add_option("--function", function, "registry function name");
  decompose_cmd->add_option("--samples", samples, "Monte-Carlo samples per component");

  // weights
  auto* weights_cmd = add_subcommand("weights", "gamma weights, tail sums, epsilon");
  int order = 1;
  double tolerance = 0.0;
  weights_cmd->add_option("--order", order, "truncation order L");
  weights_cmd->add_option("--tol", tolerance, "tolerance for order selection");

  // fit
  auto* fit_cmd = add_subcommand("fit", "penalized least-squares fit on a point set");
  std::string fit_function = "additive-sin";
  std::string points_path;
  bool force_plain = false;
  fit_cmd->add_option("--function", fit_function, "registry name or samples csv");
  fit_cmd->add_option("--points", points_path, "points csv from the points subcommand")
      ->required();
  fit_cmd->add_flag("--plain", force_plain, "plain estimator instead of the block-weighted one");

  // predict
  auto* predict_cmd = add_subcommand("predict", "evaluate a fitted model");
  std::string model_path, eval_path;
  predict_cmd->add_option("--model", model_path, "model csv from fit")->required();
  predict_cmd->add_option("--eval", eval_path, "csv of evaluation points")->required();

  // rates
  auto* rates_cmd = add_subcommand("rates", "convergence ladder with rate fitting");
  std::string rates_function = "additive-sin";
  std::string rates_scheme = "uniform";
  std::string ladder = "3,5,9";
  rates_cmd->add_option("--function", rates_function, "registry function name");
  rates_cmd->add_option("--scheme", rates_scheme, "uniform | sparse");
  rates_cmd->add_option("--ladder", ladder, "comma-separated m values (or q offsets)");

  // pde-sample
  auto* pde_sample_cmd = add_subcommand("pde-sample", "sample u_G on a point set");
  int pde_d = 4;
  double beta = 0.1, theta = 2.0;
  int mesh = 100;
  std::string pde_points, qoi_kind = "mean";
  double x0 = 0.5;
  pde_sample_cmd->add_option("--d", pde_d, "parameter dimension");
  pde_sample_cmd->add_option("--beta", beta, "fluctuation amplitude");
  pde_sample_cmd->add_option("--theta", theta, "fluctuation decay exponent");
  pde_sample_cmd->add_option("--mesh", mesh, "interior FEM nodes");
  pde_sample_cmd->add_option("--points", pde_points, "points csv over [-1/2,1/2]^d")
      ->required();
  pde_sample_cmd->add_option("--qoi", qoi_kind, "mean | point");
  pde_sample_cmd->add_option("--x0", x0, "evaluation point for the point qoi");

  // pde-pipeline
  auto* pipeline_cmd =
      add_subcommand("pde-pipeline", "order selection, sampling, fit, test error");
  int pipe_d = 6;
  double pipe_beta = 0.1, pipe_theta = 2.0, pipe_c = 0.6, pipe_tol = 1e-3;
  int pipe_mesh = 100, pipe_order = -1, pipe_q = 2;
  double pipe_lambda = 1e-8;
  pipeline_cmd->add_option("--d", pipe_d, "parameter dimension");
  pipeline_cmd->add_option("--beta", pipe_beta, "fluctuation amplitude");
  pipeline_cmd->add_option("--theta", pipe_theta, "fluctuation decay exponent");
  pipeline_cmd->add_option("--mesh", pipe_mesh, "interior FEM nodes");
  pipeline_cmd->add_option("--pipe-c", pipe_c, "weight exponent c");
  pipeline_cmd->add_option("--tol", pipe_tol, "order selection tolerance");
  pipeline_cmd->add_option("--order", pipe_order, "force the truncation order");
  pipeline_cmd->add_option("--q", pipe_q, "sparse level offset");
  pipeline_cmd->add_option("--pipe-lambda", pipe_lambda, "fixed smoothing parameter");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_config(opt);
    if (points_cmd->parsed()) return cmd_points(opt, scheme, m, q);
    if (decompose_cmd->parsed()) return cmd_decompose(opt, function, samples);
    if (weights_cmd->parsed()) return cmd_weights(opt, order, tolerance);
    if (fit_cmd->parsed()) return cmd_fit(opt, fit_function, points_path, force_plain);
    if (predict_cmd->parsed()) return cmd_predict(opt, model_path, eval_path);
    if (rates_cmd->parsed()) return cmd_rates(opt, rates_function, rates_scheme, ladder);
    if (pde_sample_cmd->parsed()) {
      return cmd_pde_sample(opt, pde_d, beta, theta, mesh, pde_points, qoi_kind, x0);
    }
    if (pipeline_cmd->parsed()) {
      return cmd_pde_pipeline(opt, pipe_d, pipe_beta, pipe_theta, pipe_mesh, pipe_c, pipe_tol,
                              pipe_order, pipe_q, pipe_lambda);
    }
    std::cerr << "no subcommand given\n";
    return kExitInput;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const capability_error& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return kExitCapability;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
