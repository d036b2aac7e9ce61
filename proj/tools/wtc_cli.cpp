// SPDX-License-Identifier: Apache-2.0
// wtc: command-line front end for weighted tensor completion experiments.

#include "wtc/bounds.hpp"
#include "wtc/completion.hpp"
#include "wtc/error.hpp"
#include "wtc/experiment.hpp"
#include "wtc/io.hpp"
#include "wtc/metrics.hpp"
#include "wtc/sampling.hpp"
#include "wtc/synthetic.hpp"
#include "wtc/tvmin.hpp"
#include "wtc/weights.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace wtc;

std::vector<Index> parse_index_list(const std::string& s, const char* what) {
  std::vector<Index> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ArgumentError(std::string("bad ") + what + " entry '" + tok + "'");
    out.push_back(static_cast<Index>(v));
  }
  if (out.empty()) throw ArgumentError(std::string("empty ") + what);
  return out;
}

// "40x40x40" or "40,40,40"
Shape parse_shape(std::string s) {
  for (char& c : s)
    if (c == 'x') c = ',';
  return Shape(parse_index_list(s, "shape"));
}

// "5" applies to every mode; "5,5,3" gives one rank per mode.
Ranks parse_ranks(const std::string& s, const Shape& shape) {
  Ranks r = parse_index_list(s, "rank");
  if (r.size() == 1) r.assign(shape.order(), r[0]);
  return r;
}

// "2:10", "2:10:2" or "2,4,6"; every entry applies to all modes.
std::vector<Ranks> parse_rank_sweep(const std::string& s, const Shape& shape) {
  std::vector<Ranks> out;
  if (s.find(':') != std::string::npos) {
    std::vector<Index> parts;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ':')) parts.push_back(parse_index_list(tok, "rank sweep")[0]);
    if (parts.size() < 2 || parts.size() > 3) throw ArgumentError("rank sweep must be a:b or a:b:step");
    const Index step = parts.size() == 3 ? parts[2] : 1;
    if (step == 0) throw ArgumentError("rank sweep step must be positive");
    for (Index r = parts[0]; r <= parts[1]; r += step) out.push_back(Ranks(shape.order(), r));
  } else {
    for (Index r : parse_index_list(s, "rank sweep")) out.push_back(Ranks(shape.order(), r));
  }
  return out;
}

void parse_input_rank(const std::string& s, ExperimentConfig& cfg) {
  if (s == "true") {
    cfg.sv_rank = false;
  } else if (s.rfind("sv:", 0) == 0) {
    cfg.sv_rank = true;
    cfg.sv_tau = std::stod(s.substr(3));
  } else {
    throw ArgumentError("--input-rank must be 'true' or 'sv:<tau>'");
  }
}

std::vector<std::string> split_methods(const std::string& s) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

struct TvFlags {
  double h = TvConfig{}.step;
  double lambda = TvConfig{}.threshold;
  Index max_iters = TvConfig{}.max_iters;
  double tol = TvConfig{}.tol;
  std::string init = "hosvd_w";
};

void add_tv_flags(CLI::App* app, TvFlags& f, std::vector<CLI::Option*>* opts = nullptr) {
  auto* a = app->add_option("--tv-h", f.h, "TV step size (constant)")->capture_default_str();
  auto* b = app->add_option("--tv-lambda", f.lambda, "TV shrink threshold")->capture_default_str();
  auto* c = app->add_option("--tv-maxiter", f.max_iters, "TV iteration cap")->capture_default_str();
  auto* d = app->add_option("--tv-tol", f.tol, "TV stopping tolerance")->capture_default_str();
  if (opts) {
    auto* e = app->add_option("--tv-init", f.init, "TV start: zero | hosvd | hosvd_w")
                  ->capture_default_str();
    *opts = {a, b, c, d, e};
  }
}

TvConfig tv_config(const TvFlags& f) {
  TvConfig cfg;
  cfg.step = f.h;
  cfg.threshold = f.lambda;
  cfg.max_iters = f.max_iters;
  cfg.tol = f.tol;
  return cfg;
}

void print_report_line(std::ostream& os, const ErrorReport& r) {
  os << "weighted_rel_error,rel_error,snr_db,rmse,weighted_abs_error\n"
     << format_double(r.weighted_rel_error) << ',' << format_double(r.rel_error) << ','
     << format_double(r.snr_db) << ',' << format_double(r.rmse) << ','
     << format_double(r.weighted_abs_error) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted HOSVD tensor completion toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic low Tucker rank tensor");
  std::string gen_shape = "40x40x40", gen_rank = "5", gen_out;
  std::uint64_t gen_seed = 0;
  bool gen_iid_flag = false;
  gen->add_option("--shape", gen_shape, "Dimensions, e.g. 40x40x40")->capture_default_str();
  gen->add_option("--rank", gen_rank, "Tucker rank, one value or one per mode")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_flag("--iid", gen_iid_flag, "I.i.d. standard normal entries instead of low rank");
  gen->add_option("--out", gen_out, "Output TEN1 file")->required();

  // sample
  auto* sample = app.add_subcommand("sample", "Draw a sampling pattern and noisy observations");
  std::string smp_tensor, smp_pattern = "uniform", smp_out_pattern, smp_out;
  double smp_sr = 0.3, smp_sigma = 1e-2;
  std::uint64_t smp_seed = 0;
  sample->add_option("--tensor", smp_tensor, "Ground truth TEN1 file")->required();
  sample->add_option("--pattern", smp_pattern, "uniform | block")->capture_default_str();
  sample->add_option("--sr", smp_sr, "Sampling rate")->capture_default_str();
  sample->add_option("--sigma", smp_sigma, "Noise standard deviation")->capture_default_str();
  sample->add_option("--seed", smp_seed, "Random seed")->capture_default_str();
  sample->add_option("--out-pattern", smp_out_pattern, "Output PAT1 file")->required();
  sample->add_option("--out", smp_out, "Output TEN1 file with the observed tensor");

  // fitweight
  auto* fitw = app.add_subcommand("fitweight", "Fit a rank-1 weight to a sampling pattern");
  std::string fw_pattern, fw_out;
  WeightFitOptions fw_opts;
  fitw->add_option("--pattern", fw_pattern, "Input PAT1 file")->required();
  fitw->add_option("--out", fw_out, "Output W8T1 file")->required();
  fitw->add_option("--floor", fw_opts.floor, "Entrywise lower bound")->capture_default_str();
  fitw->add_option("--max-iters", fw_opts.max_iters, "Sweep cap")->capture_default_str();
  fitw->add_option("--tol", fw_opts.tol, "Relative objective change tolerance")->capture_default_str();

  // complete
  auto* comp = app.add_subcommand("complete", "Complete an observed tensor");
  std::string cp_observed, cp_pattern, cp_weight, cp_method = "hosvd_w", cp_rank = "5", cp_out;
  comp->add_option("--observed", cp_observed, "Observed TEN1 file (zero off the pattern)")->required();
  comp->add_option("--pattern", cp_pattern, "PAT1 file")->required();
  comp->add_option("--weight", cp_weight, "W8T1 file; fitted from the pattern when omitted");
  comp->add_option("--method", cp_method, "hosvd | hosvd_p | hosvd_w | cp")->capture_default_str();
  comp->add_option("--rank", cp_rank, "Input rank, or sv:<tau> to estimate it")->capture_default_str();
  comp->add_option("--out", cp_out, "Output TEN1 file")->required();

  // tvmin
  auto* tvm = app.add_subcommand("tvmin", "Total variation refinement");
  std::string tv_observed, tv_pattern, tv_init_file, tv_truth, tv_trace, tv_out;
  TvFlags tv_flags;
  tvm->add_option("--observed", tv_observed, "Observed TEN1 file")->required();
  tvm->add_option("--pattern", tv_pattern, "PAT1 file")->required();
  tvm->add_option("--init-file", tv_init_file, "Start tensor (TEN1); zero start when omitted");
  tvm->add_option("--truth", tv_truth, "Ground truth TEN1 for the error trace");
  tvm->add_option("--trace", tv_trace, "Residual trace CSV output");
  tvm->add_option("--out", tv_out, "Output TEN1 file")->required();
  add_tv_flags(tvm, tv_flags);

  // eval
  auto* ev = app.add_subcommand("eval", "Error measures of an estimate");
  std::string ev_truth, ev_est, ev_weight;
  ev->add_option("--truth", ev_truth, "Ground truth TEN1")->required();
  ev->add_option("--estimate", ev_est, "Estimate TEN1")->required();
  ev->add_option("--weight", ev_weight, "W8T1 weight; W = 1 when omitted");

  // bounds
  auto* bd = app.add_subcommand("bounds", "Evaluate the error upper bounds");
  std::string bd_pattern, bd_weight, bd_tensor, bd_rank = "5";
  double bd_sigma = 1e-2, bd_tinf = -1.0;
  bd->add_option("--pattern", bd_pattern, "PAT1 file")->required();
  bd->add_option("--weight", bd_weight, "W8T1 file; fitted from the pattern when omitted");
  bd->add_option("--tensor", bd_tensor, "Ground truth TEN1 (for ||T||_inf)");
  bd->add_option("--t-inf", bd_tinf, "||T||_inf, instead of --tensor");
  bd->add_option("--sigma", bd_sigma, "Noise standard deviation")->capture_default_str();
  bd->add_option("--rank", bd_rank, "Tucker rank")->capture_default_str();

  // bench
  auto* bench = app.add_subcommand("bench", "Seeded sweep over ranks and trials, CSV output");
  std::string b_config, b_shape, b_rank, b_sweep, b_pattern, b_method, b_input_rank, b_out;
  double b_sr = 0.0, b_sigma = 0.0;
  Index b_trials = 0;
  std::uint64_t b_seed = 0;
  bool b_bounds = false;
  TvFlags b_tv;
  std::vector<CLI::Option*> b_tv_opts;
  bench->add_option("--config", b_config, "JSON config file");
  auto* o_shape = bench->add_option("--shape", b_shape, "Dimensions, e.g. 40x40x40");
  auto* o_rank = bench->add_option("--rank", b_rank, "Single rank (all modes or per mode)");
  auto* o_sweep = bench->add_option("--rank-sweep", b_sweep, "Ranks, e.g. 2:10 or 2,4,6");
  auto* o_pattern = bench->add_option("--pattern", b_pattern, "uniform | block");
  auto* o_sr = bench->add_option("--sr", b_sr, "Sampling rate");
  auto* o_sigma = bench->add_option("--sigma", b_sigma, "Noise standard deviation");
  auto* o_trials = bench->add_option("--trials", b_trials, "Trials per rank");
  auto* o_seed = bench->add_option("--seed", b_seed, "Base seed");
  auto* o_method = bench->add_option("--method", b_method, "Comma separated: hosvd,hosvd_p,hosvd_w,cp,tv");
  auto* o_input = bench->add_option("--input-rank", b_input_rank, "true | sv:<tau>");
  bench->add_option("--out", b_out, "CSV output; stdout when omitted");
  auto* o_bounds = bench->add_flag("--bounds", b_bounds, "Append bound columns");
  add_tv_flags(bench, b_tv, &b_tv_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const Shape shape = parse_shape(gen_shape);
      const DenseTensor t = gen_iid_flag ? gen_iid(shape, gen_seed)
                                         : gen_synthetic(shape, parse_ranks(gen_rank, shape), gen_seed);
      save_tensor(gen_out, t);
    } else if (*sample) {
      const DenseTensor truth = load_tensor(smp_tensor);
      SamplingPattern p;
      if (parse_pattern_kind(smp_pattern) == PatternKind::Uniform) {
        p = uniform_pattern(truth.shape(), smp_sr, smp_seed);
      } else {
        const BlockProfile prof = block_profile_for_rate(truth.shape(), smp_sr);
        p = bernoulli_pattern(block_rank1_probability(truth.shape(), prof.u, prof.v), smp_seed);
      }
      save_pattern(smp_out_pattern, p);
      if (!smp_out.empty()) save_tensor(smp_out, observe(truth, smp_sigma, p, smp_seed));
      std::cout << "observed " << p.count() << " of " << truth.size() << " entries (rate "
                << format_double(p.rate()) << ")\n";
    } else if (*fitw) {
      const SamplingPattern p = load_pattern(fw_pattern);
      const WeightFit fit = fit_rank1_weight(p, fw_opts);
      save_weight(fw_out, fit.weight);
      std::cout << "sweeps " << fit.sweeps << (fit.converged ? " (converged)" : " (not converged)")
                << " objective " << format_double(fit.objective.back()) << '\n';
    } else if (*comp) {
      const DenseTensor y = load_tensor(cp_observed);
      const SamplingPattern p = load_pattern(cp_pattern);
      ExperimentConfig cfg;
      cfg.shape = y.shape();
      TrialData trial{y, p, y, cp_weight.empty() ? fit_rank1_weight(p).weight : load_weight(cp_weight)};
      Ranks ranks;
      if (cp_rank.rfind("sv:", 0) == 0)
        ranks = sv_ranks(y, default_sv_max_rank(y.shape()), std::stod(cp_rank.substr(3)));
      else
        ranks = parse_ranks(cp_rank, y.shape());
      if (cp_method != "hosvd" && cp_method != "hosvd_p" && cp_method != "hosvd_w" && cp_method != "cp")
        throw ArgumentError("unknown method '" + cp_method + "'");
      save_tensor(cp_out, run_method(cfg, cp_method, trial, ranks));
      std::cout << "rank " << format_ranks(ranks) << '\n';
    } else if (*tvm) {
      const DenseTensor y = load_tensor(tv_observed);
      const SamplingPattern p = load_pattern(tv_pattern);
      const DenseTensor init = tv_init_file.empty() ? DenseTensor(y.shape()) : load_tensor(tv_init_file);
      DenseTensor truth;
      if (!tv_truth.empty()) truth = load_tensor(tv_truth);
      const TvResult res = tv_minimize(y, p, init, tv_config(tv_flags), tv_truth.empty() ? nullptr : &truth);
      save_tensor(tv_out, res.estimate);
      if (!tv_trace.empty()) {
        std::ofstream os(tv_trace);
        write_trace_csv(os, res);
      }
      std::cout << "iterations " << res.iterations << (res.converged ? " (converged)" : " (not converged)")
                << '\n';
    } else if (*ev) {
      const DenseTensor truth = load_tensor(ev_truth);
      const DenseTensor est = load_tensor(ev_est);
      const Rank1Weight w = ev_weight.empty() ? Rank1Weight::ones(truth.shape()) : load_weight(ev_weight);
      print_report_line(std::cout, evaluate(w, truth, est));
    } else if (*bd) {
      const SamplingPattern p = load_pattern(bd_pattern);
      const Rank1Weight w = bd_weight.empty() ? fit_rank1_weight(p).weight : load_weight(bd_weight);
      double t_inf = bd_tinf;
      if (!bd_tensor.empty()) t_inf = inf_norm(load_tensor(bd_tensor));
      if (t_inf < 0.0) throw ArgumentError("bounds needs --tensor or --t-inf");
      const BoundReport r = bound_report(w, p, t_inf, bd_sigma, parse_ranks(bd_rank, p.shape()));
      std::cout << "thm1_bound," << format_double(r.thm1_bound) << '\n'
                << "thmB1_bound," << format_double(r.thmB1_bound) << '\n'
                << "mu_global," << format_double(r.mu_global) << '\n'
                << "observed," << r.observed << '\n'
                << "mode,rank,mu,lambda,log_factor,noise_term,bias_term\n";
      for (Index k = 0; k < r.modes.size(); ++k) {
        const auto& m = r.modes[k];
        std::cout << k << ',' << m.rank << ',' << format_double(m.mu) << ',' << format_double(m.lambda)
                  << ',' << format_double(m.log_factor) << ',' << format_double(m.noise_term) << ','
                  << format_double(m.bias_term) << '\n';
      }
    } else if (*bench) {
      ExperimentConfig cfg;
      if (!b_config.empty()) cfg = config_from_json(read_file(b_config));
      if (o_shape->count()) cfg.shape = parse_shape(b_shape);
      if (o_sweep->count()) cfg.rank_sweep = parse_rank_sweep(b_sweep, cfg.shape);
      if (o_rank->count()) cfg.rank_sweep = {parse_ranks(b_rank, cfg.shape)};
      if (cfg.rank_sweep.empty())
        for (Index r = 2; r <= 10; ++r) cfg.rank_sweep.push_back(Ranks(cfg.shape.order(), r));
      if (o_pattern->count()) cfg.pattern = parse_pattern_kind(b_pattern);
      if (o_sr->count()) cfg.sampling_rate = b_sr;
      if (o_sigma->count()) cfg.sigma = b_sigma;
      if (o_trials->count()) cfg.trials = b_trials;
      if (o_seed->count()) cfg.seed = b_seed;
      if (o_method->count()) cfg.methods = split_methods(b_method);
      if (o_input->count()) parse_input_rank(b_input_rank, cfg);
      if (o_bounds->count()) cfg.bounds = b_bounds;
      if (b_tv_opts[0]->count()) cfg.tv.step = b_tv.h;
      if (b_tv_opts[1]->count()) cfg.tv.threshold = b_tv.lambda;
      if (b_tv_opts[2]->count()) cfg.tv.max_iters = b_tv.max_iters;
      if (b_tv_opts[3]->count()) cfg.tv.tol = b_tv.tol;
      if (b_tv_opts[4]->count()) cfg.tv_init = parse_tv_init(b_tv.init);

      const SweepResult res = run_sweep(cfg, &std::cerr);
      if (b_out.empty()) {
        write_sweep_csv(std::cout, cfg, res);
      } else {
        std::ofstream os(b_out, std::ios::trunc);
        if (!os) throw ArgumentError("cannot write " + b_out);
        write_sweep_csv(os, cfg, res);
      }
      if (!res.failures.empty()) {
        std::cerr << res.failures.size() << " cells failed\n";
        return 3;
      }
    }
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
