// SPDX-License-Identifier: Apache-2.0
#include "wtc/experiment.hpp"

#include "wtc/error.hpp"
#include "wtc/rng.hpp"
#include "wtc/sampling.hpp"
#include "wtc/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace wtc {

using json = nlohmann::json;

std::string to_string(PatternKind k) { return k == PatternKind::Uniform ? "uniform" : "block"; }

std::string to_string(TvInit k) {
  switch (k) {
    case TvInit::Zero: return "zero";
    case TvInit::Hosvd: return "hosvd";
    case TvInit::HosvdW: return "hosvd_w";
  }
  return "zero";
}

PatternKind parse_pattern_kind(const std::string& s) {
  if (s == "uniform") return PatternKind::Uniform;
  if (s == "block" || s == "block-rank1") return PatternKind::Block;
  throw ArgumentError("unknown pattern kind '" + s + "' (expected uniform or block)");
}

TvInit parse_tv_init(const std::string& s) {
  if (s == "zero") return TvInit::Zero;
  if (s == "hosvd") return TvInit::Hosvd;
  if (s == "hosvd_w") return TvInit::HosvdW;
  throw ArgumentError("unknown TV init '" + s + "' (expected zero, hosvd or hosvd_w)");
}

namespace {

bool is_known_method(const std::string& m) {
  if (m == "hosvd" || m == "hosvd_p" || m == "hosvd_w" || m == "cp" || m == "tv") return true;
  if (m.rfind("tv:", 0) == 0) {
    parse_tv_init(m.substr(3));
    return true;
  }
  return false;
}

std::string method_label(const ExperimentConfig& cfg, const std::string& m) {
  if (m == "tv") return "tv:" + to_string(cfg.tv_init);
  return m;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw ArgumentError("trials must be at least 1");
  if (rank_sweep.empty()) throw ArgumentError("rank sweep is empty");
  for (const auto& r : rank_sweep) {
    if (r.size() != shape.order())
      throw ArgumentError("rank " + format_ranks(r) + " does not match order " +
                          std::to_string(shape.order()));
    for (Index k = 0; k < r.size(); ++k)
      if (r[k] < 1 || r[k] > shape[k])
        throw ArgumentError("rank " + format_ranks(r) + " outside [1, d_k] for mode " +
                            std::to_string(k));
  }
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0))
    throw ArgumentError("sampling rate must lie in (0, 1]");
  if (!(sigma >= 0.0)) throw ArgumentError("sigma must be nonnegative");
  if (methods.empty()) throw ArgumentError("no methods selected");
  for (const auto& m : methods)
    if (!is_known_method(m)) throw ArgumentError("unknown method '" + m + "'");
  if (sv_rank && !(sv_tau > 0.0 && sv_tau < 1.0)) throw ArgumentError("sv tau must lie in (0, 1)");
  tv.validate();
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what(), e.byte);
  }
  if (!j.is_object()) throw FormatError("config must be a JSON object", 0);

  ExperimentConfig cfg;
  try {
    if (j.contains("shape")) cfg.shape = Shape(j.at("shape").get<std::vector<Index>>());
    if (j.contains("rank_sweep")) {
      for (const auto& e : j.at("rank_sweep")) {
        if (e.is_number_integer())
          cfg.rank_sweep.push_back(Ranks(cfg.shape.order(), e.get<Index>()));
        else
          cfg.rank_sweep.push_back(e.get<Ranks>());
      }
    }
    if (j.contains("pattern")) cfg.pattern = parse_pattern_kind(j.at("pattern").get<std::string>());
    if (j.contains("sampling_rate")) cfg.sampling_rate = j.at("sampling_rate").get<double>();
    if (j.contains("sigma")) cfg.sigma = j.at("sigma").get<double>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<Index>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("methods")) cfg.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("input_rank")) {
      const auto s = j.at("input_rank").get<std::string>();
      if (s == "true") {
        cfg.sv_rank = false;
      } else if (s.rfind("sv:", 0) == 0) {
        cfg.sv_rank = true;
        cfg.sv_tau = std::stod(s.substr(3));
      } else {
        throw ArgumentError("input_rank must be \"true\" or \"sv:<tau>\"");
      }
    }
    if (j.contains("bounds")) cfg.bounds = j.at("bounds").get<bool>();
    if (j.contains("tv")) {
      const auto& t = j.at("tv");
      if (t.contains("init")) cfg.tv_init = parse_tv_init(t.at("init").get<std::string>());
      if (t.contains("h")) cfg.tv.step = t.at("h").get<double>();
      if (t.contains("steps")) cfg.tv.steps = t.at("steps").get<std::vector<double>>();
      if (t.contains("lambda")) cfg.tv.threshold = t.at("lambda").get<double>();
      if (t.contains("max_iters")) cfg.tv.max_iters = t.at("max_iters").get<Index>();
      if (t.contains("tol")) cfg.tv.tol = t.at("tol").get<double>();
    }
    if (j.contains("cp")) {
      const auto& c = j.at("cp");
      if (c.contains("outer_iters")) cfg.cp.outer_iters = c.at("outer_iters").get<Index>();
      if (c.contains("inner_iters")) cfg.cp.inner_iters = c.at("inner_iters").get<Index>();
      if (c.contains("tol")) cfg.cp.tol = c.at("tol").get<double>();
    }
    if (j.contains("weight_fit")) {
      const auto& w = j.at("weight_fit");
      if (w.contains("max_iters")) cfg.weight_fit.max_iters = w.at("max_iters").get<Index>();
      if (w.contains("tol")) cfg.weight_fit.tol = w.at("tol").get<double>();
      if (w.contains("floor")) cfg.weight_fit.floor = w.at("floor").get<double>();
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("bad config field: ") + e.what());
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["shape"] = cfg.shape.dims();
  j["rank_sweep"] = cfg.rank_sweep;
  j["pattern"] = to_string(cfg.pattern);
  j["sampling_rate"] = cfg.sampling_rate;
  j["sigma"] = cfg.sigma;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["methods"] = cfg.methods;
  j["input_rank"] = cfg.sv_rank ? "sv:" + format_double(cfg.sv_tau) : std::string("true");
  j["bounds"] = cfg.bounds;
  j["tv"] = {{"init", to_string(cfg.tv_init)}, {"h", cfg.tv.step},     {"steps", cfg.tv.steps},
             {"lambda", cfg.tv.threshold},     {"max_iters", cfg.tv.max_iters}, {"tol", cfg.tv.tol}};
  j["cp"] = {{"outer_iters", cfg.cp.outer_iters}, {"inner_iters", cfg.cp.inner_iters},
             {"tol", cfg.cp.tol}};
  j["weight_fit"] = {{"max_iters", cfg.weight_fit.max_iters},
                     {"tol", cfg.weight_fit.tol},
                     {"floor", cfg.weight_fit.floor}};
  return j.dump(2);
}

Index default_sv_max_rank(const Shape& shape) {
  const Index m = *std::min_element(shape.dims().begin(), shape.dims().end());
  return std::max<Index>(1, m / 2);
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, Index point, Index trial) {
  return derive_seed(cfg.seed, point, trial);
}

TrialData make_trial(const ExperimentConfig& cfg, const Ranks& ranks, std::uint64_t seed) {
  TrialData t;
  t.truth = gen_synthetic(cfg.shape, ranks, seed);
  if (cfg.pattern == PatternKind::Uniform) {
    t.pattern = uniform_pattern(cfg.shape, cfg.sampling_rate, seed);
  } else {
    const BlockProfile prof = block_profile_for_rate(cfg.shape, cfg.sampling_rate);
    t.pattern = bernoulli_pattern(block_rank1_probability(cfg.shape, prof.u, prof.v), seed);
  }
  t.observed = observe(t.truth, cfg.sigma, t.pattern, seed);
  t.weight = fit_rank1_weight(t.pattern, cfg.weight_fit).weight;
  return t;
}

DenseTensor run_method(const ExperimentConfig& cfg, const std::string& method, const TrialData& trial,
                       const Ranks& ranks, Index* iterations) {
  if (iterations) *iterations = 0;
  if (method == "hosvd") return complete_hosvd(trial.observed, ranks);
  if (method == "hosvd_p") return complete_hosvd_p(trial.observed, trial.pattern, ranks);
  if (method == "hosvd_w") return complete_hosvd_w(trial.observed, trial.weight, ranks);
  if (method == "cp") {
    const Index r = *std::max_element(ranks.begin(), ranks.end());
    CpCompleteResult res = cp_complete(trial.observed, trial.pattern, r, cfg.cp);
    if (iterations) *iterations = res.outer_iterations;
    return std::move(res.estimate);
  }
  if (method == "tv" || method.rfind("tv:", 0) == 0) {
    const TvInit init = method == "tv" ? cfg.tv_init : parse_tv_init(method.substr(3));
    DenseTensor start(cfg.shape);
    if (init == TvInit::Hosvd) start = complete_hosvd(trial.observed, ranks);
    if (init == TvInit::HosvdW) start = complete_hosvd_w(trial.observed, trial.weight, ranks);
    TvResult res = tv_minimize(trial.observed, trial.pattern, start, cfg.tv);
    if (iterations) *iterations = res.iterations;
    return std::move(res.estimate);
  }
  throw ArgumentError("unknown method '" + method + "'");
}

SweepResult run_sweep(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  SweepResult out;
  for (Index p = 0; p < cfg.rank_sweep.size(); ++p) {
    const Ranks& true_rank = cfg.rank_sweep[p];
    for (Index trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t seed = trial_seed(cfg, p, trial);
      TrialData data;
      Ranks used = true_rank;
      BoundReport bounds;
      try {
        data = make_trial(cfg, true_rank, seed);
        if (cfg.sv_rank) used = sv_ranks(data.observed, default_sv_max_rank(cfg.shape), cfg.sv_tau);
        if (cfg.bounds)
          bounds = bound_report(data.weight, data.pattern, inf_norm(data.truth), cfg.sigma, true_rank);
      } catch (const std::exception& e) {
        for (const auto& m : cfg.methods) {
          out.failures.push_back({true_rank, trial, method_label(cfg, m), e.what()});
          if (log)
            *log << "failed: rank " << format_ranks(true_rank) << " trial " << trial << " method "
                 << method_label(cfg, m) << ": " << e.what() << '\n';
        }
        continue;
      }
      for (const auto& m : cfg.methods) {
        SweepRow row;
        row.seed = seed;
        row.rank = true_rank;
        row.input_rank = used;
        row.method = method_label(cfg, m);
        try {
          const auto t0 = std::chrono::steady_clock::now();
          const DenseTensor est = run_method(cfg, m, data, used, &row.iterations);
          const auto t1 = std::chrono::steady_clock::now();
          row.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
          row.errors = evaluate(data.weight, data.truth, est);
          row.errors.seed = seed;
          row.errors.rank = used;
          row.errors.sampling_rate = data.pattern.rate();
          row.thm1_bound = bounds.thm1_bound;
          row.thmB1_bound = bounds.thmB1_bound;
          out.rows.push_back(std::move(row));
        } catch (const std::exception& e) {
          out.failures.push_back({true_rank, trial, row.method, e.what()});
          if (log)
            *log << "failed: rank " << format_ranks(true_rank) << " trial " << trial << " method "
                 << row.method << ": " << e.what() << '\n';
        }
      }
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg, const SweepResult& result) {
  os << "seed,shape,rank,SR,pattern_kind,method,weighted_rel_error,rel_error,snr_db,wall_time_ms";
  if (cfg.sv_rank) os << ",input_rank";
  if (cfg.bounds) os << ",weighted_abs_error,thm1_bound,thmB1_bound";
  os << '\n';
  const std::string shape = cfg.shape.to_string();
  const std::string kind = to_string(cfg.pattern);
  const std::string sr = format_double(cfg.sampling_rate);
  for (const auto& r : result.rows) {
    os << r.seed << ',' << shape << ',' << format_ranks(r.rank) << ',' << sr << ',' << kind << ','
       << r.method << ',' << format_double(r.errors.weighted_rel_error) << ','
       << format_double(r.errors.rel_error) << ',' << format_double(r.errors.snr_db) << ','
       << format_double(r.wall_time_ms);
    if (cfg.sv_rank) os << ',' << format_ranks(r.input_rank);
    if (cfg.bounds)
      os << ',' << format_double(r.errors.weighted_abs_error) << ',' << format_double(r.thm1_bound)
         << ',' << format_double(r.thmB1_bound);
    os << '\n';
  }
}

std::string format_ranks(const Ranks& r) {
  if (r.empty()) return "";
  if (std::all_of(r.begin(), r.end(), [&](Index v) { return v == r[0]; }))
    return std::to_string(r[0]);
  std::string s;
  for (Index k = 0; k < r.size(); ++k) {
    if (k) s += 'x';
    s += std::to_string(r[k]);
  }
  return s;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace wtc
