// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wtc/bounds.hpp"
#include "wtc/completion.hpp"
#include "wtc/metrics.hpp"
#include "wtc/tvmin.hpp"
#include "wtc/weights.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wtc {

enum class PatternKind { Uniform, Block };
enum class TvInit { Zero, Hosvd, HosvdW };

std::string to_string(PatternKind k);
std::string to_string(TvInit k);
PatternKind parse_pattern_kind(const std::string& s);
TvInit parse_tv_init(const std::string& s);

struct ExperimentConfig {
  Shape shape{40, 40, 40};
  /// One entry per sweep point; each entry holds a rank per mode.
  std::vector<Ranks> rank_sweep;
  PatternKind pattern = PatternKind::Uniform;
  double sampling_rate = 0.3;
  /// Noise standard deviation.
  double sigma = 1e-2;
  Index trials = 20;
  std::uint64_t seed = 0;
  std::vector<std::string> methods{"hosvd", "hosvd_p", "hosvd_w"};
  /// false: complete with the true ranks; true: estimate per-mode ranks
  /// from the observed tensor with threshold sv_tau.
  bool sv_rank = false;
  double sv_tau = 0.05;
  bool bounds = false;
  TvInit tv_init = TvInit::HosvdW;
  TvConfig tv;
  CpCompleteOptions cp;
  WeightFitOptions weight_fit;

  void validate() const;
};

/// JSON config in the same field names as ExperimentConfig; missing fields
/// keep their defaults. `rank_sweep` entries may be an integer (same rank in
/// every mode) or a per-mode list.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

struct SweepRow {
  std::uint64_t seed = 0;
  Ranks rank;
  Ranks input_rank;
  std::string method;
  ErrorReport errors;
  double wall_time_ms = 0.0;
  double thm1_bound = 0.0;
  double thmB1_bound = 0.0;
  Index iterations = 0;
};

struct SweepFailure {
  Ranks rank;
  Index trial = 0;
  std::string method;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepFailure> failures;
};

/// Cap on estimated ranks: min_k d_k / 2, at least 1.
Index default_sv_max_rank(const Shape& shape);

/// Per-trial seed for sweep point `point` and trial `trial`.
std::uint64_t trial_seed(const ExperimentConfig& cfg, Index point, Index trial);

/// Everything drawn for one trial.
struct TrialData {
  DenseTensor truth;
  SamplingPattern pattern;
  DenseTensor observed;
  Rank1Weight weight;
};

TrialData make_trial(const ExperimentConfig& cfg, const Ranks& ranks, std::uint64_t seed);

/// Runs one method on a trial. Returns the estimate and, for iterative
/// methods, the iteration count.
DenseTensor run_method(const ExperimentConfig& cfg, const std::string& method, const TrialData& trial,
                       const Ranks& ranks, Index* iterations = nullptr);

/// Rows in (rank, trial, method) order. Failed cells are reported to `log`
/// (if given) and listed in `failures`.
SweepResult run_sweep(const ExperimentConfig& cfg, std::ostream* log = nullptr);

void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg, const SweepResult& result);

/// "5" when every mode has the same rank, otherwise "5x5x3".
std::string format_ranks(const Ranks& r);

/// 17 significant digits ("%.17g"), so values round-trip; "inf", "-inf", "nan".
std::string format_double(double v);

}  // namespace wtc
