// SPDX-License-Identifier: Apache-2.0
#include "wtc/error.hpp"
#include "wtc/experiment.hpp"
#include "wtc/io.hpp"
#include "wtc/rng.hpp"
#include "wtc/synthetic.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include <bit>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

using namespace wtc;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("wtc_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string ppm(int w, int h, unsigned char fill, const std::string& comment = "") {
  std::string s = "P6\n" + comment + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  s.append(static_cast<std::size_t>(w * h * 3), static_cast<char>(fill));
  return s;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.shape = Shape{8, 8, 8};
  cfg.rank_sweep = {{2, 2, 2}};
  cfg.trials = 1;
  cfg.methods = {"hosvd_w"};
  return cfg;
}

}  // namespace

TEST(TensorIo, RoundTripBitExact) {
  std::mt19937_64 gen(81);
  DenseTensor t = oracle::random_tensor(Shape{3, 1, 4, 2}, gen);
  t[0] = -0.0;
  t[1] = std::numeric_limits<double>::denorm_min();
  t[2] = std::numeric_limits<double>::infinity();
  const DenseTensor back = decode_tensor(encode_tensor(t));
  ASSERT_EQ(back.shape(), t.shape());
  for (Index i = 0; i < t.size(); ++i)
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i]), std::bit_cast<std::uint64_t>(t[i]));
  TempDir dir;
  save_tensor(dir.path() / "t.bin", t);
  EXPECT_EQ(encode_tensor(load_tensor(dir.path() / "t.bin")), encode_tensor(t));
}

TEST(TensorIo, LayoutIsLittleEndian) {
  const std::string b = encode_tensor(DenseTensor(Shape{2}, std::vector<double>{1.0, -2.0}));
  ASSERT_EQ(b.size(), 4u + 4 + 8 + 16);
  EXPECT_EQ(b.substr(0, 4), "TEN1");
  EXPECT_EQ(static_cast<unsigned char>(b[4]), 1u);
  EXPECT_EQ(static_cast<unsigned char>(b[8]), 2u);
  // 1.0 = 0x3FF0000000000000, highest byte last.
  EXPECT_EQ(static_cast<unsigned char>(b[16 + 7]), 0x3Fu);
  EXPECT_EQ(static_cast<unsigned char>(b[16 + 6]), 0xF0u);
}

TEST(TensorIo, TruncationNamesMissingBytes) {
  const std::string b = encode_tensor(DenseTensor(Shape{3, 2}, 1.5));
  try {
    decode_tensor(std::string_view(b).substr(0, b.size() - 5));
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("missing 5 bytes"), std::string::npos) << e.what();
  }
  EXPECT_THROW(decode_tensor("TEN"), FormatError);
  EXPECT_THROW(decode_tensor("XXXX" + b.substr(4)), FormatError);
  EXPECT_THROW(decode_tensor(b + "x"), FormatError);
}

TEST(PatternIo, RoundTrip) {
  const SamplingPattern p = uniform_pattern(Shape{5, 4, 3}, 0.4, 2);
  EXPECT_EQ(decode_pattern(encode_pattern(p)), p);
  const SamplingPattern e = SamplingPattern::empty(Shape{2, 2});
  EXPECT_EQ(decode_pattern(encode_pattern(e)), e);
  TempDir dir;
  save_pattern(dir.path() / "p.bin", p);
  EXPECT_EQ(load_pattern(dir.path() / "p.bin"), p);
  const std::string b = encode_pattern(p);
  EXPECT_EQ(b.substr(0, 4), "PAT1");
  EXPECT_THROW(decode_pattern(b.substr(0, b.size() - 8)), FormatError);
}

TEST(PatternIo, EntriesLexicographic) {
  const Shape s{3, 2};
  // Offsets 1 = (1,0), 2 = (2,0), 4 = (1,1); offset order is not lexicographic.
  const SamplingPattern p(s, {4, 1, 2});
  const std::string b = encode_pattern(p);
  auto u64 = [&](std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[at + static_cast<std::size_t>(i)]);
    return v;
  };
  const std::size_t base = 4 + 4 + 2 * 8;
  EXPECT_EQ(u64(base), 3u);
  const std::vector<std::uint64_t> expect{1, 0, 1, 1, 2, 0};
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(u64(base + 8 + 8 * i), expect[i]);
}

TEST(WeightIo, RoundTrip) {
  const WeightFit fit = fit_rank1_weight(uniform_pattern(Shape{6, 5, 4}, 0.3, 3));
  const Rank1Weight back = decode_weight(encode_weight(fit.weight));
  EXPECT_EQ(back.floor(), fit.weight.floor());
  ASSERT_EQ(back.factors().size(), 3u);
  for (Index k = 0; k < 3; ++k) EXPECT_EQ(back.factors()[k], fit.weight.factors()[k]);
  const std::string b = encode_weight(fit.weight);
  EXPECT_EQ(b.substr(0, 4), "W8T1");
  EXPECT_THROW(decode_weight(b.substr(0, 20)), FormatError);
}

TEST(FileIo, MissingFile) {
  EXPECT_THROW(read_file("/nonexistent/dir/x.bin"), ArgumentError);
  EXPECT_THROW(load_tensor("/nonexistent/dir/x.bin"), ArgumentError);
}

TEST(Ppm, DecodeWithComment) {
  std::string img = ppm(2, 1, 0, "# made by hand\n");
  img[img.size() - 6] = static_cast<char>(255);  // pixel (0,0) red
  img[img.size() - 1] = static_cast<char>(51);   // pixel (1,0) blue
  const DenseTensor t = decode_ppm(img);
  ASSERT_EQ(t.shape(), (Shape{1, 2, 3}));
  EXPECT_EQ(t.at({0, 0, 0}), 1.0);
  EXPECT_EQ(t.at({0, 0, 1}), 0.0);
  EXPECT_EQ(t.at({0, 1, 2}), 0.2);
}

TEST(Ppm, Errors) {
  EXPECT_THROW(decode_ppm("P5\n1 1\n255\n\x01"), FormatError);
  EXPECT_THROW(decode_ppm("P6\n1 1\n65535\n"), FormatError);
  const std::string img = ppm(2, 2, 7);
  try {
    decode_ppm(std::string_view(img).substr(0, img.size() - 4));
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("missing 4 bytes"), std::string::npos) << e.what();
  }
}

TEST(Ppm, WhiteStack) {
  TempDir dir;
  write_file(dir.path() / "f000.ppm", ppm(2, 2, 255));
  write_file(dir.path() / "f001.ppm", ppm(2, 2, 255));
  write_file(dir.path() / "notes.txt", "ignored");
  const DenseTensor t = load_ppm_stack({dir.path(), 0, 1});
  EXPECT_EQ(t, DenseTensor::ones(Shape{2, 2, 3, 2}));
  EXPECT_EQ(load_ppm_stack({dir.path(), 1, 1}).shape(), (Shape{2, 2, 3, 1}));
}

TEST(Ppm, DownscaleAveragesBlocks) {
  TempDir dir;
  std::string img = ppm(2, 2, 0);
  const std::size_t px = img.size() - 12;
  for (std::size_t c = 0; c < 3; ++c) img[px + c] = static_cast<char>(204);  // top-left pixel
  write_file(dir.path() / "a.ppm", img);
  const DenseTensor t = load_ppm_stack({dir.path(), 0, 2});
  ASSERT_EQ(t.shape(), (Shape{1, 1, 3, 1}));
  for (Index c = 0; c < 3; ++c) EXPECT_NEAR(t[c], 0.2, 1e-15);
}

TEST(Ppm, MismatchedFramesRejected) {
  TempDir dir;
  write_file(dir.path() / "a.ppm", ppm(2, 2, 1));
  write_file(dir.path() / "b.ppm", ppm(3, 2, 1));
  EXPECT_ANY_THROW(load_ppm_stack({dir.path(), 0, 1}));
}

TEST(Rng, StreamsAndDerivedSeeds) {
  Rng a(5, Stream::Pattern), b(5, Stream::Pattern), c(5, Stream::Noise);
  const double x = a.uniform();
  EXPECT_EQ(x, b.uniform());
  EXPECT_NE(x, c.uniform());
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
}

TEST(Synthetic, RankOneIsOuterProduct) {
  const DenseTensor t = gen_synthetic(Shape{5, 4, 3}, {1, 1, 1}, 4);
  for (Index k = 0; k < 3; ++k) {
    const Eigen::VectorXd s = oracle::singular_values(oracle::unfold(t, k));
    EXPECT_LT(s(1), 1e-12 * s(0));
  }
  const DenseTensor full = gen_synthetic(Shape{5, 4, 3}, {5, 4, 3}, 4);
  const Eigen::VectorXd s0 = oracle::singular_values(oracle::unfold(full, 0));
  EXPECT_GT(s0(4), 1e-6 * s0(0));
  EXPECT_THROW(gen_synthetic(Shape{5, 4, 3}, {6, 1, 1}, 4), ArgumentError);
}

TEST(Config, JsonRoundTripAndDefaults) {
  ExperimentConfig cfg = config_from_json("{}");
  EXPECT_EQ(cfg.shape, (Shape{40, 40, 40}));
  EXPECT_EQ(cfg.trials, 20u);
  EXPECT_EQ(cfg.sampling_rate, 0.3);
  EXPECT_EQ(cfg.sigma, 1e-2);
  cfg = config_from_json(R"({"shape":[10,9,8],"rank_sweep":[2,[1,2,3]],"pattern":"block-rank1",
    "methods":["hosvd","tv:zero"],"input_rank":"sv:0.1","bounds":true,"seed":7,
    "tv":{"h":0.01,"lambda":0.2,"max_iters":30,"tol":1e-3,"init":"hosvd"}})");
  EXPECT_EQ(cfg.shape, (Shape{10, 9, 8}));
  ASSERT_EQ(cfg.rank_sweep.size(), 2u);
  EXPECT_EQ(cfg.rank_sweep[0], (Ranks{2, 2, 2}));
  EXPECT_EQ(cfg.rank_sweep[1], (Ranks{1, 2, 3}));
  EXPECT_EQ(cfg.pattern, PatternKind::Block);
  EXPECT_TRUE(cfg.sv_rank);
  EXPECT_EQ(cfg.sv_tau, 0.1);
  EXPECT_TRUE(cfg.bounds);
  EXPECT_EQ(cfg.tv.step, 0.01);
  EXPECT_EQ(cfg.tv_init, TvInit::Hosvd);
  const ExperimentConfig again = config_from_json(config_to_json(cfg));
  EXPECT_EQ(config_to_json(again), config_to_json(cfg));
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, Rejections) {
  EXPECT_THROW(config_from_json("{"), FormatError);
  EXPECT_THROW(config_from_json("[]"), FormatError);
  EXPECT_THROW(config_from_json(R"({"pattern":"spiral"})"), ArgumentError);
  EXPECT_THROW(config_from_json(R"({"input_rank":"maybe"})"), ArgumentError);
  ExperimentConfig cfg = small_config();
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = small_config();
  cfg.rank_sweep = {{9, 2, 2}};
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = small_config();
  cfg.methods = {"magic"};
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = small_config();
  cfg.rank_sweep.clear();
  EXPECT_THROW(cfg.validate(), ArgumentError);
}

TEST(Formatting, RanksAndDoubles) {
  EXPECT_EQ(format_ranks({5, 5, 5}), "5");
  EXPECT_EQ(format_ranks({5, 5, 3}), "5x5x3");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(parse_pattern_kind("uniform"), PatternKind::Uniform);
  EXPECT_EQ(to_string(PatternKind::Block), "block");
  EXPECT_EQ(parse_tv_init(to_string(TvInit::HosvdW)), TvInit::HosvdW);
  EXPECT_EQ(default_sv_max_rank(Shape{40, 30, 50}), 15u);
  EXPECT_EQ(default_sv_max_rank(Shape{1, 3}), 1u);
}

TEST(Sweep, SingleRow) {
  const ExperimentConfig cfg = small_config();
  const SweepResult r = run_sweep(cfg);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.rows[0].method, "hosvd_w");
  EXPECT_EQ(r.rows[0].seed, trial_seed(cfg, 0, 0));
  std::ostringstream os;
  write_sweep_csv(os, cfg, r);
  EXPECT_EQ(count_lines(os.str()), 2u);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "seed,shape,rank,SR,pattern_kind,method,weighted_rel_error,rel_error,snr_db,wall_time_ms");
}

TEST(Sweep, RowCountArithmetic) {
  ExperimentConfig cfg;
  cfg.shape = Shape{6, 6, 6};
  for (Index r = 2; r <= 10; ++r) {
    const Index c = std::min<Index>(r, 6);
    cfg.rank_sweep.push_back({c, c, c});
  }
  cfg.trials = 20;
  const SweepResult res = run_sweep(cfg);
  EXPECT_EQ(res.rows.size() + res.failures.size(), 540u);
  EXPECT_EQ(res.rows.size(), 540u);
  // (rank, trial, method) order.
  EXPECT_EQ(res.rows[0].method, "hosvd");
  EXPECT_EQ(res.rows[1].method, "hosvd_p");
  EXPECT_EQ(res.rows[2].method, "hosvd_w");
  EXPECT_EQ(res.rows[3].seed, trial_seed(cfg, 0, 1));
  EXPECT_EQ(res.rows[60].rank, (Ranks{3, 3, 3}));
}

TEST(Sweep, DeterministicCsv) {
  ExperimentConfig cfg = small_config();
  cfg.methods = {"hosvd", "hosvd_p", "hosvd_w", "cp", "tv"};
  cfg.cp.outer_iters = 5;
  cfg.tv.max_iters = 5;
  cfg.trials = 2;
  cfg.bounds = true;
  auto strip = [](const SweepResult& r) {
    std::vector<std::string> out;
    for (const auto& row : r.rows)
      out.push_back(row.method + format_double(row.errors.weighted_rel_error) +
                    format_double(row.errors.snr_db) + format_double(row.thmB1_bound));
    return out;
  };
  const SweepResult a = run_sweep(cfg), b = run_sweep(cfg);
  EXPECT_EQ(strip(a), strip(b));
  ASSERT_EQ(a.rows.size(), 10u);
  EXPECT_EQ(a.rows[4].method, "tv:hosvd_w");
  std::ostringstream os;
  write_sweep_csv(os, cfg, a);
  const std::string header = os.str().substr(0, os.str().find('\n'));
  EXPECT_NE(header.find(",weighted_abs_error,thm1_bound,thmB1_bound"), std::string::npos);
}

TEST(Sweep, SvRankColumn) {
  ExperimentConfig cfg = small_config();
  cfg.sv_rank = true;
  const SweepResult r = run_sweep(cfg);
  ASSERT_EQ(r.rows.size(), 1u);
  for (Index v : r.rows[0].input_rank) {
    EXPECT_GE(v, 1u);
    EXPECT_LE(v, default_sv_max_rank(cfg.shape));
  }
  std::ostringstream os;
  write_sweep_csv(os, cfg, r);
  EXPECT_NE(os.str().find(",input_rank\n"), std::string::npos);
}

TEST(Sweep, FailedCellsAreLogged) {
  ExperimentConfig cfg = small_config();
  cfg.methods = {"tv"};
  cfg.tv.step = 1e300;
  cfg.tv.threshold = 0.0;
  cfg.tv_init = TvInit::Zero;
  cfg.sigma = 1e140;
  std::ostringstream log;
  const SweepResult r = run_sweep(cfg, &log);
  EXPECT_TRUE(r.rows.empty());
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].method, "tv:zero");
  EXPECT_EQ(r.failures[0].trial, 0u);
  EXPECT_NE(log.str().find("failed: rank 2 trial 0 method tv:zero"), std::string::npos) << log.str();
}

TEST(Trial, BlockPatternHitsRate) {
  ExperimentConfig cfg;
  cfg.pattern = PatternKind::Block;
  cfg.rank_sweep = {{3, 3, 3}};
  const TrialData t = make_trial(cfg, {3, 3, 3}, 11);
  EXPECT_NEAR(t.pattern.rate(), 0.3, 0.01);
  const DenseTensor w = t.weight.dense();
  EXPECT_GE(*std::min_element(w.values().begin(), w.values().end()), cfg.weight_fit.floor);
  for (Index off = 0; off < t.observed.size(); ++off)
    if (!t.pattern.contains(off)) {
      ASSERT_EQ(t.observed[off], 0.0);
    }
}
