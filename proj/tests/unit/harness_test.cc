// Copyright 2026 The SFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sfl/fl/model.h"
#include "sfl/fl/training.h"
#include "sfl/harness/config.h"
#include "sfl/harness/data.h"
#include "sfl/harness/runner.h"
#include "sfl/ledger/dump.h"
#include "test_util.h"

namespace sfl::harness {
namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("sfl_harness_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

RunConfig SmallRun() {
  RunConfig c;
  c.population = 5;
  c.synthetic_classes = 3;
  c.synthetic_per_class = 60;
  c.synthetic_dim = 4;
  c.test_groups = 3;
  c.max_rounds = 2;
  c.training.batch_size = 16;
  c.training.learning_rate = 0.5;
  c.reward = 1000;
  // Three uniform classes cap the label distance at 4/3.
  c.emd = 1.0;
  return c;
}

TEST(ConfigTest, ParsesTextAndRoundTrips) {
  RunConfig c;
  ApplyConfigText(c, R"(# scenario
seed = 42
p = 20
lambda = 0.3
delta = exp(-5)
sensitivity = inf
sigma_override = 0.25
threshold = aa-auto
model = mlp
hidden = 32,16
)");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.population, 20u);
  EXPECT_DOUBLE_EQ(c.delta, std::exp(-5.0));
  EXPECT_TRUE(std::isinf(c.sensitivity));
  EXPECT_EQ(c.sigma_override, 0.25);
  EXPECT_TRUE(c.aa_auto);
  EXPECT_EQ(c.model, fl::ModelKind::kMlp);
  EXPECT_EQ(c.hidden, (std::vector<std::size_t>{32, 16}));
  RunConfig back;
  ApplyConfigText(back, RenderConfig(c));
  EXPECT_EQ(RenderConfig(back), RenderConfig(c));
  SetConfigValue(back, "sigma-override", "none");
  EXPECT_FALSE(back.sigma_override.has_value());
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  RunConfig c;
  EXPECT_SFL_ERROR(SetConfigValue(c, "colour", "red"), ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(SetConfigValue(c, "seed", "abc"), ErrorCode::kInvalidArgument);
  EXPECT_SFL_ERROR(ApplyConfigText(c, "seed 4\n"), ErrorCode::kParse);
  c.max_rounds = 0;
  EXPECT_SFL_ERROR(c.Validate(), ErrorCode::kInvalidArgument);
  RunConfig d;
  d.mix = threat::Mix{0.5, 0.5, 0.5};
  EXPECT_SFL_ERROR(d.Validate(), ErrorCode::kInvalidArgument);
  EXPECT_FALSE(ConfigKeys().empty());
}

TEST(SyntheticTest, CountsAndDeterminism) {
  const fl::Dataset d = GenerateSynthetic(4, 25, 6, 2.0, 3);
  EXPECT_EQ(d.size(), 100u);
  EXPECT_EQ(d.ClassCounts(), (std::vector<std::size_t>(4, 25)));
  EXPECT_EQ(d, GenerateSynthetic(4, 25, 6, 2.0, 3));
  EXPECT_NE(d, GenerateSynthetic(4, 25, 6, 2.0, 4));
}

double TrainedAccuracy(double separation) {
  const fl::Dataset train = GenerateSynthetic(2, 300, 5, separation, 21);
  const fl::Dataset test = GenerateSynthetic(2, 300, 5, separation, 22);
  const auto spec = fl::ModelSpec::Logistic(5, 2);
  fl::GlobalModel g = fl::InitGlobalModel(spec, 23);
  fl::TrainingConfig cfg;
  cfg.batch_size = 32;
  cfg.learning_rate = 0.5;
  cfg.local_epochs = 10;
  RngStream rng(24);
  g = fl::ApplyUpdate(g, fl::LocalTrain(g, train, cfg, rng));
  return fl::EvaluateAccuracy(g.params, spec, test);
}

TEST(SyntheticTest, SeparationControlsDifficulty) {
  EXPECT_GE(TrainedAccuracy(10.0), 0.99);
  EXPECT_NEAR(TrainedAccuracy(0.0), 0.5, 0.08);
}

void WriteBe32(std::ofstream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                     static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b, 4);
}

void WriteIdx(const std::filesystem::path& images, const std::filesystem::path& labels,
              std::uint32_t image_magic, std::uint32_t n_images, std::uint32_t n_labels,
              std::size_t pixel_bytes) {
  std::ofstream im(images, std::ios::binary);
  WriteBe32(im, image_magic);
  WriteBe32(im, n_images);
  WriteBe32(im, 2);
  WriteBe32(im, 2);
  for (std::size_t i = 0; i < pixel_bytes; ++i) im.put(static_cast<char>(i % 2 ? 255 : 0));
  std::ofstream lb(labels, std::ios::binary);
  WriteBe32(lb, 0x00000801);
  WriteBe32(lb, n_labels);
  for (std::uint32_t i = 0; i < n_labels; ++i) lb.put(static_cast<char>(i % 3));
}

TEST(IdxTest, LoadsAndScalesPixels) {
  TempDir dir("idx_ok");
  const auto im = dir.path() / "img";
  const auto lb = dir.path() / "lbl";
  WriteIdx(im, lb, 0x00000803, 3, 3, 12);
  const fl::Dataset d = LoadIdx(im, lb);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.input_dim(), 4u);
  EXPECT_EQ(d.class_count(), 3u);
  EXPECT_EQ(d.row(0)[0], 0.0);
  EXPECT_EQ(d.row(0)[1], 1.0);
  EXPECT_EQ(d.label(2), 2u);
}

TEST(IdxTest, ReportsMalformedFiles) {
  TempDir dir("idx_bad");
  const auto im = dir.path() / "img";
  const auto lb = dir.path() / "lbl";
  WriteIdx(im, lb, 0x00000802, 3, 3, 12);
  EXPECT_SFL_ERROR(LoadIdx(im, lb), ErrorCode::kParse);
  WriteIdx(im, lb, 0x00000803, 3, 3, 11);
  EXPECT_SFL_ERROR(LoadIdx(im, lb), ErrorCode::kParse);
  WriteIdx(im, lb, 0x00000803, 3, 2, 12);
  EXPECT_SFL_ERROR(LoadIdx(im, lb), ErrorCode::kParse);
  EXPECT_SFL_ERROR(LoadIdx(dir.path() / "missing", lb), ErrorCode::kIo);
}

TEST(RunTest, CompletesAndIsDeterministic) {
  TempDir dir("run");
  const RunResult a = harness::Run(SmallRun(), dir.path());
  const RunResult b = harness::Run(SmallRun());
  EXPECT_EQ(a.final_state.phase, contract::Phase::kFinalized);
  EXPECT_TRUE(a.final_state.posted);
  EXPECT_EQ(a.metrics.size(), 2u);
  EXPECT_EQ(a.final_block_hash, b.final_block_hash);
  EXPECT_EQ(a.summary, b.summary);
  EXPECT_EQ(a.circulating, a.total_supply);
  EXPECT_EQ(contract::Replay(a.events), a.final_state);
  EXPECT_TRUE(ledger::VerifyChain(a.chain));
  for (const char* f : {"metrics.csv", "submissions.csv", "timing.csv", "summary.json",
                        "ledger.json", "config.txt"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / f)) << f;
  }
  const auto accs = ReadMetricsAccuracies(dir.path() / "metrics.csv");
  ASSERT_EQ(accs.size(), a.metrics.size());
  for (std::size_t i = 0; i < accs.size(); ++i) EXPECT_EQ(accs[i], a.metrics[i].global_accuracy);
  EXPECT_TRUE(ledger::VerifyLedgerDump(dir.path() / "ledger.json").ok);
  RunConfig reread;
  ApplyConfigFile(reread, dir.path() / "config.txt");
  EXPECT_EQ(RenderConfig(reread), RenderConfig(SmallRun()));
}

TEST(RunTest, DifferentSeedsDiverge) {
  RunConfig c = SmallRun();
  c.seed = 2;
  EXPECT_NE(harness::Run(c).final_block_hash, harness::Run(SmallRun()).final_block_hash);
}

TEST(AaTest, SameSeedCollapsesTheBand) {
  const AaStats s = ComputeAaThreshold(SmallRun(), 3, {}, true);
  ASSERT_EQ(s.finals.size(), 3u);
  EXPECT_EQ(s.ha, s.ma);
  EXPECT_EQ(s.aa, s.ha);
  const AaStats d = ComputeAaThreshold(SmallRun(), 3);
  EXPECT_LE(d.ma, d.aa);
  EXPECT_LE(d.aa, d.ha);
  EXPECT_EQ(d.seeds.size(), 3u);
}

}  // namespace
}  // namespace sfl::harness
