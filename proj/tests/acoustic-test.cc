// tests/acoustic-test.cc

// Copyright 2026  The sstk Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "sstk/acoustic.h"
#include "test-util.h"

namespace sstk {
namespace {

// Toy two-label data: label 1 iff the first feature is positive.
struct Toy {
  Manifest manifest;
  InMemoryFeatureSource features{2};
};

void MakeToy(Toy *toy, int n_utts, int frames, uint64_t seed) {
  Rng rng(seed);
  std::vector<UtteranceRecord> recs;
  for (int u = 0; u < n_utts; u++) {
    UtteranceRecord r;
    r.id = "t" + std::to_string(u);
    r.audio = r.id + ".wav";
    FeatureMatrix m;
    m.frames = frames;
    m.dim = 2;
    std::vector<int> labels;
    for (int f = 0; f < frames; f++) {
      double x = rng.Uniform(-1, 1);
      if (std::abs(x) < 0.05) x = x < 0 ? -0.05 : 0.05;
      m.values.push_back(x);
      m.values.push_back(rng.Uniform(-1, 1));
      labels.push_back(x > 0 ? 1 : 0);
    }
    r.frame_labels = labels;
    r.transcript = CollapseToTokens(labels);
    toy->features.Add(r.id, m);
    recs.push_back(r);
  }
  toy->manifest = Manifest("toy", recs);
}

Eigen::MatrixXd RandomInputs(Rng *rng, int rows, int cols) {
  Eigen::MatrixXd x(rows, cols);
  for (int i = 0; i < rows; i++)
    for (int j = 0; j < cols; j++) x(i, j) = rng->Gaussian();
  return x;
}

TEST(Acoustic, InitIsDeterministic) {
  std::vector<int> hidden{8, 6};
  AcousticModel a = InitModel(3 * 5, hidden, {0, 1, 2}, 2, 42);
  AcousticModel b = InitModel(3 * 5, hidden, {0, 1, 2}, 2, 42);
  AcousticModel c = InitModel(3 * 5, hidden, {0, 1, 2}, 2, 43);
  EXPECT_EQ(SerializeModel(a), SerializeModel(b));
  EXPECT_NE(SerializeModel(a), SerializeModel(c));
  EXPECT_EQ(a.hidden_dims(), hidden);
  EXPECT_EQ(a.feature_dim(), 3);
  EXPECT_EQ(a.LabelIndex(2), 2);
  EXPECT_EQ(a.LabelIndex(9), -1);
  EXPECT_THROW(InitModel(7, hidden, {0, 1}, 2, 1), Error);
  std::vector<int> zero{0};
  EXPECT_THROW(InitModel(5, zero, {0, 1}, 2, 1), Error);
}

TEST(Acoustic, ForwardRowsAreDistributions) {
  for (int trial = 0; trial < 20; trial++) {
    Rng rng(trial);
    std::vector<int> hidden;
    int depth = static_cast<int>(rng.UniformRange(0, 2));
    for (int i = 0; i < depth; i++) hidden.push_back(static_cast<int>(rng.UniformRange(1, 10)));
    int dim = static_cast<int>(rng.UniformRange(1, 4));
    int ctx = static_cast<int>(rng.UniformRange(0, 2));
    int k = static_cast<int>(rng.UniformRange(2, 6));
    std::vector<int> labels;
    for (int i = 0; i < k; i++) labels.push_back(i);
    AcousticModel m = InitModel(dim * (2 * ctx + 1), hidden, labels, ctx, trial);
    FeatureMatrix f;
    f.dim = dim;
    f.frames = static_cast<int>(rng.UniformRange(1, 12));
    for (int i = 0; i < f.frames * dim; i++) f.values.push_back(rng.Gaussian() * 3);
    Eigen::MatrixXd lp = Forward(m, f);
    ASSERT_EQ(lp.rows(), f.frames);
    ASSERT_EQ(lp.cols(), k);
    for (int r = 0; r < lp.rows(); r++) EXPECT_NEAR(lp.row(r).array().exp().sum(), 1.0, 1e-6);
    EXPECT_EQ(Forward(m, f), lp);
  }
}

TEST(Acoustic, ZeroOutputLayerIsUniform) {
  std::vector<int> hidden{5};
  AcousticModel m = InitModel(3, hidden, {0, 1, 2, 3}, 1, 7);
  m.layers.back().weight.setZero();
  FeatureMatrix f;
  f.dim = 1;
  f.frames = 4;
  f.values = {0.1, -2, 3, 0.5};
  Eigen::MatrixXd lp = Forward(m, f);
  for (int r = 0; r < 4; r++)
    for (int c = 0; c < 4; c++) EXPECT_NEAR(lp(r, c), -std::log(4.0), 1e-12);
}

TEST(Acoustic, ForwardDimensionMismatch) {
  std::vector<int> hidden{};
  AcousticModel m = InitModel(6, hidden, {0, 1}, 1, 1);
  FeatureMatrix f;
  f.dim = 3;
  f.frames = 1;
  f.values = {1, 2, 3};
  EXPECT_THROW(Forward(m, f), Error);
}

TEST(Acoustic, SpliceReplicatesEdges) {
  FeatureMatrix f;
  f.dim = 1;
  f.frames = 3;
  f.values = {1, 2, 3};
  Eigen::MatrixXd s = SpliceFeatures(f, 2);
  ASSERT_EQ(s.rows(), 5);
  ASSERT_EQ(s.cols(), 3);
  EXPECT_EQ(s.col(0), (Eigen::VectorXd(5) << 1, 1, 1, 2, 3).finished());
  EXPECT_EQ(s.col(2), (Eigen::VectorXd(5) << 1, 2, 3, 3, 3).finished());
}

TEST(Acoustic, GradientMatchesFiniteDifferences) {
  for (int trial = 0; trial < 10; trial++) {
    Rng rng(1000 + trial);
    std::vector<int> hidden{static_cast<int>(rng.UniformRange(2, 6)),
                            static_cast<int>(rng.UniformRange(2, 6))};
    hidden.resize(rng.UniformRange(0, 2));
    int k = static_cast<int>(rng.UniformRange(2, 5));
    std::vector<int> labels;
    for (int i = 0; i < k; i++) labels.push_back(i);
    AcousticModel m = InitModel(2 * 3, hidden, labels, 1, trial);
    for (Eigen::Index d = 0; d < m.input_shift.size(); d++) {
      m.input_shift(d) = rng.Gaussian() * 0.1;
      m.input_scale(d) = rng.Uniform(0.5, 2.0);
    }
    // Non-zero biases keep pre-activations off the ReLU kink at exactly 0.
    for (AffineLayer &l : m.layers)
      for (Eigen::Index i = 0; i < l.bias.size(); i++) l.bias(i) = rng.Gaussian() * 0.1;
    Eigen::MatrixXd x = RandomInputs(&rng, 6, 3);
    std::vector<int> t;
    for (int i = 0; i < 3; i++) t.push_back(static_cast<int>(rng.UniformInt(k)));
    double l2 = trial % 2 ? 0.01 : 0.0;
    EXPECT_LT(testing::GradientCheckError(m, x, t, l2), 1e-4) << "trial " << trial;
  }
}

TEST(Acoustic, SmallStepDescends) {
  for (int trial = 0; trial < 10; trial++) {
    Rng rng(trial);
    std::vector<int> hidden{6};
    AcousticModel m = InitModel(4, hidden, {0, 1, 2}, 0, trial);
    Eigen::MatrixXd x = RandomInputs(&rng, 4, 8);
    std::vector<int> t;
    for (int i = 0; i < 8; i++) t.push_back(static_cast<int>(rng.UniformInt(3)));
    LossAndGradient before = ComputeLossAndGradient(m, x, t, 0.0);
    ApplyGradient(&m, before.gradient, 1e-4);
    double after = ComputeLossAndGradient(m, x, t, 0.0).loss;
    EXPECT_LE(after, before.loss + 1e-8);
  }
}

TEST(Acoustic, LossRejectsBadTargets) {
  std::vector<int> hidden{};
  AcousticModel m = InitModel(2, hidden, {0, 1}, 0, 1);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, 2);
  std::vector<int> t{0, 5};
  EXPECT_THROW(ComputeLossAndGradient(m, x, t, 0.0), Error);
  std::vector<int> short_t{0};
  EXPECT_THROW(ComputeLossAndGradient(m, x, short_t, 0.0), Error);
}

TEST(Acoustic, LearnsSeparableToy) {
  Toy toy;
  MakeToy(&toy, 20, 30, 3);
  std::vector<int> hidden{16};
  AcousticModel init = InitModel(2 * 3, hidden, {0, 1}, 1, 5);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch_size = 16;
  cfg.base_learning_rate = 0.1;
  cfg.seed = 9;
  TrainResult r = Train(init, toy.manifest, toy.features, cfg);
  ASSERT_EQ(r.epoch_loss.size(), 20u);
  for (double l : r.epoch_loss) EXPECT_TRUE(std::isfinite(l));
  EXPECT_LT(r.epoch_loss.back(), r.epoch_loss.front());
  EXPECT_GT(r.final_frame_accuracy, 0.95);
  EXPECT_DOUBLE_EQ(FrameAccuracy(r.model, toy.manifest, toy.features), r.final_frame_accuracy);
  EXPECT_EQ(ProvenanceValue(r.model, "mode"), "scratch");
  EXPECT_EQ(ProvenanceValue(r.model, "label_sources"), "gold");

  TrainResult again = Train(init, toy.manifest, toy.features, cfg);
  EXPECT_EQ(SerializeModel(again.model), SerializeModel(r.model));
}

TEST(Acoustic, ScratchFitsNormalisationFineTuneKeepsIt) {
  Toy toy;
  MakeToy(&toy, 5, 20, 4);
  std::vector<int> hidden{4};
  AcousticModel init = InitModel(2, hidden, {0, 1}, 0, 5);
  TrainConfig cfg;
  cfg.epochs = 1;
  TrainResult r = Train(init, toy.manifest, toy.features, cfg);
  EXPECT_NE(r.model.input_shift, init.input_shift);
  cfg.mode = TrainMode::kFineTune;
  TrainResult ft = Train(r.model, toy.manifest, toy.features, cfg);
  EXPECT_EQ(ft.model.input_shift, r.model.input_shift);
  EXPECT_EQ(ft.model.input_scale, r.model.input_scale);
  EXPECT_EQ(ProvenanceValue(ft.model, "parent"), ModelDigest(r.model));
}

TEST(Acoustic, FineTuneWithZeroScaleLeavesParameters) {
  Toy toy;
  MakeToy(&toy, 4, 10, 6);
  std::vector<int> hidden{4};
  AcousticModel init = InitModel(2 * 3, hidden, {0, 1}, 1, 5);
  TrainConfig cfg;
  cfg.mode = TrainMode::kFineTune;
  cfg.fine_tune_lr_scale = 0.0;
  cfg.epochs = 3;
  EXPECT_EQ(cfg.EffectiveLearningRate(), 0.0);
  TrainResult r = Train(init, toy.manifest, toy.features, cfg);
  for (size_t l = 0; l < init.layers.size(); l++) {
    EXPECT_EQ(r.model.layers[l].weight, init.layers[l].weight);
    EXPECT_EQ(r.model.layers[l].bias, init.layers[l].bias);
  }
  cfg.fine_tune_lr_scale = 0.25;
  cfg.base_learning_rate = 0.2;
  EXPECT_DOUBLE_EQ(cfg.EffectiveLearningRate(), 0.05);
  cfg.fine_tune_lr_scale = 1.0;
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(Acoustic, TrainErrors) {
  Toy toy;
  MakeToy(&toy, 2, 5, 1);
  std::vector<int> hidden{};
  AcousticModel m = InitModel(2, hidden, {0, 1}, 0, 1);
  TrainConfig cfg;
  EXPECT_THROW(Train(m, Manifest(), toy.features, cfg), Error);
  AcousticModel only_sil = InitModel(2, hidden, {0, 7}, 0, 1);
  try {
    Train(only_sil, toy.manifest, toy.features, cfg);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
  UtteranceRecord bare;
  bare.id = "t0";
  bare.audio = "x";
  EXPECT_THROW(Train(m, Manifest("b", {bare}), toy.features, cfg), Error);
}

TEST(Acoustic, TransferKeepsHiddenLayers) {
  std::vector<int> hidden{5, 4};
  std::vector<int> eleven;
  for (int i = 0; i < 11; i++) eleven.push_back(i);
  AcousticModel m = InitModel(9, hidden, eleven, 1, 3);
  m.input_shift.setConstant(0.5);
  AcousticModel same = TransferOutputLayer(m, eleven, 99);
  AcousticModel seven = TransferOutputLayer(m, {0, 1, 2, 3, 4, 5, 6}, 99);
  for (size_t l = 0; l + 1 < m.layers.size(); l++) {
    EXPECT_EQ(same.layers[l].weight, m.layers[l].weight);
    EXPECT_EQ(same.layers[l].bias, m.layers[l].bias);
    EXPECT_EQ(seven.layers[l].weight, m.layers[l].weight);
  }
  EXPECT_NE(same.layers.back().weight, m.layers.back().weight);
  EXPECT_EQ(seven.layers.back().weight.rows(), 7);
  EXPECT_EQ(seven.num_labels(), 7);
  EXPECT_EQ(seven.input_shift, m.input_shift);
  EXPECT_THROW(TransferOutputLayer(m, {}, 1), Error);
}

TEST(Acoustic, SaveLoadIsExact) {
  testing::TempDir dir("acoustic");
  std::vector<int> hidden{7, 3};
  AcousticModel m = InitModel(4 * 3, hidden, {0, 2, 5}, 1, 8);
  m.input_scale.setConstant(1.0 / 3.0);
  m.provenance = "mode=scratch;x=y";
  SaveModel(m, dir / "m.bin");
  AcousticModel r = LoadModel(dir / "m.bin");
  EXPECT_EQ(SerializeModel(r), SerializeModel(m));
  EXPECT_EQ(ModelDigest(r), ModelDigest(m));
  EXPECT_EQ(ProvenanceValue(r, "x"), "y");
  EXPECT_EQ(ProvenanceValue(r, "absent"), "");
  FeatureMatrix f;
  f.dim = 4;
  f.frames = 5;
  Rng rng(1);
  for (int i = 0; i < 20; i++) f.values.push_back(rng.Gaussian());
  EXPECT_EQ(Forward(r, f), Forward(m, f));
}

TEST(Acoustic, CorruptFilesAreRejected) {
  std::vector<int> hidden{3};
  std::string bytes = SerializeModel(InitModel(3, hidden, {0, 1}, 1, 8));
  for (size_t cut : {0ul, 4ul, 10ul, bytes.size() / 2, bytes.size() - 1}) {
    try {
      DeserializeModel(bytes.substr(0, cut), "cut.bin");
      FAIL() << cut;
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::kData);
    }
  }
  EXPECT_THROW(DeserializeModel(bytes + "x", "long.bin"), Error);

  std::string old = bytes;
  old[8] = 1;  // version field follows the 8-byte magic
  try {
    DeserializeModel(old, "old.bin");
    FAIL();
  } catch (const Error &e) {
    std::string what = e.what();
    EXPECT_NE(what.find("version 1"), std::string::npos) << what;
    EXPECT_NE(what.find("version " + std::to_string(AcousticModel::kFormatVersion)),
              std::string::npos)
        << what;
  }
}

}  // namespace
}  // namespace sstk
