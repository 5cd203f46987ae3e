// sstk/acoustic.h

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

#ifndef SSTK_ACOUSTIC_H_
#define SSTK_ACOUSTIC_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sstk/corpus.h"
#include "sstk/dsp.h"

namespace sstk {

struct AffineLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

/// Feedforward frame classifier: affine+ReLU hidden layers, then an affine
/// output layer followed by log-softmax. The input is the frame spliced with
/// `context` neighbours on each side (edges replicated), each feature
/// dimension mapped through (x + input_shift) * input_scale.
struct AcousticModel {
  static constexpr uint32_t kFormatVersion = 2;

  int context = 4;
  std::vector<int> labels;  // output index -> label id
  /// Fixed per-dimension input normalisation, feature_dim() entries each.
  Eigen::VectorXd input_shift;
  Eigen::VectorXd input_scale;
  std::vector<AffineLayer> layers;
  /// Free-form lineage record ("key=value;key=value").
  std::string provenance;

  int input_dim() const { return static_cast<int>(layers.front().weight.cols()); }
  int feature_dim() const { return input_dim() / (2 * context + 1); }
  int num_labels() const { return static_cast<int>(labels.size()); }
  std::vector<int> hidden_dims() const;
  /// Output index of a label id, or -1.
  int LabelIndex(int label) const;

  /// Throws if the layer dimensions do not chain or a parameter is not finite.
  void Validate() const;
};

/// `input_dim` must be a multiple of 2 * context + 1. Weights are drawn
/// uniformly in +-sqrt(6 / fan_in) (hidden) or +-sqrt(1 / fan_in) (output);
/// biases start at zero; the input normalisation starts as the identity.
AcousticModel InitModel(int input_dim, std::span<const int> hidden_dims,
                        std::vector<int> labels, int context, uint64_t seed);

/// Spliced network inputs, one column per frame.
Eigen::MatrixXd SpliceFeatures(const FeatureMatrix &feats, int context);

/// frames x n_labels matrix of log-probabilities.
Eigen::MatrixXd Forward(const AcousticModel &model, const FeatureMatrix &feats);
/// Applies the model's input normalisation to spliced inputs.
Eigen::MatrixXd NormalizeInputs(const AcousticModel &model, const Eigen::MatrixXd &inputs);

/// n_labels x frames log-probabilities for already spliced (unnormalised)
/// inputs.
Eigen::MatrixXd ForwardSpliced(const AcousticModel &model,
                               const Eigen::MatrixXd &inputs);

enum class TrainMode { kScratch, kFineTune, kTransfer };
const char *TrainModeName(TrainMode m);
TrainMode ParseTrainMode(const std::string &s);

struct TrainConfig {
  TrainMode mode = TrainMode::kScratch;
  double base_learning_rate = 0.05;
  double fine_tune_lr_scale = 0.1;
  int epochs = 10;
  int batch_size = 128;
  uint64_t seed = 1;
  double l2 = 0.0;

  double EffectiveLearningRate() const;
  void Validate() const;
  /// Canonical text form, hashed into lineage records.
  std::string Describe() const;
};

struct LossAndGradient {
  double loss = 0.0;  // mean cross-entropy + 0.5 * l2 * sum of squared weights
  std::vector<AffineLayer> gradient;
};

/// `targets` are output indices, one per column of `inputs` (spliced,
/// unnormalised).
LossAndGradient ComputeLossAndGradient(const AcousticModel &model,
                                       const Eigen::MatrixXd &inputs,
                                       std::span<const int> targets, double l2);

/// In-place SGD step.
void ApplyGradient(AcousticModel *model, const std::vector<AffineLayer> &gradient,
                   double learning_rate);

struct TrainResult {
  AcousticModel model;
  std::vector<double> epoch_loss;
  double final_frame_accuracy = 0.0;
  long frames = 0;
};

/// Minibatch SGD on frame cross-entropy over every frame of every record.
/// Each record needs frame labels (gold or pseudo) whose ids are in the
/// model's inventory. In scratch mode the input normalisation is first set
/// to the training data's mean and inverse standard deviation; fine-tuning
/// and transfer keep the initial model's. Deterministic in (initial model,
/// data, cfg).
TrainResult Train(const AcousticModel &initial, const Manifest &manifest,
                  FeatureSource &features, const TrainConfig &cfg);

/// Fraction of frames whose argmax label equals the frame label.
double FrameAccuracy(const AcousticModel &model, const Manifest &manifest,
                     FeatureSource &features);

/// Copies the input normalisation and hidden layers bit for bit and replaces
/// the output layer with a fresh one sized for `new_labels`.
AcousticModel TransferOutputLayer(const AcousticModel &model,
                                  std::vector<int> new_labels, uint64_t seed);

std::string SerializeModel(const AcousticModel &model);
AcousticModel DeserializeModel(const std::string &bytes, const std::string &origin);
void SaveModel(const AcousticModel &model, const std::filesystem::path &path);
AcousticModel LoadModel(const std::filesystem::path &path);
/// Hash of the serialized model.
std::string ModelDigest(const AcousticModel &model);

/// Parses the provenance string into its value for `key` ("" if absent).
std::string ProvenanceValue(const AcousticModel &model, const std::string &key);

}  // namespace sstk

#endif  // SSTK_ACOUSTIC_H_
