// acoustic.cc

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

#include "sstk/acoustic.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "sstk/common.h"
#include "sstk/log.h"

namespace sstk {

std::vector<int> AcousticModel::hidden_dims() const {
  std::vector<int> dims;
  for (size_t i = 0; i + 1 < layers.size(); ++i)
    dims.push_back(static_cast<int>(layers[i].weight.rows()));
  return dims;
}

int AcousticModel::LabelIndex(int label) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

void AcousticModel::Validate() const {
  if (layers.empty()) Fail(ErrorKind::kData, "acoustic model has no layers");
  if (context < 0) Fail(ErrorKind::kData, "acoustic model has negative context");
  if (input_dim() % (2 * context + 1) != 0)
    Fail(ErrorKind::kData, "input dim ", input_dim(),
         " is not a multiple of the splice width ", 2 * context + 1);
  for (size_t i = 0; i < layers.size(); ++i) {
    const AffineLayer &l = layers[i];
    if (l.bias.size() != l.weight.rows())
      Fail(ErrorKind::kData, "layer ", i, ": bias size mismatch");
    if (i > 0 && l.weight.cols() != layers[i - 1].weight.rows())
      Fail(ErrorKind::kData, "layer ", i, ": input dim ", l.weight.cols(),
           " does not match previous output ", layers[i - 1].weight.rows());
    if (!l.weight.allFinite() || !l.bias.allFinite())
      Fail(ErrorKind::kData, "layer ", i, ": non-finite parameters");
  }
  const Eigen::Index fd = feature_dim();
  if (input_shift.size() != fd || input_scale.size() != fd)
    Fail(ErrorKind::kData, "input normalisation has ", input_shift.size(), "/",
         input_scale.size(), " entries for feature dim ", fd);
  if (!input_shift.allFinite() || !input_scale.allFinite() || (input_scale.array() <= 0.0).any())
    Fail(ErrorKind::kData, "input normalisation must be finite with positive scales");
  if (layers.back().weight.rows() != num_labels())
    Fail(ErrorKind::kData, "output layer has ", layers.back().weight.rows(),
         " rows but the inventory has ", num_labels(), " labels");
  std::set<int> uniq(labels.begin(), labels.end());
  if (uniq.size() != labels.size())
    Fail(ErrorKind::kData, "label inventory has duplicates");
}

namespace {

AffineLayer InitLayer(int in, int out, double bound, Rng *rng) {
  AffineLayer l;
  l.weight.resize(out, in);
  // Column-major fill order is part of the determinism contract.
  for (int c = 0; c < in; ++c)
    for (int r = 0; r < out; ++r) l.weight(r, c) = rng->Uniform(-bound, bound);
  l.bias = Eigen::VectorXd::Zero(out);
  return l;
}

}  // namespace

AcousticModel InitModel(int input_dim, std::span<const int> hidden_dims,
                        std::vector<int> labels, int context, uint64_t seed) {
  if (input_dim <= 0 || labels.empty() || context < 0)
    Fail(ErrorKind::kConfig, "init_model: dimensions must be positive");
  if (input_dim % (2 * context + 1) != 0)
    Fail(ErrorKind::kConfig, "init_model: input dim ", input_dim,
         " is not a multiple of the splice width ", 2 * context + 1);
  for (int h : hidden_dims)
    if (h <= 0) Fail(ErrorKind::kConfig, "init_model: hidden dims must be positive");
  Rng rng(seed);
  AcousticModel model;
  model.context = context;
  model.labels = std::move(labels);
  int in = input_dim;
  for (int h : hidden_dims) {
    model.layers.push_back(InitLayer(in, h, std::sqrt(6.0 / in), &rng));
    in = h;
  }
  model.layers.push_back(InitLayer(in, model.num_labels(), std::sqrt(1.0 / in), &rng));
  const int feature_dim = input_dim / (2 * context + 1);
  model.input_shift = Eigen::VectorXd::Zero(feature_dim);
  model.input_scale = Eigen::VectorXd::Ones(feature_dim);
  model.provenance = "origin=init;seed=" + std::to_string(seed);
  model.Validate();
  return model;
}

Eigen::MatrixXd SpliceFeatures(const FeatureMatrix &feats, int context) {
  const int width = 2 * context + 1;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(feats.dim) * width, feats.frames);
  for (int t = 0; t < feats.frames; ++t) {
    for (int o = -context; o <= context; ++o) {
      const int src = std::clamp(t + o, 0, feats.frames - 1);
      std::span<const double> row = feats.Row(src);
      for (int d = 0; d < feats.dim; ++d)
        out((o + context) * feats.dim + d, t) = row[d];
    }
  }
  return out;
}

namespace {

// Column-wise log-softmax in place.
void LogSoftmaxColumns(Eigen::MatrixXd *z) {
  for (Eigen::Index c = 0; c < z->cols(); ++c) {
    auto col = z->col(c);
    const double m = col.maxCoeff();
    const double lse = m + std::log((col.array() - m).exp().sum());
    col.array() -= lse;
  }
}

}  // namespace

Eigen::MatrixXd NormalizeInputs(const AcousticModel &model, const Eigen::MatrixXd &inputs) {
  const Eigen::Index fd = model.feature_dim();
  Eigen::MatrixXd out(inputs.rows(), inputs.cols());
  for (Eigen::Index r = 0; r < inputs.rows(); ++r)
    out.row(r) = (inputs.row(r).array() + model.input_shift(r % fd)) * model.input_scale(r % fd);
  return out;
}

Eigen::MatrixXd ForwardSpliced(const AcousticModel &model,
                               const Eigen::MatrixXd &inputs) {
  if (inputs.rows() != model.input_dim())
    Fail(ErrorKind::kData, "forward: input dim ", inputs.rows(),
         " does not match model input dim ", model.input_dim());
  Eigen::MatrixXd a = NormalizeInputs(model, inputs);
  for (size_t i = 0; i < model.layers.size(); ++i) {
    const AffineLayer &l = model.layers[i];
    Eigen::MatrixXd z = l.weight * a;
    z.colwise() += l.bias;
    if (i + 1 < model.layers.size()) a = z.cwiseMax(0.0);
    else a = std::move(z);
  }
  LogSoftmaxColumns(&a);
  return a;
}

Eigen::MatrixXd Forward(const AcousticModel &model, const FeatureMatrix &feats) {
  if (feats.dim != model.feature_dim())
    Fail(ErrorKind::kData, "forward: feature dim ", feats.dim,
         " does not match model feature dim ", model.feature_dim());
  if (feats.frames == 0) return Eigen::MatrixXd(0, model.num_labels());
  return ForwardSpliced(model, SpliceFeatures(feats, model.context)).transpose();
}

const char *TrainModeName(TrainMode m) {
  switch (m) {
    case TrainMode::kScratch: return "scratch";
    case TrainMode::kFineTune: return "fine_tune";
    case TrainMode::kTransfer: return "transfer";
  }
  return "?";
}

TrainMode ParseTrainMode(const std::string &s) {
  if (s == "scratch") return TrainMode::kScratch;
  if (s == "fine_tune" || s == "finetune") return TrainMode::kFineTune;
  if (s == "transfer") return TrainMode::kTransfer;
  Fail(ErrorKind::kConfig, "unknown training mode '", s, "'");
}

double TrainConfig::EffectiveLearningRate() const {
  return mode == TrainMode::kFineTune ? base_learning_rate * fine_tune_lr_scale
                                      : base_learning_rate;
}

void TrainConfig::Validate() const {
  if (!(base_learning_rate >= 0.0))
    Fail(ErrorKind::kConfig, "train: learning rate must be >= 0");
  if (mode == TrainMode::kFineTune &&
      !(fine_tune_lr_scale >= 0.0 && fine_tune_lr_scale < 1.0))
    Fail(ErrorKind::kConfig, "train: fine_tune_lr_scale must be in [0, 1)");
  if (epochs < 0) Fail(ErrorKind::kConfig, "train: epochs must be >= 0");
  if (batch_size < 1) Fail(ErrorKind::kConfig, "train: batch_size must be >= 1");
  if (!(l2 >= 0.0)) Fail(ErrorKind::kConfig, "train: l2 must be >= 0");
}

std::string TrainConfig::Describe() const {
  return Concat("mode=", TrainModeName(mode),
                ",lr=", FormatDouble(base_learning_rate),
                ",ft_scale=", FormatDouble(fine_tune_lr_scale),
                ",epochs=", epochs, ",batch=", batch_size, ",seed=", seed,
                ",l2=", FormatDouble(l2));
}

LossAndGradient ComputeLossAndGradient(const AcousticModel &model,
                                       const Eigen::MatrixXd &inputs,
                                       std::span<const int> targets, double l2) {
  const Eigen::Index batch = inputs.cols();
  if (static_cast<size_t>(batch) != targets.size() || batch == 0)
    Fail(ErrorKind::kData, "loss: need one target per input column");
  if (inputs.rows() != model.input_dim())
    Fail(ErrorKind::kData, "loss: input dim mismatch");
  const size_t n_layers = model.layers.size();

  // acts[i] is the input of layer i.
  std::vector<Eigen::MatrixXd> acts(n_layers);
  acts[0] = NormalizeInputs(model, inputs);
  Eigen::MatrixXd z;
  for (size_t i = 0; i < n_layers; ++i) {
    const AffineLayer &l = model.layers[i];
    z = l.weight * acts[i];
    z.colwise() += l.bias;
    if (i + 1 < n_layers) acts[i + 1] = z.cwiseMax(0.0);
  }
  LogSoftmaxColumns(&z);

  LossAndGradient out;
  double nll = 0.0;
  for (Eigen::Index c = 0; c < batch; ++c) {
    const int t = targets[c];
    if (t < 0 || t >= model.num_labels())
      Fail(ErrorKind::kData, "loss: target index ", t, " out of range");
    nll -= z(t, c);
  }
  double reg = 0.0;
  for (const AffineLayer &l : model.layers) reg += l.weight.squaredNorm();
  out.loss = nll / batch + 0.5 * l2 * reg;

  Eigen::MatrixXd delta = z.array().exp();
  for (Eigen::Index c = 0; c < batch; ++c) delta(targets[c], c) -= 1.0;
  delta /= static_cast<double>(batch);

  out.gradient.resize(n_layers);
  for (size_t i = n_layers; i-- > 0;) {
    const AffineLayer &l = model.layers[i];
    out.gradient[i].weight = delta * acts[i].transpose();
    if (l2 > 0.0) out.gradient[i].weight += l2 * l.weight;
    out.gradient[i].bias = delta.rowwise().sum();
    if (i > 0) {
      Eigen::MatrixXd back = l.weight.transpose() * delta;
      delta = (acts[i].array() > 0.0).select(back, 0.0);
    }
  }
  return out;
}

void ApplyGradient(AcousticModel *model, const std::vector<AffineLayer> &gradient,
                   double learning_rate) {
  for (size_t i = 0; i < model->layers.size(); ++i) {
    model->layers[i].weight -= learning_rate * gradient[i].weight;
    model->layers[i].bias -= learning_rate * gradient[i].bias;
  }
}

namespace {

struct FrameData {
  Eigen::MatrixXd inputs;
  std::vector<int> targets;
};

FrameData CollectFrames(const AcousticModel &model, const Manifest &manifest,
                        FeatureSource &features) {
  FrameData data;
  std::vector<Eigen::MatrixXd> blocks;
  long total = 0;
  for (const UtteranceRecord &rec : manifest.records()) {
    if (!rec.frame_labels)
      Fail(ErrorKind::kData, "train: record ", rec.id, " has no frame labels");
    const FeatureMatrix &feats = features.Features(rec);
    if (feats.dim != model.feature_dim())
      Fail(ErrorKind::kData, "train: record ", rec.id, " has feature dim ",
           feats.dim, ", model expects ", model.feature_dim());
    if (static_cast<size_t>(feats.frames) != rec.frame_labels->size())
      Fail(ErrorKind::kData, "train: record ", rec.id, " has ", feats.frames,
           " feature frames but ", rec.frame_labels->size(), " frame labels");
    for (int label : *rec.frame_labels) {
      const int idx = model.LabelIndex(label);
      if (idx < 0)
        Fail(ErrorKind::kData, "train: record ", rec.id, " uses label id ", label,
             " which is not in the model inventory");
      data.targets.push_back(idx);
    }
    if (feats.frames == 0) continue;
    blocks.push_back(SpliceFeatures(feats, model.context));
    total += feats.frames;
  }
  data.inputs.resize(model.input_dim(), total);
  long col = 0;
  for (const Eigen::MatrixXd &b : blocks) {
    data.inputs.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  return data;
}

// Mean and inverse standard deviation of each feature dimension, read from
// the centre frame of the spliced inputs.
void FitInputNormalization(AcousticModel *model, const Eigen::MatrixXd &inputs) {
  const int fd = model->feature_dim();
  const auto centre = inputs.middleRows(static_cast<Eigen::Index>(model->context) * fd, fd);
  const double n = static_cast<double>(inputs.cols());
  const Eigen::VectorXd mean = centre.rowwise().sum() / n;
  Eigen::VectorXd var = (centre.colwise() - mean).array().square().rowwise().sum() / n;
  model->input_shift = -mean;
  model->input_scale.resize(fd);
  for (int d = 0; d < fd; ++d)
    model->input_scale(d) = var(d) > 1e-12 ? 1.0 / std::sqrt(var(d)) : 1.0;
}

std::string LabelSources(const Manifest &m) {
  bool gold = false, pseudo = false;
  for (const UtteranceRecord &r : m.records())
    (r.label_source == LabelSource::kGold ? gold : pseudo) = true;
  if (gold && pseudo) return "mixed";
  return pseudo ? "pseudo" : "gold";
}

}  // namespace

TrainResult Train(const AcousticModel &initial, const Manifest &manifest,
                  FeatureSource &features, const TrainConfig &cfg) {
  cfg.Validate();
  initial.Validate();
  if (manifest.empty()) Fail(ErrorKind::kData, "train: empty training set");
  FrameData data = CollectFrames(initial, manifest, features);
  const long n = static_cast<long>(data.targets.size());
  if (n == 0) Fail(ErrorKind::kData, "train: training set has no frames");

  TrainResult result;
  result.model = initial;
  result.frames = n;
  if (cfg.mode == TrainMode::kScratch) FitInputNormalization(&result.model, data.inputs);
  const double lr = cfg.EffectiveLearningRate();
  Rng rng(cfg.seed);
  std::vector<int> order(n);
  for (long i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::vector<int> batch_idx, batch_targets;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.Shuffle(&order);
    double loss_sum = 0.0;
    long n_batches = 0;
    for (long start = 0; start < n; start += cfg.batch_size) {
      const long end = std::min(n, start + cfg.batch_size);
      batch_idx.assign(order.begin() + start, order.begin() + end);
      batch_targets.resize(batch_idx.size());
      for (size_t i = 0; i < batch_idx.size(); ++i)
        batch_targets[i] = data.targets[batch_idx[i]];
      Eigen::MatrixXd x = data.inputs(Eigen::all, batch_idx);
      LossAndGradient lg = ComputeLossAndGradient(result.model, x, batch_targets, cfg.l2);
      if (lr != 0.0) ApplyGradient(&result.model, lg.gradient, lr);
      loss_sum += lg.loss;
      ++n_batches;
    }
    const double mean_loss = loss_sum / n_batches;
    if (!std::isfinite(mean_loss))
      Fail(ErrorKind::kData, "train: loss became non-finite in epoch ", epoch + 1,
           "; lower the learning rate");
    result.epoch_loss.push_back(mean_loss);
    SSTK_VLOG << "epoch " << epoch + 1 << " loss " << mean_loss;
  }

  Eigen::MatrixXd logp = ForwardSpliced(result.model, data.inputs);
  long correct = 0;
  for (long c = 0; c < n; ++c) {
    Eigen::Index best;
    logp.col(c).maxCoeff(&best);
    correct += (best == data.targets[c]);
  }
  result.final_frame_accuracy = static_cast<double>(correct) / n;

  result.model.provenance = Concat(
      "mode=", TrainModeName(cfg.mode),
      ";parent=", cfg.mode == TrainMode::kScratch ? std::string("none") : ModelDigest(initial),
      ";train_manifest=", ManifestDigest(manifest),
      ";train_manifest_name=", manifest.name(),
      ";label_sources=", LabelSources(manifest),
      ";config=", HexDigest(Fnv1a(cfg.Describe())));
  result.model.Validate();
  return result;
}

double FrameAccuracy(const AcousticModel &model, const Manifest &manifest,
                     FeatureSource &features) {
  FrameData data = CollectFrames(model, manifest, features);
  if (data.targets.empty()) return 0.0;
  Eigen::MatrixXd logp = ForwardSpliced(model, data.inputs);
  long correct = 0;
  for (Eigen::Index c = 0; c < logp.cols(); ++c) {
    Eigen::Index best;
    logp.col(c).maxCoeff(&best);
    correct += (best == data.targets[c]);
  }
  return static_cast<double>(correct) / static_cast<double>(data.targets.size());
}

AcousticModel TransferOutputLayer(const AcousticModel &model,
                                  std::vector<int> new_labels, uint64_t seed) {
  model.Validate();
  if (new_labels.empty())
    Fail(ErrorKind::kConfig, "transfer: new label set is empty");
  AcousticModel out;
  out.context = model.context;
  out.labels = std::move(new_labels);
  out.input_shift = model.input_shift;
  out.input_scale = model.input_scale;
  out.layers.assign(model.layers.begin(), model.layers.end() - 1);
  const int in = static_cast<int>(model.layers.back().weight.cols());
  Rng rng(seed);
  out.layers.push_back(InitLayer(in, out.num_labels(), std::sqrt(1.0 / in), &rng));
  out.provenance = "origin=transfer;parent=" + ModelDigest(model);
  out.Validate();
  return out;
}

// ---------------------------------------------------------------- file format

namespace {

constexpr char kMagic[8] = {'S', 'S', 'T', 'K', 'A', 'M', 'D', 'L'};

void PutU32(std::string *s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutF64(std::string *s, double d) {
  uint64_t v;
  std::memcpy(&v, &d, 8);
  for (int i = 0; i < 8; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const std::string &bytes, const std::string &origin)
      : s_(bytes), origin_(origin) {}
  void Need(size_t n) {
    if (pos_ + n > s_.size())
      Fail(ErrorKind::kData, "model file ", origin_, " is truncated");
  }
  uint32_t U32() {
    Need(4);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s_[pos_ + i]);
    pos_ += 4;
    return v;
  }
  double F64() {
    Need(8);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s_[pos_ + i]);
    pos_ += 8;
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
  std::string Bytes(size_t n) {
    Need(n);
    std::string out = s_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  bool AtEnd() const { return pos_ == s_.size(); }

 private:
  const std::string &s_;
  std::string origin_;
  size_t pos_ = 0;
};

}  // namespace

std::string SerializeModel(const AcousticModel &model) {
  std::string s(kMagic, 8);
  PutU32(&s, AcousticModel::kFormatVersion);
  PutU32(&s, static_cast<uint32_t>(model.context));
  PutU32(&s, static_cast<uint32_t>(model.labels.size()));
  for (int l : model.labels) PutU32(&s, static_cast<uint32_t>(l));
  PutU32(&s, static_cast<uint32_t>(model.layers.size()));
  for (const AffineLayer &l : model.layers) {
    PutU32(&s, static_cast<uint32_t>(l.weight.cols()));
    PutU32(&s, static_cast<uint32_t>(l.weight.rows()));
  }
  PutU32(&s, static_cast<uint32_t>(model.provenance.size()));
  s += model.provenance;
  PutU32(&s, static_cast<uint32_t>(model.input_shift.size()));
  for (Eigen::Index d = 0; d < model.input_shift.size(); ++d) PutF64(&s, model.input_shift(d));
  for (Eigen::Index d = 0; d < model.input_scale.size(); ++d) PutF64(&s, model.input_scale(d));
  for (const AffineLayer &l : model.layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) PutF64(&s, l.weight(r, c));
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) PutF64(&s, l.bias(r));
  }
  return s;
}

AcousticModel DeserializeModel(const std::string &bytes, const std::string &origin) {
  Reader in(bytes, origin);
  if (in.Bytes(8) != std::string(kMagic, 8))
    Fail(ErrorKind::kData, origin, " is not an sstk acoustic model file");
  const uint32_t version = in.U32();
  if (version != AcousticModel::kFormatVersion)
    Fail(ErrorKind::kData, "model file ", origin, " has format version ", version,
         " but this build reads version ", AcousticModel::kFormatVersion);
  AcousticModel model;
  model.context = static_cast<int>(in.U32());
  const uint32_t n_labels = in.U32();
  in.Need(4ull * n_labels);
  for (uint32_t i = 0; i < n_labels; ++i) model.labels.push_back(static_cast<int>(in.U32()));
  const uint32_t n_layers = in.U32();
  if (n_layers == 0 || n_layers > 1000)
    Fail(ErrorKind::kData, "model file ", origin, " has an invalid layer count");
  std::vector<std::pair<uint32_t, uint32_t>> dims;
  for (uint32_t i = 0; i < n_layers; ++i) {
    uint32_t in_dim = in.U32(), out_dim = in.U32();
    dims.push_back({in_dim, out_dim});
  }
  model.provenance = in.Bytes(in.U32());
  const uint32_t fd = in.U32();
  in.Need(16ull * fd);
  model.input_shift.resize(fd);
  model.input_scale.resize(fd);
  for (uint32_t d = 0; d < fd; ++d) model.input_shift(d) = in.F64();
  for (uint32_t d = 0; d < fd; ++d) model.input_scale(d) = in.F64();
  for (auto [in_dim, out_dim] : dims) {
    in.Need(8ull * (static_cast<uint64_t>(in_dim) * out_dim + out_dim));
    AffineLayer l;
    l.weight.resize(out_dim, in_dim);
    l.bias.resize(out_dim);
    for (uint32_t r = 0; r < out_dim; ++r)
      for (uint32_t c = 0; c < in_dim; ++c) l.weight(r, c) = in.F64();
    for (uint32_t r = 0; r < out_dim; ++r) l.bias(r) = in.F64();
    model.layers.push_back(std::move(l));
  }
  if (!in.AtEnd())
    Fail(ErrorKind::kData, "model file ", origin, " has trailing bytes");
  try {
    model.Validate();
  } catch (const Error &e) {
    Fail(ErrorKind::kData, "model file ", origin, ": ", e.what());
  }
  return model;
}

void SaveModel(const AcousticModel &model, const std::filesystem::path &path) {
  WriteTextFileAtomic(path, SerializeModel(model));
}

AcousticModel LoadModel(const std::filesystem::path &path) {
  return DeserializeModel(ReadTextFile(path), path.string());
}

std::string ModelDigest(const AcousticModel &model) {
  return HexDigest(Fnv1a(SerializeModel(model)));
}

std::string ProvenanceValue(const AcousticModel &model, const std::string &key) {
  for (const std::string &kv : SplitString(model.provenance, ';')) {
    size_t eq = kv.find('=');
    if (eq != std::string::npos && kv.compare(0, eq, key) == 0) return kv.substr(eq + 1);
  }
  return "";
}

}  // namespace sstk
