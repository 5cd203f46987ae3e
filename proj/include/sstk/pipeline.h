// sstk/pipeline.h

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

#ifndef SSTK_PIPELINE_H_
#define SSTK_PIPELINE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "sstk/config.h"
#include "sstk/eval.h"

namespace sstk {

// Artifact tree under cfg.out_dir, one directory per phase:
//   prepare/            train, dev, test, ood manifests (+ "-sp" perturbed
//                       copies), ood-unlabeled.manifest, labels, LM text
//   baseline/           model.bin
//   lm/                 in.arpa, ood.arpa, extra-K.arpa, mixture.lm, em.txt
//   sst_ood_only/       stage-k/..., model.bin
//   sst_pooled/         stage-k/..., model.bin
//   fine_tune_ood_only/ model.bin, lineage
//   fine_tune_pooled/   model.bin, lineage
//   transfer/           source.bin, model.bin, lineage
//   evaluate/           hyp-<condition>.txt, wer.records
//   report/             report.txt, report.records
// A phase is complete when its directory holds a DONE file.

/// All phases in execution order.
const std::vector<std::string> &PhaseNames();
/// Direct upstream phases of `phase` under `cfg`.
std::vector<std::string> PhaseDependencies(const ExperimentConfig &cfg,
                                           const std::string &phase);

std::filesystem::path PhaseDir(const ExperimentConfig &cfg, const std::string &phase);
bool PhaseComplete(const ExperimentConfig &cfg, const std::string &phase);

/// Per-phase seed derived from the master seed.
uint64_t PhaseSeed(const ExperimentConfig &cfg, const std::string &phase);

/// Runs one phase. Does nothing if it is already complete; throws kPhase
/// naming the first incomplete upstream phase. A failure inside the phase is
/// rethrown as kPhase (data errors keep their kind) with the phase name.
/// Returns true if the phase ran.
bool RunPhase(const ExperimentConfig &cfg, const std::string &phase);

/// Runs every incomplete phase in order and returns the report.
ExperimentReport RunExperiment(const ExperimentConfig &cfg);

/// Report from a completed report phase.
ExperimentReport ReadExperimentReport(const ExperimentConfig &cfg);

/// Condition name -> model path, in report order, for the enabled arms.
std::vector<std::pair<std::string, std::filesystem::path>> ConditionModels(
    const ExperimentConfig &cfg);

}  // namespace sstk

#endif  // SSTK_PIPELINE_H_
