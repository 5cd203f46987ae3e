/* sstk/sstk-c.h */

/* Copyright 2026  The sstk Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

   THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
   KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
   WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
   MERCHANTABLITY OR NON-INFRINGEMENT.
   See the Apache 2 License for the specific language governing permissions and
   limitations under the License. */

/* Plain C interface to libsstk. Every function returns an sstk_status; on
   failure sstk_last_error() describes the problem (per thread). Strings
   returned through char** must be released with sstk_string_free(). */

#ifndef SSTK_SSTK_C_H_
#define SSTK_SSTK_C_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SSTK_OK = 0,
  SSTK_ERR_CONFIG = 1, /* usage or configuration */
  SSTK_ERR_PHASE = 2,  /* pipeline phase failure or missing prerequisite */
  SSTK_ERR_DATA = 3,   /* malformed or inconsistent data, I/O */
  SSTK_ERR_INTERNAL = 4
} sstk_status;

typedef struct sstk_config sstk_config;
typedef struct sstk_manifest sstk_manifest;
typedef struct sstk_model sstk_model;
typedef struct sstk_lm sstk_lm;

const char *sstk_last_error(void);
void sstk_string_free(char *s);
/* 0 error, 1 warning, 2 info, 3 debug. */
void sstk_set_log_level(int level);
const char *sstk_version(void);

/* ---- configuration ---- */

/* Defaults, then the INI file at `path` (may be NULL). Not yet validated. */
sstk_status sstk_config_new(const char *path, sstk_config **out);
void sstk_config_free(sstk_config *cfg);
sstk_status sstk_config_set(sstk_config *cfg, const char *key, const char *value);
sstk_status sstk_config_get(const sstk_config *cfg, const char *key, char **value);
/* Is `key` a known dotted configuration key? */
int sstk_config_has_key(const char *key);
/* Makes paths absolute and validates. */
sstk_status sstk_config_finalize(sstk_config *cfg);
sstk_status sstk_config_format(const sstk_config *cfg, char **text);

/* ---- manifests ---- */

sstk_status sstk_manifest_read(const char *path, sstk_manifest **out);
sstk_status sstk_manifest_write(const sstk_manifest *m, const char *path);
size_t sstk_manifest_size(const sstk_manifest *m);
void sstk_manifest_free(sstk_manifest *m);

/* Synthesises `n` utterances of the configured two-domain corpus.
   `domain` is "in" or "ood". Audio goes to `out_dir`. */
sstk_status sstk_synth(const sstk_config *cfg, int n, const char *domain,
                       const char *out_dir, const char *prefix, sstk_manifest **out);

/* Speed-perturbs with the configured factors; audio under `audio_dir`. */
sstk_status sstk_perturb(const sstk_config *cfg, const sstk_manifest *in,
                         const char *audio_dir, sstk_manifest **out);

/* ---- acoustic models ---- */

sstk_status sstk_model_load(const char *path, sstk_model **out);
sstk_status sstk_model_save(const sstk_model *model, const char *path);
void sstk_model_free(sstk_model *model);
sstk_status sstk_model_digest(const sstk_model *model, char **digest);
sstk_status sstk_model_provenance(const sstk_model *model, char **provenance);

/* Trains from fresh weights with the [baseline] settings. The label
   inventory is silence plus every label in the manifest. */
sstk_status sstk_train(const sstk_config *cfg, const sstk_manifest *data, uint64_t seed,
                       sstk_model **out);
/* Continues training `parent` with the [fine_tune] settings. */
sstk_status sstk_finetune(const sstk_config *cfg, const sstk_model *parent,
                          const sstk_manifest *data, uint64_t seed, sstk_model **out);
/* Keeps the hidden layers of `source`, replaces the output layer and trains
   with the [transfer.target] settings. */
sstk_status sstk_transfer(const sstk_config *cfg, const sstk_model *source,
                          const sstk_manifest *data, uint64_t seed, sstk_model **out);

/* ---- decoding, selection, SST ---- */

/* Writes a hypothesis file. `lm` may be NULL; beam search follows
   decode.use_beam. `n_failed` (may be NULL) receives the undecodable count. */
sstk_status sstk_decode(const sstk_config *cfg, const sstk_model *model,
                        const sstk_manifest *data, const sstk_lm *lm,
                        const char *hyp_path, size_t *n_failed);

/* Greedy pseudo-labels for every record. */
sstk_status sstk_pseudo_label(const sstk_config *cfg, const sstk_model *model,
                              const sstk_manifest *data, sstk_manifest **out);

/* Median-confidence selection. `report` receives the key-value report. */
sstk_status sstk_select(const sstk_manifest *labeled, sstk_manifest **selected,
                        sstk_manifest **rejected, char **report);

/* SST loop with the [sst] settings; strategy "ood_only" or "pooled".
   `in_domain` may be NULL for ood_only. */
sstk_status sstk_sst(const sstk_config *cfg, const sstk_model *bootstrap,
                     const sstk_manifest *in_domain, const sstk_manifest *unlabeled,
                     const char *strategy, const char *out_dir, sstk_model **out);

/* ---- language models ---- */

sstk_status sstk_lm_train(const char *text_path, int order, const char *arpa_path);
/* EM-fits mixture weights of the ARPA components on `dev_text_path` and
   writes a mixture file. `weights` (may be NULL) receives the weights as
   text. */
sstk_status sstk_lm_interp(const char *const *arpa_paths, size_t n, const char *dev_text_path,
                           const char *mixture_path, char **weights);
sstk_status sstk_lm_load(const char *path, sstk_lm **out);
void sstk_lm_free(sstk_lm *lm);
sstk_status sstk_lm_perplexity(const sstk_lm *lm, const char *text_path, double *ppl);

/* ---- scoring and reports ---- */

/* WER of a hypothesis file against a reference manifest, as key-value text
   (wer, n_ref, sub, ins, del). */
sstk_status sstk_score(const sstk_manifest *refs, const char *hyp_path, double *wer,
                       char **summary);
/* Renders a report from "condition=..<TAB>wer=.." records. */
sstk_status sstk_report(const char *records_path, const char *baseline, char **table);

/* ---- pipeline ---- */

sstk_status sstk_experiment(const sstk_config *cfg, char **table);
sstk_status sstk_run_phase(const sstk_config *cfg, const char *phase);

#ifdef __cplusplus
}
#endif

#endif /* SSTK_SSTK_C_H_ */
