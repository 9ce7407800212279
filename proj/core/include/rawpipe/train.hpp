// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rawpipe/bayer.hpp"
#include "rawpipe/demosaic.hpp"
#include "rawpipe/pipeline.hpp"
#include "rawpipe/rng.hpp"

namespace rawpipe {

// Training hyper-parameters. Production defaults follow the reference
// configuration (128x128 patches, batch 64, lr 1e-2 decayed by 0.9 every 3000
// steps, 70 epochs); desk-scale runs shrink patches, batch, and iteration
// counts but keep the network depth.
struct TrainConfig {
  int patch_size = 128;  // must be even (whole Bayer cells)
  int batch = 64;
  double lr0 = 1e-2;
  int64_t decay_interval = 3000;
  double decay_factor = 0.9;
  int epochs = 70;
  int64_t iters_per_epoch = 3125;  // one pass over the nominal patch list
  bool augment = true;             // flip and 180-degree rotation, each p=0.5
  uint64_t seed = 1;
  BayerPattern pattern = BayerPattern::rggb;
  DemosaicMethod preprocess = DemosaicMethod::gbtf;
  int body_blocks = 16;
  BlockKind block_kind = BlockKind::inception;
  std::string out_dir;  // when non-empty: per-epoch checkpoints + trace CSV

  // When true, one batch of patches (and, where applicable, noise instances
  // and stage-1 reconstructions) is materialized up front and every iteration
  // trains on that same batch. Used by the fixed-corpus overfit smoke tests.
  bool fixed_corpus = false;

  // Early stop: end training once loss < stop_loss_ratio * initial loss
  // (negative disables). The initial loss is the first recorded trace entry.
  double stop_loss_ratio = -1.0;
  int64_t max_iters = -1;  // hard iteration cap (negative: epochs * iters_per_epoch)
};

struct TraceRow {
  int64_t iteration = 0;  // 0-based optimizer step index
  double lr = 0.0;
  double loss = 0.0;
};

struct TrainOutput {
  std::vector<TraceRow> trace;
  int64_t iterations = 0;   // steps actually executed
  bool reached_stop = false;  // early-stop threshold met
};

std::string trace_to_csv(const std::vector<TraceRow>& trace);

// Draws phase-aligned (even-offset) square crops from a pool of RGB images,
// optionally applying a horizontal flip and a 180-degree rotation, each with
// independent probability 1/2. Draw order per sample: image index, row
// offset, column offset, then (when augmenting) flip and rotation coins.
class PatchSampler {
 public:
  PatchSampler(const std::vector<RgbImage>* images, int patch_size, bool augment,
               SeededRng* rng);

  RgbImage next();

  int64_t samples() const { return samples_; }
  int64_t flips() const { return flips_; }
  int64_t rotations() const { return rotations_; }

 private:
  const std::vector<RgbImage>* images_;
  int patch_;
  bool augment_;
  SeededRng* rng_;
  int64_t samples_ = 0, flips_ = 0, rotations_ = 0;
};

// Stage 1: patches are mosaicked, reconstructed classically, refined by the
// residual network, recomposed with the exact CFA samples, and scored against
// the clean patch. Gradients reach the network only at non-sampled positions.
DemosaicStage train_demosaic(const std::vector<RgbImage>& images, const TrainConfig& cfg,
                             TrainOutput* out = nullptr);

// Stage 2: each patch is mosaicked, degraded with sigma noise, reconstructed
// by the (frozen) stage-1 model, and the network learns the residual between
// that reconstruction and the clean patch. dm is never mutated.
DenoiseStage train_denoise(const std::vector<RgbImage>& images, double sigma,
                           DemosaicStage& dm, const TrainConfig& cfg,
                           TrainOutput* out = nullptr);

// Single-stage ablation: one deeper residual network (32 blocks in the
// reference configuration; depth taken from cfg) learns the clean patch
// directly from the classical reconstruction of the noisy mosaic. No sample
// retention: the recorded CFA values are themselves noisy.
struct JointStage {
  DemosaicMethod preprocess = DemosaicMethod::gbtf;
  Network net;
  std::string sigma_tag;
  bool trained = false;

  explicit JointStage(const NetworkSpec& spec = NetworkSpec{}) : net(spec) {}
};

JointStage train_joint_ablation(const std::vector<RgbImage>& images, double sigma,
                                const TrainConfig& cfg, TrainOutput* out = nullptr);

// Joint-stage inference: classical reconstruction plus network residual.
RgbImage run_joint(JointStage& stage, const CfaImage& y);

// Deterministic holdout: shuffles indices with the seed and assigns
// round(frac * n) of them (at least 1 when 0 < frac < 1) to validation.
struct ValidationSplit {
  std::vector<size_t> train;
  std::vector<size_t> val;
};
ValidationSplit split_validation(size_t n, double frac, uint64_t seed);

}  // namespace rawpipe
