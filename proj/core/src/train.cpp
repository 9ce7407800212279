// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "rawpipe/checkpoint.hpp"
#include "rawpipe/noise.hpp"
#include "rawpipe/optim.hpp"

namespace rawpipe {
namespace {

void validate_config(const TrainConfig& cfg, size_t image_count) {
  if (image_count == 0) throw std::invalid_argument("training requires at least one image");
  if (cfg.patch_size < 2 || cfg.patch_size % 2 != 0) {
    throw std::invalid_argument("patch_size must be even and at least 2");
  }
  if (cfg.batch < 1) throw std::invalid_argument("batch must be at least 1");
  if (cfg.epochs < 1 || cfg.iters_per_epoch < 1) {
    throw std::invalid_argument("epochs and iters_per_epoch must be positive");
  }
}

std::string sigma_tag_for(double sigma) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "sigma%g", sigma);
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Copies one RGB image into batch slot n of an NCHW tensor.
void fill_item(Tensor4& t, int n, const RgbImage& img) {
  for (int c = 0; c < 3; ++c) {
    const Plane& p = img.channel(c);
    double* dst = t.plane(n, c);
    for (size_t k = 0; k < p.data.size(); ++k) dst[k] = p.data[k];
  }
}

// Flattened per-item mask (channel-major, matching NCHW item layout):
// 1 where the CFA records that channel.
std::vector<double> flat_mask(BayerPattern pattern, int size) {
  const CfaMask mask = make_mask(pattern, size, size);
  std::vector<double> flat;
  flat.reserve(3 * mask.m[0].data.size());
  for (int c = 0; c < 3; ++c) {
    flat.insert(flat.end(), mask.m[c].data.begin(), mask.m[c].data.end());
  }
  return flat;
}

struct LoopContext {
  Network* net;
  const TrainConfig* cfg;
  CheckpointMeta meta;  // iteration updated as checkpoints are written
  SeededRng* rng;
  Adam adam;
};

std::string checkpoint_stem(const CheckpointMeta& meta) {
  std::string stem = meta.role;
  if (!meta.sigma_tag.empty()) stem += "_" + meta.sigma_tag;
  return stem;
}

void save_loop_checkpoint(LoopContext& ctx, int64_t iterations, const std::string& suffix) {
  namespace fs = std::filesystem;
  fs::create_directories(ctx.cfg->out_dir);
  ctx.meta.iteration = iterations;
  const std::string rng_state = ctx.rng->serialize();
  const std::string path =
      (fs::path(ctx.cfg->out_dir) / (checkpoint_stem(ctx.meta) + "_" + suffix + ".ckpt")).string();
  save_checkpoint(path, *ctx.net, ctx.meta, &ctx.adam, &rng_state);
}

// Shared optimizer loop: assemble -> forward/backward (via step) -> ADAM with
// the stepped schedule; records the loss trace, writes per-epoch and final
// checkpoints when an output directory is configured, stops early when the
// loss falls below cfg.stop_loss_ratio times the first recorded loss, and
// aborts with a diagnostic checkpoint on a non-finite loss.
TrainOutput run_loop(LoopContext& ctx, const std::function<void()>& assemble,
                     const std::function<double()>& step) {
  const TrainConfig& cfg = *ctx.cfg;
  const int64_t planned = cfg.epochs * cfg.iters_per_epoch;
  const int64_t total = cfg.max_iters >= 0 ? std::min(cfg.max_iters, planned) : planned;

  TrainOutput out;
  out.trace.reserve(static_cast<size_t>(std::min<int64_t>(total, 1 << 20)));

  for (int64_t iter = 0; iter < total; ++iter) {
    if (!cfg.fixed_corpus || iter == 0) assemble();
    ctx.net->zero_grad();
    const double loss = step();
    const double lr = lr_schedule(iter, cfg.lr0, cfg.decay_interval, cfg.decay_factor);
    if (!std::isfinite(loss)) {
      std::string where = "(no checkpoint: out_dir unset)";
      if (!cfg.out_dir.empty()) {
        save_loop_checkpoint(ctx, iter, "diagnostic");
        where = "diagnostic checkpoint written to " + cfg.out_dir;
      }
      throw std::runtime_error("non-finite training loss at iteration " + std::to_string(iter) +
                               " " + where);
    }
    ctx.adam.step(ctx.net->params(), lr);
    out.trace.push_back({iter, lr, loss});
    out.iterations = iter + 1;

    if (cfg.stop_loss_ratio > 0.0 && loss < cfg.stop_loss_ratio * out.trace.front().loss) {
      out.reached_stop = true;
      break;
    }
    if (!cfg.out_dir.empty() && (iter + 1) % cfg.iters_per_epoch == 0 && iter + 1 < total) {
      const int64_t epoch = (iter + 1) / cfg.iters_per_epoch;
      save_loop_checkpoint(ctx, iter + 1, "epoch" + std::to_string(epoch));
    }
  }

  if (!cfg.out_dir.empty()) {
    save_loop_checkpoint(ctx, out.iterations, "final");
    const std::string stem = checkpoint_stem(ctx.meta);
    std::ofstream os(std::filesystem::path(cfg.out_dir) / (stem + "_trace.csv"));
    os << trace_to_csv(out.trace);
  }
  return out;
}

CheckpointMeta make_meta(const std::string& role, const std::string& sigma_tag,
                         const TrainConfig& cfg, bool with_preprocess) {
  CheckpointMeta meta;
  meta.role = role;
  meta.sigma_tag = sigma_tag;
  meta.preprocess = with_preprocess ? to_string(cfg.preprocess) : "";
  meta.pattern = to_string(cfg.pattern);
  meta.extra["patch_size"] = std::to_string(cfg.patch_size);
  meta.extra["batch"] = std::to_string(cfg.batch);
  meta.extra["lr0"] = format_double(cfg.lr0);
  meta.extra["seed"] = std::to_string(cfg.seed);
  return meta;
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::string out = "iteration,lr,loss\n";
  for (const auto& row : trace) {
    out += std::to_string(row.iteration);
    out += ',';
    out += format_double(row.lr);
    out += ',';
    out += format_double(row.loss);
    out += '\n';
  }
  return out;
}

PatchSampler::PatchSampler(const std::vector<RgbImage>* images, int patch_size, bool augment,
                           SeededRng* rng)
    : images_(images), patch_(patch_size), augment_(augment), rng_(rng) {
  if (images == nullptr || images->empty()) {
    throw std::invalid_argument("PatchSampler: empty image pool");
  }
  if (patch_size < 2 || patch_size % 2 != 0) {
    throw std::invalid_argument("PatchSampler: patch size must be even and at least 2");
  }
}

RgbImage PatchSampler::next() {
  const RgbImage& src = (*images_)[rng_->uniform_below(images_->size())];
  if (src.height() < patch_ || src.width() < patch_) {
    throw std::invalid_argument("PatchSampler: source image smaller than the patch size");
  }
  const int top = 2 * static_cast<int>(rng_->uniform_below((src.height() - patch_) / 2 + 1));
  const int left = 2 * static_cast<int>(rng_->uniform_below((src.width() - patch_) / 2 + 1));

  RgbImage patch(patch_, patch_);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < patch_; ++i) {
      const double* s = src.channel(c).row(top + i) + left;
      double* d = patch.channel(c).row(i);
      for (int j = 0; j < patch_; ++j) d[j] = s[j];
    }
  }

  if (augment_) {
    if (rng_->bernoulli(0.5)) {  // horizontal flip
      ++flips_;
      for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < patch_; ++i) {
          double* row = patch.channel(c).row(i);
          std::reverse(row, row + patch_);
        }
      }
    }
    if (rng_->bernoulli(0.5)) {  // 180-degree rotation
      ++rotations_;
      for (int c = 0; c < 3; ++c) {
        auto& data = patch.channel(c).data;
        std::reverse(data.begin(), data.end());
      }
    }
  }
  ++samples_;
  return patch;
}

DemosaicStage train_demosaic(const std::vector<RgbImage>& images, const TrainConfig& cfg,
                             TrainOutput* out) {
  validate_config(cfg, images.size());
  SeededRng rng(cfg.seed);

  NetworkSpec spec;
  spec.block_kind = cfg.block_kind;
  spec.body_blocks = cfg.body_blocks;
  DemosaicStage stage(spec);
  stage.preprocess = cfg.preprocess;
  stage.net.init_he(rng.next_u64());

  PatchSampler sampler(&images, cfg.patch_size, cfg.augment, &rng);
  const std::vector<double> mask = flat_mask(cfg.pattern, cfg.patch_size);
  const int p = cfg.patch_size;
  Tensor4 x(cfg.batch, 3, p, p), observed(cfg.batch, 3, p, p), gt(cfg.batch, 3, p, p);

  auto assemble = [&] {
    for (int b = 0; b < cfg.batch; ++b) {
      const RgbImage patch = sampler.next();
      const CfaImage y = mosaic(patch, cfg.pattern);
      fill_item(gt, b, patch);
      fill_item(x, b, demosaic(y, cfg.preprocess));
      fill_item(observed, b, embed(y));
    }
  };

  const size_t item = mask.size();
  Tensor4 comp(cfg.batch, 3, p, p), gcomp, gr(cfg.batch, 3, p, p);
  auto step = [&] {
    Tensor4 r = stage.net.forward(x, NnMode::train);
    for (size_t k = 0; k < comp.size(); ++k) {
      comp.v[k] = mask[k % item] != 0.0 ? observed.v[k] : x.v[k] + r.v[k];
    }
    const double loss = half_mse_loss(comp, gt, &gcomp);
    for (size_t k = 0; k < gr.size(); ++k) {
      gr.v[k] = mask[k % item] != 0.0 ? 0.0 : gcomp.v[k];
    }
    stage.net.backward(gr);
    return loss;
  };

  LoopContext ctx{&stage.net, &cfg, make_meta("demosaic", "", cfg, true), &rng, Adam{}};
  TrainOutput result = run_loop(ctx, assemble, step);
  stage.trained = true;
  if (out != nullptr) *out = std::move(result);
  return stage;
}

DenoiseStage train_denoise(const std::vector<RgbImage>& images, double sigma, DemosaicStage& dm,
                           const TrainConfig& cfg, TrainOutput* out) {
  validate_config(cfg, images.size());
  if (sigma < 0.0) throw std::invalid_argument("train_denoise: sigma must be non-negative");
  if (!dm.trained) throw std::logic_error("train_denoise: stage-1 model is untrained");
  SeededRng rng(cfg.seed);

  NetworkSpec spec;
  spec.block_kind = cfg.block_kind;
  spec.body_blocks = cfg.body_blocks;
  DenoiseStage stage(spec);
  stage.sigma_tag = sigma_tag_for(sigma);
  stage.net.init_he(rng.next_u64());

  PatchSampler sampler(&images, cfg.patch_size, cfg.augment, &rng);
  const int p = cfg.patch_size;
  Tensor4 x(cfg.batch, 3, p, p), eps(cfg.batch, 3, p, p);

  auto assemble = [&] {
    for (int b = 0; b < cfg.batch; ++b) {
      const RgbImage patch = sampler.next();
      CfaImage y = mosaic(patch, cfg.pattern);
      if (sigma > 0.0) y = add_noise(y, NoiseSpec{sigma, rng.next_u64()});
      const RgbImage xdm = demosaic_cnn(dm, y);
      fill_item(x, b, xdm);
      // Residual target: stage-1 output minus ground truth.
      for (int c = 0; c < 3; ++c) {
        const Plane& pc = patch.channel(c);
        double* e = eps.plane(b, c);
        const double* xv = x.plane(b, c);
        for (size_t k = 0; k < pc.data.size(); ++k) e[k] = xv[k] - pc.data[k];
      }
    }
  };

  Tensor4 gres;
  auto step = [&] {
    Tensor4 r = stage.net.forward(x, NnMode::train);
    const double loss = half_mse_loss(r, eps, &gres);
    stage.net.backward(gres);
    return loss;
  };

  LoopContext ctx{&stage.net, &cfg, make_meta("denoise", stage.sigma_tag, cfg, false), &rng,
                  Adam{}};
  TrainOutput result = run_loop(ctx, assemble, step);
  stage.trained = true;
  if (out != nullptr) *out = std::move(result);
  return stage;
}

JointStage train_joint_ablation(const std::vector<RgbImage>& images, double sigma,
                                const TrainConfig& cfg, TrainOutput* out) {
  validate_config(cfg, images.size());
  if (sigma < 0.0) throw std::invalid_argument("train_joint_ablation: sigma must be non-negative");
  SeededRng rng(cfg.seed);

  NetworkSpec spec;
  spec.block_kind = cfg.block_kind;
  spec.body_blocks = cfg.body_blocks;
  JointStage stage(spec);
  stage.preprocess = cfg.preprocess;
  stage.sigma_tag = sigma_tag_for(sigma);
  stage.net.init_he(rng.next_u64());

  PatchSampler sampler(&images, cfg.patch_size, cfg.augment, &rng);
  const int p = cfg.patch_size;
  Tensor4 x(cfg.batch, 3, p, p), gt(cfg.batch, 3, p, p);

  auto assemble = [&] {
    for (int b = 0; b < cfg.batch; ++b) {
      const RgbImage patch = sampler.next();
      CfaImage y = mosaic(patch, cfg.pattern);
      if (sigma > 0.0) y = add_noise(y, NoiseSpec{sigma, rng.next_u64()});
      fill_item(gt, b, patch);
      fill_item(x, b, demosaic(y, cfg.preprocess));
    }
  };

  Tensor4 pred(cfg.batch, 3, p, p), gpred;
  auto step = [&] {
    Tensor4 r = stage.net.forward(x, NnMode::train);
    for (size_t k = 0; k < pred.size(); ++k) pred.v[k] = x.v[k] + r.v[k];
    const double loss = half_mse_loss(pred, gt, &gpred);
    stage.net.backward(gpred);
    return loss;
  };

  LoopContext ctx{&stage.net, &cfg, make_meta("joint", stage.sigma_tag, cfg, true), &rng, Adam{}};
  TrainOutput result = run_loop(ctx, assemble, step);
  stage.trained = true;
  if (out != nullptr) *out = std::move(result);
  return stage;
}

RgbImage run_joint(JointStage& stage, const CfaImage& y) {
  if (!stage.trained) {
    throw std::logic_error("run_joint: stage has no established weights; "
                           "load a checkpoint or initialize explicitly");
  }
  RgbImage base = demosaic(y, stage.preprocess);
  Tensor4 x = to_tensor(base);
  Tensor4 r = stage.net.forward(x, NnMode::eval);
  for (size_t k = 0; k < x.size(); ++k) r.v[k] += x.v[k];
  return to_image(r);
}

ValidationSplit split_validation(size_t n, double frac, uint64_t seed) {
  if (frac < 0.0 || frac > 1.0) {
    throw std::invalid_argument("split_validation: frac must be in [0, 1]");
  }
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  SeededRng rng(seed);
  for (size_t i = n; i > 1; --i) {  // Fisher-Yates
    const size_t j = rng.uniform_below(i);
    std::swap(idx[i - 1], idx[j]);
  }
  size_t k = static_cast<size_t>(std::llround(frac * static_cast<double>(n)));
  if (frac > 0.0 && k == 0 && n > 0) k = 1;
  k = std::min(k, n);

  ValidationSplit split;
  split.val.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
  split.train.assign(idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

}  // namespace rawpipe
