// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rawpipe/rng.hpp"
#include "rawpipe/tensor.hpp"

namespace rawpipe {

struct GradCheckConfig {
  double step = 1e-5;       // central-difference half-step in float64
  double tolerance = 1e-6;  // bound on the normalized maximum deviation
  int max_probes = 48;      // finite-difference probes per case (approximate)
};

struct GradCheckResult {
  std::string name;
  double max_rel_err = 0.0;  // max |analytic - fd| / (max|analytic| + max|fd| + 1e-12)
  int64_t checked = 0;       // scalars probed
  bool pass = false;
};

// Compares the analytic gradient of `loss` against central finite differences
// at a random subset of the scalars referenced by `wrt`.
//
// The callback contract: loss(true) runs forward and backward and leaves
// gradients in each view's grad buffer (zeroing them first); loss(false)
// evaluates the scalar loss from the current values without touching
// gradients. The finite-difference path only ever calls loss(false), so the
// comparison is independent of the backward implementation under test.
//
// A probe whose deviation is suspicious is re-evaluated with smaller steps
// (h/8, h/64) and the closest agreement is kept: a genuine analytic error
// persists at every step size, while step-crossing of a ReLU kink (where the
// loss is not differentiable and a finite difference is meaningless) vanishes.
GradCheckResult check_gradients(const std::string& name, const std::vector<ParamView>& wrt,
                                const std::function<double(bool with_grad)>& loss,
                                SeededRng& probe_rng, const GradCheckConfig& cfg = {});

// Runs the full layer/block/network/loss-composition suite over `seeds`
// independent randomizations and aggregates one result per case (worst
// deviation across seeds).
std::vector<GradCheckResult> run_gradient_check_suite(uint64_t base_seed, int seeds,
                                                      const GradCheckConfig& cfg = {});

}  // namespace rawpipe
