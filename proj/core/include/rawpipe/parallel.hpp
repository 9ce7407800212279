// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cstdint>
#include <functional>

namespace rawpipe {

// Worker count: the RAWPIPE_JOBS environment variable when set (minimum 1),
// otherwise the detected hardware concurrency.
int default_jobs();

// Runs fn(i) for i in [begin, end) across up to `jobs` threads. Indices are
// dealt round-robin, so any per-index outputs written by fn are positioned
// deterministically regardless of scheduling. The first exception thrown by
// any worker is rethrown on the calling thread. jobs <= 1 runs serially.
void parallel_for(int64_t begin, int64_t end, int jobs,
                  const std::function<void(int64_t)>& fn);

}  // namespace rawpipe
