// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rawpipe {

inline constexpr double kTwoPi = 6.28318530717958647692;

// Seeded random source with a fixed normal-variate algorithm (Box-Muller with
// a cached spare), so streams are bit-identical on every conforming compiler.
// std::normal_distribution is implementation-defined and deliberately avoided.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; never zero, safe under log().
  double uniform_open01() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }

  // Uniform integer in [0, n); n must be positive. Uses rejection sampling for
  // an exactly uniform, reproducible draw.
  uint64_t uniform_below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Standard normal variate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = kTwoPi * u2;
    spare_ = mag * std::sin(ang);
    has_spare_ = true;
    return mag * std::cos(ang);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Engine + spare state as text; restores to an identical stream.
  std::string serialize() const {
    std::ostringstream os;
    os << eng_ << ' ' << (has_spare_ ? 1 : 0) << ' ';
    os.precision(17);
    os << spare_;
    return os.str();
  }

  void restore(const std::string& state) {
    std::istringstream is(state);
    int has = 0;
    is >> eng_ >> has >> spare_;
    if (!is) throw std::invalid_argument("SeededRng::restore: bad state string");
    has_spare_ = has != 0;
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rawpipe
