// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
#include "rawpipe/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace rawpipe {
namespace {

constexpr char kMagic[8] = {'R', 'A', 'W', 'P', 'C', 'K', 'P', '1'};

void write_u64_le(std::ostream& os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t read_u64_le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_doubles(std::ostream& os, const std::vector<double>& v) {
  for (double d : v) write_u64_le(os, std::bit_cast<uint64_t>(d));
}

void read_doubles(std::istream& is, std::vector<double>& v) {
  for (double& d : v) d = std::bit_cast<double>(read_u64_le(is));
}

nlohmann::json spec_to_json(const NetworkSpec& s) {
  return {{"block_kind", to_string(s.block_kind)},
          {"body_blocks", s.body_blocks},
          {"in_ch", s.in_ch},
          {"features", s.features},
          {"out_ch", s.out_ch}};
}

NetworkSpec spec_from_json(const nlohmann::json& j) {
  NetworkSpec s;
  s.block_kind = parse_block_kind(j.at("block_kind").get<std::string>());
  s.body_blocks = j.at("body_blocks").get<int>();
  s.in_ch = j.at("in_ch").get<int>();
  s.features = j.at("features").get<int>();
  s.out_ch = j.at("out_ch").get<int>();
  return s;
}

std::vector<uint64_t> view_sizes(const std::vector<ParamView>& views) {
  std::vector<uint64_t> sizes;
  sizes.reserve(views.size());
  for (const auto& v : views) sizes.push_back(v.value->size());
  return sizes;
}

}  // namespace

void save_checkpoint(const std::string& path, Network& net, const CheckpointMeta& meta,
                     const Adam* adam, const std::string* rng_state) {
  auto params = net.params();
  auto state = net.state_buffers();

  nlohmann::json header;
  header["format"] = 1;
  header["spec"] = spec_to_json(net.spec());
  header["meta"] = {{"role", meta.role},
                    {"sigma_tag", meta.sigma_tag},
                    {"preprocess", meta.preprocess},
                    {"pattern", meta.pattern},
                    {"iteration", meta.iteration},
                    {"extra", meta.extra}};
  header["param_sizes"] = view_sizes(params);
  header["state_sizes"] = view_sizes(state);
  if (adam != nullptr) {
    if (!adam->moment1().empty() && adam->moment1().size() != params.size()) {
      throw std::invalid_argument("save_checkpoint: optimizer tracks a different parameter set");
    }
    header["adam"] = {{"t", adam->step_count()},
                      {"beta1", adam->beta1()},
                      {"beta2", adam->beta2()},
                      {"eps", adam->eps()},
                      {"initialized", !adam->moment1().empty()}};
  }
  if (rng_state != nullptr) header["rng_state"] = *rng_state;

  const std::string header_text = header.dump();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_u64_le(os, header_text.size());
  os.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const auto& p : params) write_doubles(os, *p.value);
  for (const auto& s : state) write_doubles(os, *s.value);
  if (adam != nullptr && !adam->moment1().empty()) {
    for (const auto& m : adam->moment1()) write_doubles(os, m);
    for (const auto& v : adam->moment2()) write_doubles(os, v);
  }
  os.flush();
  if (!os) throw std::runtime_error("checkpoint: write failed: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("checkpoint: bad magic in " + path);
  }
  const uint64_t header_len = read_u64_le(is);
  std::string header_text(header_len, '\0');
  is.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!is) throw std::runtime_error("checkpoint: truncated header in " + path);

  nlohmann::json header = nlohmann::json::parse(header_text);
  if (header.at("format").get<int>() != 1) {
    throw std::runtime_error("checkpoint: unsupported format version in " + path);
  }

  const NetworkSpec spec = spec_from_json(header.at("spec"));
  CheckpointMeta meta;
  const auto& jm = header.at("meta");
  meta.role = jm.at("role").get<std::string>();
  meta.sigma_tag = jm.at("sigma_tag").get<std::string>();
  meta.preprocess = jm.at("preprocess").get<std::string>();
  meta.pattern = jm.at("pattern").get<std::string>();
  meta.iteration = jm.at("iteration").get<int64_t>();
  meta.extra = jm.at("extra").get<std::map<std::string, std::string>>();

  LoadedCheckpoint out{Network(spec), std::move(meta), std::nullopt, std::nullopt};

  auto params = out.net.params();
  auto state = out.net.state_buffers();
  const auto param_sizes = header.at("param_sizes").get<std::vector<uint64_t>>();
  const auto state_sizes = header.at("state_sizes").get<std::vector<uint64_t>>();
  if (param_sizes != view_sizes(params) || state_sizes != view_sizes(state)) {
    throw std::runtime_error("checkpoint: stored tensor shapes do not match the architecture");
  }
  for (auto& p : params) read_doubles(is, *p.value);
  for (auto& s : state) read_doubles(is, *s.value);

  if (header.contains("adam")) {
    const auto& ja = header.at("adam");
    Adam adam(ja.at("beta1").get<double>(), ja.at("beta2").get<double>(),
              ja.at("eps").get<double>());
    if (ja.at("initialized").get<bool>()) {
      std::vector<std::vector<double>> m(params.size()), v(params.size());
      for (size_t i = 0; i < params.size(); ++i) m[i].resize(params[i].value->size());
      for (size_t i = 0; i < params.size(); ++i) v[i].resize(params[i].value->size());
      for (auto& mv : m) read_doubles(is, mv);
      for (auto& vv : v) read_doubles(is, vv);
      adam.restore(ja.at("t").get<int64_t>(), std::move(m), std::move(v));
    } else {
      adam.restore(ja.at("t").get<int64_t>(), {}, {});
    }
    out.adam = std::move(adam);
  }
  if (header.contains("rng_state")) out.rng_state = header.at("rng_state").get<std::string>();
  if (!is) throw std::runtime_error("checkpoint: truncated payload in " + path);
  return out;
}

}  // namespace rawpipe
