// Copyright 2026 The mathlens Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>

#include "mathlens/model.hpp"
#include "nlohmann/json.hpp"

namespace mathlens {

namespace {

using nlohmann::json;

struct TensorRef {
  std::string name;
  std::vector<int> shape;
  float* data;
  std::size_t numel;
};

// Enumerates every tensor of a model in canonical order with its expected
// shape; the same walk drives saving, loading and validation.
void walk_tensors(const ModelConfig& cfg, ModelWeights& w,
                  const std::function<void(const TensorRef&)>& fn) {
  auto mat = [&fn](const std::string& name, Matrix& m, int rows, int cols) {
    fn({name, {rows, cols}, m.data.data(), m.data.size()});
  };
  auto vec = [&fn](const std::string& name, std::vector<float>& v, int n) {
    fn({name, {n}, v.data(), v.size()});
  };
  mat("embed", w.embed, cfg.vocab_size, cfg.d_model);
  for (int i = 0; i < cfg.n_layers; ++i) {
    LayerWeights& l = w.layers[static_cast<std::size_t>(i)];
    std::string p = "layers." + std::to_string(i) + ".";
    mat(p + "attn.wq", l.wq, cfg.d_model, cfg.d_model);
    mat(p + "attn.wk", l.wk, cfg.d_model, cfg.d_model);
    mat(p + "attn.wv", l.wv, cfg.d_model, cfg.d_model);
    mat(p + "attn.wo", l.wo, cfg.d_model, cfg.d_model);
    mat(p + "mlp.w_in", l.w_in, cfg.d_mlp, cfg.d_model);
    mat(p + "mlp.w_gate", l.w_gate, cfg.d_mlp, cfg.d_model);
    mat(p + "mlp.w_out", l.w_out, cfg.d_model, cfg.d_mlp);
    vec(p + "norm1", l.norm1, cfg.d_model);
    vec(p + "norm2", l.norm2, cfg.d_model);
  }
  vec("final_norm", w.final_norm, cfg.d_model);
  mat("unembed", w.unembed, cfg.vocab_size, cfg.d_model);
}

std::size_t shape_numel(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

ModelConfig config_from_json(const json& h) {
  ModelConfig cfg;
  try {
    cfg.n_layers = h.at("n_layers").get<int>();
    cfg.d_model = h.at("d_model").get<int>();
    cfg.n_heads = h.at("n_heads").get<int>();
    cfg.d_head = h.at("d_head").get<int>();
    cfg.d_mlp = h.at("d_mlp").get<int>();
    cfg.vocab_size = h.at("vocab_size").get<int>();
    cfg.max_seq_len = h.at("max_seq_len").get<int>();
    cfg.norm_eps = h.at("norm_eps").get<float>();
  } catch (const json::exception& e) {
    fail(ErrCode::kFormat, std::string("malformed weight header: ") + e.what());
  }
  return cfg;
}

}  // namespace

ModelWeights allocate_weights(const ModelConfig& cfg) {
  ModelWeights w;
  w.embed = Matrix(cfg.vocab_size, cfg.d_model);
  w.unembed = Matrix(cfg.vocab_size, cfg.d_model);
  w.final_norm.assign(static_cast<std::size_t>(cfg.d_model), 0.0f);
  w.layers.resize(static_cast<std::size_t>(cfg.n_layers));
  for (LayerWeights& l : w.layers) {
    l.wq = Matrix(cfg.d_model, cfg.d_model);
    l.wk = Matrix(cfg.d_model, cfg.d_model);
    l.wv = Matrix(cfg.d_model, cfg.d_model);
    l.wo = Matrix(cfg.d_model, cfg.d_model);
    l.w_in = Matrix(cfg.d_mlp, cfg.d_model);
    l.w_gate = Matrix(cfg.d_mlp, cfg.d_model);
    l.w_out = Matrix(cfg.d_model, cfg.d_mlp);
    l.norm1.assign(static_cast<std::size_t>(cfg.d_model), 0.0f);
    l.norm2.assign(static_cast<std::size_t>(cfg.d_model), 0.0f);
  }
  return w;
}

void ModelConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1)
      fail(ErrCode::kFormat,
           std::string("config field ") + name + " must be >= 1");
  };
  positive(n_layers, "n_layers");
  positive(d_model, "d_model");
  positive(n_heads, "n_heads");
  positive(d_head, "d_head");
  positive(d_mlp, "d_mlp");
  positive(vocab_size, "vocab_size");
  positive(max_seq_len, "max_seq_len");
  if (d_model % n_heads != 0)
    fail(ErrCode::kFormat, "n_heads must divide d_model");
  if (d_head != d_model / n_heads)
    fail(ErrCode::kFormat, "d_head must equal d_model / n_heads");
  if (d_head % 2 != 0)
    fail(ErrCode::kFormat, "d_head must be even for rotary positions");
  if (!(norm_eps > 0.0f)) fail(ErrCode::kFormat, "norm_eps must be > 0");
}

void validate_weights(const ModelConfig& config, const ModelWeights& weights) {
  config.validate();
  if (static_cast<int>(weights.layers.size()) != config.n_layers)
    fail(ErrCode::kShape, "layer count does not match config");
  walk_tensors(config, const_cast<ModelWeights&>(weights),
               [](const TensorRef& t) {
                 if (t.numel != shape_numel(t.shape))
                   fail(ErrCode::kShape,
                        "tensor shape mismatch for \"" + t.name + "\"");
                 for (std::size_t i = 0; i < t.numel; ++i) {
                   if (!std::isfinite(t.data[i]))
                     fail(ErrCode::kNonFinite,
                          "non-finite value in tensor \"" + t.name + "\"");
                 }
               });
}

void save_weights(const std::filesystem::path& path, const ModelConfig& config,
                  const ModelWeights& weights) {
  validate_weights(config, weights);
  json header;
  header["n_layers"] = config.n_layers;
  header["d_model"] = config.d_model;
  header["n_heads"] = config.n_heads;
  header["d_head"] = config.d_head;
  header["d_mlp"] = config.d_mlp;
  header["vocab_size"] = config.vocab_size;
  header["max_seq_len"] = config.max_seq_len;
  header["norm_eps"] = config.norm_eps;
  json tensors = json::array();
  std::size_t offset = 0;
  walk_tensors(config, const_cast<ModelWeights&>(weights),
               [&](const TensorRef& t) {
                 json entry;
                 entry["name"] = t.name;
                 entry["dtype"] = "f32";
                 entry["shape"] = t.shape;
                 entry["byte_offset"] = offset;
                 tensors.push_back(entry);
                 offset += t.numel * sizeof(float);
               });
  header["tensors"] = tensors;
  std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrCode::kIo, "cannot write weight file " + path.string());
  std::uint32_t len = static_cast<std::uint32_t>(header_text.size());
  unsigned char len_le[4] = {
      static_cast<unsigned char>(len & 0xff),
      static_cast<unsigned char>((len >> 8) & 0xff),
      static_cast<unsigned char>((len >> 16) & 0xff),
      static_cast<unsigned char>((len >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(len_le), 4);
  out.write(header_text.data(), static_cast<std::streamsize>(len));
  walk_tensors(config, const_cast<ModelWeights&>(weights),
               [&](const TensorRef& t) {
                 out.write(reinterpret_cast<const char*>(t.data),
                           static_cast<std::streamsize>(t.numel *
                                                        sizeof(float)));
               });
  if (!out) fail(ErrCode::kIo, "short write to " + path.string());
}

ModelBundle load_model(const std::filesystem::path& weights_path,
                       const std::filesystem::path& vocab_path) {
  std::ifstream in(weights_path, std::ios::binary);
  if (!in) fail(ErrCode::kIo, "cannot open weight file " + weights_path.string());
  unsigned char len_le[4];
  if (!in.read(reinterpret_cast<char*>(len_le), 4))
    fail(ErrCode::kFormat, "malformed header: file shorter than 4 bytes");
  std::uint32_t len = static_cast<std::uint32_t>(len_le[0]) |
                      (static_cast<std::uint32_t>(len_le[1]) << 8) |
                      (static_cast<std::uint32_t>(len_le[2]) << 16) |
                      (static_cast<std::uint32_t>(len_le[3]) << 24);
  if (len == 0 || len > (1u << 24))
    fail(ErrCode::kFormat, "malformed header: implausible header length");
  std::string header_text(len, '\0');
  if (!in.read(header_text.data(), static_cast<std::streamsize>(len)))
    fail(ErrCode::kFormat, "malformed header: truncated JSON header");
  json header = json::parse(header_text, nullptr, false);
  if (header.is_discarded())
    fail(ErrCode::kFormat, "malformed header: invalid JSON");

  ModelConfig cfg = config_from_json(header);
  cfg.validate();

  std::vector<char> payload{std::istreambuf_iterator<char>(in),
                            std::istreambuf_iterator<char>()};
  if (!header.contains("tensors") || !header["tensors"].is_array())
    fail(ErrCode::kFormat, "malformed header: missing tensor table");

  struct Entry {
    std::vector<int> shape;
    std::size_t byte_offset;
  };
  std::map<std::string, Entry> table;
  for (const auto& t : header["tensors"]) {
    std::string name = t.value("name", "");
    if (name.empty())
      fail(ErrCode::kFormat, "malformed header: unnamed tensor entry");
    if (t.value("dtype", "") != "f32")
      fail(ErrCode::kFormat, "unsupported dtype for tensor \"" + name + "\"");
    Entry e;
    e.byte_offset = t.value("byte_offset", std::size_t{0});
    for (const auto& d : t.at("shape")) e.shape.push_back(d.get<int>());
    table[name] = e;
  }

  ModelBundle bundle;
  bundle.config = cfg;
  bundle.weights = allocate_weights(cfg);
  walk_tensors(cfg, bundle.weights, [&](const TensorRef& t) {
    auto it = table.find(t.name);
    if (it == table.end())
      fail(ErrCode::kFormat, "missing tensor \"" + t.name + "\"");
    if (it->second.shape != t.shape)
      fail(ErrCode::kShape, "tensor shape mismatch for \"" + t.name + "\"");
    std::size_t bytes = t.numel * sizeof(float);
    if (it->second.byte_offset + bytes > payload.size())
      fail(ErrCode::kFormat,
           "tensor \"" + t.name + "\" extends past end of payload");
    std::memcpy(t.data, payload.data() + it->second.byte_offset, bytes);
    for (std::size_t i = 0; i < t.numel; ++i) {
      if (!std::isfinite(t.data[i]))
        fail(ErrCode::kNonFinite,
             "non-finite value in tensor \"" + t.name + "\"");
    }
  });

  bundle.vocab = Vocabulary::from_file(vocab_path);
  if (bundle.vocab.size() != cfg.vocab_size)
    fail(ErrCode::kVocab,
         "vocabulary has " + std::to_string(bundle.vocab.size()) +
             " entries but config says " + std::to_string(cfg.vocab_size));
  return bundle;
}

}  // namespace mathlens
