/*
 * Copyright 2026 The JCCH Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "jcch/error.hpp"

#ifndef JCCH_VERSION
#define JCCH_VERSION "0.0.0"
#endif

namespace jcch::cli {
namespace {

constexpr const char* kAuto = "auto";

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<std::uint64_t> ParseInt(const std::string& s) {
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> ParseReal(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<bool> ParseBool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  return std::nullopt;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(Trim(item));
  return out;
}

const KeySpec& Spec(const std::string& key) {
  for (const KeySpec& k : KnownKeys()) {
    if (k.name == key) return k;
  }
  throw ValidationError("unknown config key: " + key);
}

bool IsSeedKey(const std::string& key) {
  return key == "split_seed" || key == "anchor_seed" || key == "train_seed" ||
         key == "certify_seed";
}

}  // namespace

const char* ToolVersion() { return JCCH_VERSION; }

const std::vector<KeySpec>& KnownKeys() {
  using T = KeyType;
  static const std::vector<KeySpec> keys = {
      // data
      {"n", T::kInt, std::nullopt, {}, "number of items"},
      {"C", T::kInt, std::nullopt, {}, "number of labels"},
      {"label_model", T::kChoice, std::nullopt, {"uniform", "chain", "multiclass"},
       "label generator"},
      {"d1", T::kInt, "32", {}, "modality-1 feature dimension"},
      {"d2", T::kInt, "48", {}, "modality-2 feature dimension"},
      {"p", T::kReal, "0.5", {}, "uniform model label probability"},
      {"p_root", T::kReal, "0.5", {}, "chain model root probability"},
      {"p_child", T::kReal, "0.5", {}, "chain model child-given-parent probability"},
      {"noise_sigma", T::kReal, "0.1", {}, "feature noise standard deviation"},
      {"seed", T::kInt, "0", {}, "master seed"},
      // split
      {"n_query", T::kInt, "100", {}, "query items"},
      {"n_train", T::kInt, "0", {}, "training items drawn from the database, 0 = all"},
      {"split_seed", T::kInt, kAuto, {}, "split seed, auto = seed + 1"},
      // coefficients
      {"anchor_l", T::kInt, "0", {}, "anchor count, 0 = every training item"},
      {"anchor_seed", T::kInt, kAuto, {}, "anchor seed, auto = seed + 2"},
      // training
      {"mode", T::kChoice, "jcch", {"jcch", "jcch-b"}, "coefficient mode"},
      {"epochs", T::kInt, "30", {}, "training epochs"},
      {"batch_size", T::kInt, "50", {}, "minibatch size"},
      {"lr_backbone", T::kReal, "0.01", {}, "hidden-layer learning rate"},
      {"lr_head", T::kReal, "0.01", {}, "hash, classifier and center learning rate"},
      {"momentum", T::kReal, "0.9", {}, "SGD momentum"},
      {"weight_decay", T::kReal, "0.0001", {}, "weight decay"},
      {"hidden_dim", T::kInt, "256", {}, "hidden width"},
      {"code_length", T::kInt, "32", {}, "hash bits r"},
      {"auto_alpha", T::kBool, "false", {}, "adapt alpha towards alpha_target"},
      {"alpha_target", T::kReal, "0.15", {}, "target quantization level"},
      {"train_seed", T::kInt, kAuto, {}, "init and shuffle seed, auto = seed + 3"},
      // loss weights
      {"lambda", T::kReal, "0.01", {}, "center-distance weight"},
      {"mu", T::kReal, "0.1", {}, "classification weight"},
      {"alpha", T::kReal, "0.1", {}, "quantization weight"},
      {"beta", T::kReal, "0.2", {}, "pairing weight"},
      {"margin", T::kReal, "0", {}, "hinge margin"},
      {"metric", T::kChoice, "l2", {"l1", "l2"}, "distance"},
      {"literal_quantization", T::kBool, "false", {}, "sum(f) instead of sum(|f|)"},
      // evaluation
      {"ks", T::kList, "200", {}, "precision@k cut-offs"},
      // certification
      {"trials", T::kInt, "600", {}, "certification instances"},
      {"certify_seed", T::kInt, kAuto, {}, "first instance seed, auto = seed + 1"},
      {"max_n", T::kInt, "20", {}, "largest instance size"},
      {"max_labels", T::kInt, "5", {}, "largest label count"},
      {"max_code_length", T::kInt, "8", {}, "largest code length"},
      {"certify_margin", T::kReal, "0.5", {}, "secondary hinge margin"},
      {"coefficient_scale", T::kReal, "1", {}, "coefficient multiplier, 0.5 = negative control"},
      {"tolerance", T::kReal, "1e-9", {}, "allowed negative slack"},
      // sweep
      {"sweep_param", T::kChoice, std::nullopt, {"lambda", "beta", "anchor_l"},
       "swept parameter"},
      {"sweep_values", T::kList, std::nullopt, {}, "swept values; anchor_l accepts n/k"},
      // execution
      {"threads", T::kInt, "1", {}, "worker threads"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const KeySpec& k : KnownKeys()) {
    if (k.default_value) values_[k.name] = *k.default_value;
  }
}

void RunConfig::Set(const std::string& key, const std::string& raw) {
  const KeySpec& spec = Spec(key);
  const std::string value = Trim(raw);
  auto bad = [&]() {
    return ValidationError("invalid value for " + key + ": '" + value + "'");
  };
  switch (spec.type) {
    case KeyType::kInt:
      if (!(IsSeedKey(key) && value == kAuto) && !ParseInt(value)) throw bad();
      break;
    case KeyType::kReal:
      if (!ParseReal(value)) throw bad();
      break;
    case KeyType::kBool:
      if (!ParseBool(value)) throw bad();
      break;
    case KeyType::kChoice:
      if (std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
        throw bad();
      }
      break;
    case KeyType::kList:
      for (const std::string& item : SplitList(value)) {
        if (item.empty()) throw bad();
      }
      break;
  }
  values_[key] = value;
}

void RunConfig::SetAssignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ValidationError("expected key=value, got '" + assignment + "'");
  }
  Set(Trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void RunConfig::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    try {
      SetAssignment(line);
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

bool RunConfig::Has(const std::string& key) const {
  Spec(key);
  return values_.count(key) != 0;
}

void RunConfig::Require(const std::vector<std::string>& keys) const {
  for (const std::string& key : keys) {
    if (!Has(key)) throw ValidationError("missing required key: " + key);
  }
}

std::string RunConfig::GetString(const std::string& key) const {
  Require({key});
  return values_.at(key);
}

std::uint64_t RunConfig::GetInt(const std::string& key) const {
  const std::string v = GetString(key);
  if (v == kAuto) throw ValidationError(key + " is unresolved");
  return *ParseInt(v);
}

double RunConfig::GetReal(const std::string& key) const { return *ParseReal(GetString(key)); }

bool RunConfig::GetBool(const std::string& key) const { return *ParseBool(GetString(key)); }

std::vector<std::string> RunConfig::GetList(const std::string& key) const {
  return SplitList(GetString(key));
}

void RunConfig::Resolve() {
  const std::uint64_t seed = GetInt("seed");
  const std::pair<const char*, std::uint64_t> derived[] = {
      {"split_seed", 1}, {"anchor_seed", 2}, {"train_seed", 3}, {"certify_seed", 1}};
  for (const auto& [key, offset] : derived) {
    if (values_[key] == kAuto) values_[key] = std::to_string(seed + offset);
  }
}

std::string RunConfig::Serialize() const {
  std::ostringstream out;
  out << "# jcch " << ToolVersion() << "\n";
  for (const KeySpec& k : KnownKeys()) {
    auto it = values_.find(k.name);
    if (it != values_.end()) out << k.name << " = " << it->second << "\n";
  }
  return out.str();
}

SynthSpec RunConfig::Synth() const {
  Require({"n", "C", "label_model"});
  SynthSpec s;
  s.n = GetInt("n");
  s.num_labels = GetInt("C");
  s.d1 = GetInt("d1");
  s.d2 = GetInt("d2");
  const std::string model = GetString("label_model");
  s.label_model = model == "uniform" ? LabelModel::kUniform
                  : model == "chain" ? LabelModel::kChain
                                     : LabelModel::kMulticlass;
  s.p = GetReal("p");
  s.p_root = GetReal("p_root");
  s.p_child = GetReal("p_child");
  s.noise_sigma = GetReal("noise_sigma");
  s.seed = GetInt("seed");
  s.Validate();
  return s;
}

SplitSpec RunConfig::SplitFor(std::size_t n) const {
  SplitSpec s;
  s.n_query = GetInt("n_query");
  if (s.n_query >= n) {
    throw ValidationError("n_query must be smaller than n (" + std::to_string(n) + ")");
  }
  s.n_train = GetInt("n_train");
  if (s.n_train == 0) s.n_train = n - s.n_query;
  s.seed = GetInt("split_seed");
  return s;
}

LossWeights RunConfig::Weights() const {
  LossWeights w;
  w.lambda = GetReal("lambda");
  w.mu = GetReal("mu");
  w.alpha = GetReal("alpha");
  w.beta = GetReal("beta");
  w.margin = GetReal("margin");
  w.metric = GetString("metric") == "l1" ? Metric::kL1 : Metric::kL2;
  w.literal_quantization = GetBool("literal_quantization");
  w.Validate();
  return w;
}

TrainConfig RunConfig::Train() const {
  TrainConfig c;
  c.epochs = GetInt("epochs");
  c.batch_size = GetInt("batch_size");
  c.lr_backbone = GetReal("lr_backbone");
  c.lr_head = GetReal("lr_head");
  c.momentum = GetReal("momentum");
  c.weight_decay = GetReal("weight_decay");
  c.weights = Weights();
  c.hidden_dim = GetInt("hidden_dim");
  c.code_length = GetInt("code_length");
  c.auto_alpha = GetBool("auto_alpha");
  c.alpha_target = GetReal("alpha_target");
  c.mode = GetString("mode") == "jcch-b" ? TrainMode::kBaseline : TrainMode::kJcch;
  c.seed = GetInt("train_seed");
  return c;
}

CertifySpec RunConfig::Certify() const {
  CertifySpec s;
  s.base_seed = GetInt("certify_seed");
  s.max_n = GetInt("max_n");
  s.max_labels = GetInt("max_labels");
  s.max_code_length = GetInt("max_code_length");
  s.margin = GetReal("certify_margin");
  s.coefficient_scale = GetReal("coefficient_scale");
  s.tolerance = GetReal("tolerance");
  s.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, GetInt("threads")));
  return s;
}

std::vector<std::size_t> RunConfig::Ks() const {
  std::vector<std::size_t> ks;
  for (const std::string& item : GetList("ks")) {
    const auto k = ParseInt(item);
    if (!k || *k == 0) throw ValidationError("invalid value in ks: '" + item + "'");
    ks.push_back(*k);
  }
  return ks;
}

}  // namespace jcch::cli
