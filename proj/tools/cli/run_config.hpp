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

#ifndef JCCH_TOOLS_CLI_RUN_CONFIG_HPP_
#define JCCH_TOOLS_CLI_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jcch/bounds.hpp"
#include "jcch/dataset.hpp"
#include "jcch/trainer.hpp"

namespace jcch::cli {

enum class KeyType { kInt, kReal, kBool, kChoice, kList };

struct KeySpec {
  std::string name;
  KeyType type;
  std::optional<std::string> default_value;  // nullopt: unset until given
  std::vector<std::string> choices;          // kChoice only
  std::string help;
};

// Every key the tool understands, in the order config files are written.
const std::vector<KeySpec>& KnownKeys();

// Flat key=value run configuration. Values are validated against the key's
// type when set; unknown keys are rejected.
class RunConfig {
 public:
  RunConfig();

  // Throws ValidationError naming the key on an unknown key or bad value.
  void Set(const std::string& key, const std::string& value);
  // "key=value".
  void SetAssignment(const std::string& assignment);
  // Lines of "key = value"; '#' starts a comment. Throws IoError if the file
  // cannot be read.
  void LoadFile(const std::filesystem::path& path);

  bool Has(const std::string& key) const;
  // Throws ValidationError "missing required key: <key>" when unset.
  void Require(const std::vector<std::string>& keys) const;

  std::string GetString(const std::string& key) const;
  std::uint64_t GetInt(const std::string& key) const;
  double GetReal(const std::string& key) const;
  bool GetBool(const std::string& key) const;
  std::vector<std::string> GetList(const std::string& key) const;

  // Fills seeds left on "auto" from `seed`. Idempotent.
  void Resolve();

  // Resolved key = value lines, one per set key, in KnownKeys() order, with
  // a leading comment carrying the tool version.
  std::string Serialize() const;

  // Typed views. Keys that a view needs but are unset raise ValidationError.
  SynthSpec Synth() const;
  SplitSpec SplitFor(std::size_t n) const;
  TrainConfig Train() const;
  LossWeights Weights() const;
  CertifySpec Certify() const;
  std::vector<std::size_t> Ks() const;

 private:
  std::map<std::string, std::string> values_;
};

// The tool version echoed into every output directory.
const char* ToolVersion();

}  // namespace jcch::cli

#endif  // JCCH_TOOLS_CLI_RUN_CONFIG_HPP_
