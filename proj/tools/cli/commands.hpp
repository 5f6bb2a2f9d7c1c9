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

#ifndef JCCH_TOOLS_CLI_COMMANDS_HPP_
#define JCCH_TOOLS_CLI_COMMANDS_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace jcch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation or certification failure
inline constexpr int kExitIo = 2;

// Fixed file names inside output directories.
inline constexpr const char* kConfigFile = "config.txt";
inline constexpr const char* kDatasetFile = "dataset.jcch";
inline constexpr const char* kQueryFile = "query.jcch";
inline constexpr const char* kDatabaseFile = "database.jcch";
inline constexpr const char* kTrainFile = "train.jcch";
inline constexpr const char* kCoefficientFile = "coefficients.jccf";
inline constexpr const char* kCertifyFile = "certify.csv";
inline constexpr const char* kCheckpointFile = "model.jccm";
inline constexpr const char* kTrainReportFile = "train_report.csv";
inline constexpr const char* kTimingFile = "timing.csv";
inline constexpr const char* kCodes1File = "codes1.jccb";
inline constexpr const char* kCodes2File = "codes2.jccb";
inline constexpr const char* kEvalFile = "eval.csv";
inline constexpr const char* kSweepFile = "sweep.csv";
inline constexpr const char* kSweepPlotFile = "sweep.json";

// Options shared by every subcommand.
struct CommonOptions {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;  // key=value
  std::filesystem::path out_dir;
  bool force = false;
};

struct GenOptions {
  std::optional<std::filesystem::path> labels_csv;
  std::optional<std::filesystem::path> features1_csv;
  std::optional<std::filesystem::path> features2_csv;
};

struct CoeffsOptions {
  std::filesystem::path dataset;
  std::optional<std::uint64_t> anchors;
};

struct TrainOptions {
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> coefficients;
};

struct EncodeOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path dataset;
};

struct EvalOptions {
  std::filesystem::path query_codes;     // encode output directory
  std::filesystem::path database_codes;  // encode output directory
  std::filesystem::path query_dataset;
  std::filesystem::path database_dataset;
  std::string direction = "both";        // 1to2, 2to1 or both
};

struct SweepOptions {
  std::optional<std::filesystem::path> data_dir;  // gen output; else generated
  std::optional<std::string> param;
  std::optional<std::string> values;
  bool plot_json = false;
};

// Merged configuration: defaults, --config file, --set overrides, --seed.
RunConfig ResolveConfig(const CommonOptions& common);

// Each returns an exit code; library errors propagate as exceptions.
int CmdGen(const CommonOptions& common, const GenOptions& options,
           std::ostream& log);
int CmdCoeffs(const CommonOptions& common, const CoeffsOptions& options,
              std::ostream& log);
int CmdCertify(const CommonOptions& common, std::ostream& log);
int CmdTrain(const CommonOptions& common, const TrainOptions& options,
             std::ostream& log);
int CmdEncode(const CommonOptions& common, const EncodeOptions& options,
              std::ostream& log);
int CmdEval(const CommonOptions& common, const EvalOptions& options,
            std::ostream& log);
int CmdSweep(const CommonOptions& common, const SweepOptions& options,
             std::ostream& log);

// Full command line (args[0] is the program name). Maps errors to exit
// codes and prints them to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace jcch::cli

#endif  // JCCH_TOOLS_CLI_COMMANDS_HPP_
