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

#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "jcch/bounds.hpp"
#include "jcch/coefficients.hpp"
#include "jcch/dataset.hpp"
#include "jcch/error.hpp"
#include "jcch/model.hpp"
#include "jcch/retrieval.hpp"
#include "jcch/trainer.hpp"

namespace jcch::cli {
namespace fs = std::filesystem;

namespace {

void PrepareOutDir(const fs::path& dir, bool force) {
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) {
      throw ValidationError("output path is not a directory: " + dir.string());
    }
    if (!fs::is_empty(dir, ec) && !force) {
      throw ValidationError("output directory " + dir.string() +
                            " is not empty (use --force)");
    }
    return;
  }
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void WriteFile(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void EchoConfig(const RunConfig& config, const fs::path& dir) {
  WriteFile(dir / kConfigFile, [&](std::ostream& out) { out << config.Serialize(); });
}

// Prepares the output directory and writes the resolved config into it.
RunConfig Start(const CommonOptions& common) {
  RunConfig config = ResolveConfig(common);
  PrepareOutDir(common.out_dir, common.force);
  EchoConfig(config, common.out_dir);
  return config;
}

AnchorSet AnchorsFor(const RunConfig& config, std::size_t n) {
  const std::uint64_t l = config.GetInt("anchor_l");
  if (l > n) {
    throw ValidationError("anchor_l = " + std::to_string(l) + " exceeds n = " +
                          std::to_string(n));
  }
  if (l == 0 || l == n) return AnchorSet::All(n);
  return AnchorSet::Sample(n, l, config.GetInt("anchor_seed"));
}

unsigned Threads(const RunConfig& config) {
  return static_cast<unsigned>(std::max<std::uint64_t>(1, config.GetInt("threads")));
}

bool AllZero(const CoefficientSet& c) {
  auto zero = [](const Matrix& m) {
    return std::all_of(m.data(), m.data() + m.rows() * m.cols(), [](double v) { return v == 0.0; });
  };
  return zero(c.q) && zero(c.u);
}

// Coefficients ready for Fit.
CoefficientSet TrainingCoefficients(const RunConfig& config, const TrainConfig& train,
                                    const CrossModalDataset& data) {
  if (train.mode == TrainMode::kBaseline) return BaselineCoefficients(data.labels);
  const AnchorSet anchors = AnchorsFor(config, data.n());
  return Rescale(EstimateCoefficients(data.labels, anchors, false, Threads(config)).coefficients,
                 data.labels);
}

std::vector<EvalReport> Reports(const CrossModalEval& eval) {
  return {eval.query1, eval.query2};
}

void WriteTiming(const TrainReport& report, std::ostream& out) {
  out << "epoch,elapsed_seconds\n" << std::setprecision(6);
  for (const EpochRecord& e : report.epochs) out << e.epoch << ',' << e.elapsed_seconds << '\n';
}

// ---- sweep ----------------------------------------------------------------

struct SweepData {
  CrossModalDataset train;
  CrossModalDataset query;
  CrossModalDataset database;
};

struct SweepPoint {
  std::string label;  // value as written to the CSV
  double x = 0.0;
  CrossModalEval eval;
  TrainReport report;
  double center_accuracy1 = 0.0;
  double center_accuracy2 = 0.0;
};

// "n", "n/k" or a plain count; n is the training-set size.
std::uint64_t ParseAnchorValue(const std::string& text, std::size_t n) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) {
      throw ValidationError("invalid anchor_l value: '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
  };
  if (text == "n") return n;
  if (text.rfind("n/", 0) == 0) {
    const std::uint64_t k = number(text.substr(2));
    if (k == 0) throw ValidationError("invalid anchor_l value: '" + text + "'");
    return std::max<std::uint64_t>(1, n / k);
  }
  return number(text);
}

SweepPoint RunSweepPoint(RunConfig config, const std::string& param, const std::string& raw,
                         const SweepData& data) {
  SweepPoint point;
  if (param == "anchor_l") {
    const std::uint64_t l = ParseAnchorValue(raw, data.train.n());
    config.Set("anchor_l", std::to_string(l));
    point.label = std::to_string(l);
    point.x = static_cast<double>(l);
  } else {
    config.Set(param, raw);
    point.label = config.GetString(param);
    point.x = config.GetReal(param);
  }
  const TrainConfig train = config.Train();
  const CoefficientSet coeffs = TrainingCoefficients(config, train, data.train);
  FitResult fit = Fit(data.train, coeffs, train);
  const std::vector<std::size_t> ks = config.Ks();
  point.eval = EvaluateRetrieval(fit.params, data.query, data.database, ks, 1);
  point.center_accuracy1 = NearestCenterAccuracy(fit.params, data.train, 0);
  point.center_accuracy2 = NearestCenterAccuracy(fit.params, data.train, 1);
  point.report = std::move(fit.report);
  return point;
}

struct SweepRow {
  std::string direction;
  std::string metric;
  double value;
};

double FinalMeanNorm(const TrainReport& r) {
  if (r.epochs.empty()) return r.initial_mean_norm;
  return 0.5 * (r.epochs.back().mean_norm1 + r.epochs.back().mean_norm2);
}

// ‖F‖ counts as shrunk when it ends below 0.9 of the final norm at the
// smallest swept value.
constexpr double kShrinkRatio = 0.9;

std::vector<SweepRow> RowsFor(const SweepPoint& p, double reference_norm) {
  std::vector<SweepRow> rows;
  for (const EvalReport& r : Reports(p.eval)) {
    rows.push_back({r.direction, "map", r.map});
    for (const auto& [k, v] : r.precision_at_k) {
      rows.push_back({r.direction, "precision@" + std::to_string(k), v});
    }
  }
  const TrainReport& rep = p.report;
  const bool trained = !rep.epochs.empty();
  const double norm = FinalMeanNorm(rep);
  rows.push_back({"all", "initial_mean_norm", rep.initial_mean_norm});
  rows.push_back({"all", "mean_norm1", trained ? rep.epochs.back().mean_norm1 : norm});
  rows.push_back({"all", "mean_norm2", trained ? rep.epochs.back().mean_norm2 : norm});
  rows.push_back({"all", "quantization1", trained ? rep.epochs.back().quantization1 : 0.0});
  rows.push_back({"all", "quantization2", trained ? rep.epochs.back().quantization2 : 0.0});
  rows.push_back({"all", "center_accuracy1", p.center_accuracy1});
  rows.push_back({"all", "center_accuracy2", p.center_accuracy2});
  const double ratio = reference_norm > 0.0 ? norm / reference_norm : 1.0;
  rows.push_back({"all", "norm_ratio", ratio});
  rows.push_back({"all", "norm_shrunk", ratio < kShrinkRatio ? 1.0 : 0.0});
  return rows;
}

SweepData LoadSweepData(const RunConfig& config, const SweepOptions& options) {
  SweepData data;
  if (options.data_dir) {
    data.train = LoadDataset(*options.data_dir / kTrainFile);
    data.query = LoadDataset(*options.data_dir / kQueryFile);
    data.database = LoadDataset(*options.data_dir / kDatabaseFile);
    return data;
  }
  const CrossModalDataset full = GenerateSynthetic(config.Synth());
  const DatasetSplit split = Split(full.n(), config.SplitFor(full.n()));
  if (split.query.empty()) throw ValidationError("sweep needs n_query >= 1");
  data.train = full.Subset(split.train);
  data.query = full.Subset(split.query);
  data.database = full.Subset(split.database);
  return data;
}

}  // namespace

RunConfig ResolveConfig(const CommonOptions& common) {
  RunConfig config;
  if (common.config_path) config.LoadFile(*common.config_path);
  for (const std::string& assignment : common.overrides) config.SetAssignment(assignment);
  if (common.seed) config.Set("seed", std::to_string(*common.seed));
  config.Resolve();
  return config;
}

int CmdGen(const CommonOptions& common, const GenOptions& options, std::ostream& log) {
  RunConfig config = ResolveConfig(common);
  const int csv_given = static_cast<int>(options.labels_csv.has_value()) +
                        static_cast<int>(options.features1_csv.has_value()) +
                        static_cast<int>(options.features2_csv.has_value());
  if (csv_given != 0 && csv_given != 3) {
    throw ValidationError("CSV import needs --labels-csv, --features1-csv and --features2-csv");
  }
  CrossModalDataset full;
  if (csv_given == 3) {
    full.labels = ReadLabelsCsv(*options.labels_csv);
    full.features1 = ReadFeaturesCsv(*options.features1_csv);
    full.features2 = ReadFeaturesCsv(*options.features2_csv);
    full.Validate();
    config.Set("n", std::to_string(full.n()));
    config.Set("C", std::to_string(full.labels.num_labels()));
    config.Set("d1", std::to_string(full.features1.cols()));
    config.Set("d2", std::to_string(full.features2.cols()));
  } else {
    full = GenerateSynthetic(config.Synth());
  }
  const DatasetSplit split = Split(full.n(), config.SplitFor(full.n()));

  PrepareOutDir(common.out_dir, common.force);
  EchoConfig(config, common.out_dir);
  SaveDataset(full, common.out_dir / kDatasetFile);
  if (!split.query.empty()) SaveDataset(full.Subset(split.query), common.out_dir / kQueryFile);
  SaveDataset(full.Subset(split.database), common.out_dir / kDatabaseFile);
  SaveDataset(full.Subset(split.train), common.out_dir / kTrainFile);
  log << "wrote " << full.n() << " items (" << split.query.size() << " query, "
      << split.database.size() << " database, " << split.train.size() << " train) to "
      << common.out_dir.string() << "\n";
  return kExitOk;
}

int CmdCoeffs(const CommonOptions& common, const CoeffsOptions& options, std::ostream& log) {
  CommonOptions merged = common;
  if (options.anchors) merged.overrides.push_back("anchor_l=" + std::to_string(*options.anchors));
  RunConfig config = ResolveConfig(merged);
  const CrossModalDataset data = LoadDataset(options.dataset);
  const AnchorSet anchors = AnchorsFor(config, data.n());
  EstimateResult est = EstimateCoefficients(data.labels, anchors, false, Threads(config));

  PrepareOutDir(common.out_dir, common.force);
  EchoConfig(config, common.out_dir);
  if (AllZero(est.coefficients)) {
    log << "warning: the labels admit no (anchor, positive, negative) triplet; "
           "coefficients are all zero\n";
  }
  SaveCoefficients(est.coefficients, common.out_dir / kCoefficientFile);
  log << "estimated coefficients for " << data.n() << " items with "
      << anchors.indices.size() << " anchors\n";
  return kExitOk;
}

int CmdCertify(const CommonOptions& common, std::ostream& log) {
  const RunConfig config = Start(common);
  const std::size_t trials = config.GetInt("trials");
  const CertifyResult result = Certify(config.Certify(), trials);
  WriteFile(common.out_dir / kCertifyFile,
            [&](std::ostream& out) { WriteCertifyCsv(result, out); });
  if (!result.ok()) {
    log << "certification FAILED: " << result.violations << " of " << trials
        << " instances violate the bound chain, first at seed "
        << *result.first_violation_seed << ", min slack " << result.min_slack << "\n";
    return kExitFailure;
  }
  log << "certified " << trials << " instances, min slack " << result.min_slack << "\n";
  return kExitOk;
}

int CmdTrain(const CommonOptions& common, const TrainOptions& options, std::ostream& log) {
  const RunConfig config = ResolveConfig(common);
  const CrossModalDataset data = LoadDataset(options.dataset);
  const TrainConfig train = config.Train();
  CoefficientSet coeffs;
  if (train.mode == TrainMode::kBaseline) {
    coeffs = BaselineCoefficients(data.labels);
  } else {
    if (!options.coefficients) throw ValidationError("mode jcch needs --coeffs");
    coeffs = LoadCoefficients(*options.coefficients);
    if (coeffs.n() != data.n() || coeffs.num_labels() != data.labels.num_labels()) {
      throw ValidationError("coefficient file does not match the dataset shape");
    }
    if (!coeffs.rescaled) coeffs = Rescale(coeffs, data.labels);
  }

  PrepareOutDir(common.out_dir, common.force);
  EchoConfig(config, common.out_dir);
  try {
    const FitResult fit = Fit(data, coeffs, train);
    SaveCheckpoint(fit.params, common.out_dir / kCheckpointFile);
    WriteFile(common.out_dir / kTrainReportFile,
              [&](std::ostream& out) { WriteTrainReportCsv(fit.report, out); });
    WriteFile(common.out_dir / kTimingFile,
              [&](std::ostream& out) { WriteTiming(fit.report, out); });
    log << "trained " << fit.report.epochs.size() << " epochs, mode "
        << TrainModeName(train.mode) << "\n";
  } catch (const TrainingDivergedError& e) {
    WriteFile(common.out_dir / kTrainReportFile,
              [&](std::ostream& out) { WriteTrainReportCsv(e.report(), out); });
    throw;
  }
  return kExitOk;
}

int CmdEncode(const CommonOptions& common, const EncodeOptions& options, std::ostream& log) {
  const RunConfig config = ResolveConfig(common);
  const EncoderParams params = LoadCheckpoint(options.checkpoint);
  const CrossModalDataset data = LoadDataset(options.dataset);
  if (data.features1.cols() != params.dims.input1 || data.features2.cols() != params.dims.input2) {
    throw ValidationError("dataset feature dimensions do not match the checkpoint");
  }
  const HashCodeSet codes1 = Encode(EncodeActivations(params, data.features1, 0));
  const HashCodeSet codes2 = Encode(EncodeActivations(params, data.features2, 1));

  PrepareOutDir(common.out_dir, common.force);
  EchoConfig(config, common.out_dir);
  SaveCodes(codes1, common.out_dir / kCodes1File);
  SaveCodes(codes2, common.out_dir / kCodes2File);
  log << "encoded " << data.n() << " items with " << params.dims.code_length << " bits\n";
  return kExitOk;
}

int CmdEval(const CommonOptions& common, const EvalOptions& options, std::ostream& log) {
  const RunConfig config = ResolveConfig(common);
  if (options.direction != "1to2" && options.direction != "2to1" &&
      options.direction != "both") {
    throw ValidationError("direction must be 1to2, 2to1 or both");
  }
  const std::vector<std::size_t> ks = config.Ks();
  const LabelMatrix qlabels = LoadDataset(options.query_dataset).labels;
  const LabelMatrix dblabels = LoadDataset(options.database_dataset).labels;

  std::vector<EvalReport> reports;
  auto run = [&](const char* direction, const char* qfile, const char* dbfile) {
    const HashCodeSet q = LoadCodes(options.query_codes / qfile);
    const HashCodeSet db = LoadCodes(options.database_codes / dbfile);
    if (q.n() != qlabels.n() || db.n() != dblabels.n()) {
      throw ValidationError("code and label counts differ");
    }
    if (q.code_length() != db.code_length()) {
      throw ValidationError("query and database code lengths differ");
    }
    reports.push_back(Evaluate(q, db, qlabels, dblabels, ks, direction, Threads(config)));
  };
  if (options.direction != "2to1") run("1to2", kCodes1File, kCodes2File);
  if (options.direction != "1to2") run("2to1", kCodes2File, kCodes1File);

  PrepareOutDir(common.out_dir, common.force);
  EchoConfig(config, common.out_dir);
  WriteFile(common.out_dir / kEvalFile, [&](std::ostream& out) { WriteEvalCsv(reports, out); });
  for (const EvalReport& r : reports) log << r.direction << " map " << r.map << "\n";
  return kExitOk;
}

int CmdSweep(const CommonOptions& common, const SweepOptions& options, std::ostream& log) {
  CommonOptions merged = common;
  if (options.param) merged.overrides.push_back("sweep_param=" + *options.param);
  if (options.values) merged.overrides.push_back("sweep_values=" + *options.values);
  const RunConfig config = ResolveConfig(merged);
  config.Require({"sweep_param", "sweep_values"});
  const std::string param = config.GetString("sweep_param");
  std::vector<std::string> values = config.GetList("sweep_values");
  if (values.empty()) throw ValidationError("sweep_values is empty");

  const SweepData data = LoadSweepData(config, options);
  PrepareOutDir(common.out_dir, common.force);
  EchoConfig(config, common.out_dir);

  // Points are independent; each runs single-threaded so results do not
  // depend on the worker count.
  std::vector<SweepPoint> points(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  const unsigned workers =
      std::min<unsigned>(Threads(config), static_cast<unsigned>(values.size()));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < values.size(); i += workers) {
      try {
        points[i] = RunSweepPoint(config, param, values[i], data);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const auto smallest = std::min_element(
      points.begin(), points.end(),
      [](const SweepPoint& a, const SweepPoint& b) { return a.x < b.x; });
  const double reference_norm = FinalMeanNorm(smallest->report);

  nlohmann::ordered_json series = nlohmann::ordered_json::array();
  std::map<std::pair<std::string, std::string>, std::size_t> series_index;
  WriteFile(common.out_dir / kSweepFile, [&](std::ostream& out) {
    out << "param,value,direction,metric,result\n" << std::setprecision(17);
    for (const SweepPoint& p : points) {
      for (const SweepRow& row : RowsFor(p, reference_norm)) {
        out << param << ',' << p.label << ',' << row.direction << ',' << row.metric << ','
            << row.value << '\n';
        const auto key = std::make_pair(row.direction, row.metric);
        auto it = series_index.find(key);
        if (it == series_index.end()) {
          it = series_index.emplace(key, series.size()).first;
          series.push_back({{"direction", row.direction},
                            {"metric", row.metric},
                            {"points", nlohmann::ordered_json::array()}});
        }
        series[it->second]["points"].push_back({p.x, row.value});
      }
    }
  });
  if (options.plot_json) {
    nlohmann::ordered_json doc = {{"param", param}, {"series", series}};
    WriteFile(common.out_dir / kSweepPlotFile,
              [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  }
  for (const SweepPoint& p : points) {
    log << param << "=" << p.label << " map " << p.eval.query1.map << " / "
        << p.eval.query2.map << "\n";
  }
  return kExitOk;
}

// ---- command line -----------------------------------------------------------

namespace {

void AddCommon(CLI::App* sub, CommonOptions& common, std::string& config_path,
               std::uint64_t& seed) {
  sub->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  sub->add_option("--seed", seed, "master seed, overrides the config");
  sub->add_option("--set", common.overrides, "override one key, key=value (repeatable)");
  sub->add_option("-o,--out", common.out_dir, "output directory")->required();
  sub->add_flag("--force", common.force, "write into a non-empty output directory");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-modal center hashing: data generation, coefficient estimation, "
               "bound certification, training and retrieval evaluation"};
  app.set_version_flag("--version", std::string("jcch ") + ToolVersion());
  app.require_subcommand(1);

  CommonOptions common;
  std::string config_path;
  std::uint64_t seed = 0;
  GenOptions gen;
  std::string labels_csv, features1_csv, features2_csv;
  CoeffsOptions coeffs;
  std::uint64_t anchors = 0;
  TrainOptions train;
  std::string coeff_path;
  EncodeOptions encode;
  EvalOptions eval;
  SweepOptions sweep;
  std::string data_dir, param, values;

  CLI::App* c_gen = app.add_subcommand("gen", "generate a synthetic dataset or import CSV");
  AddCommon(c_gen, common, config_path, seed);
  c_gen->add_option("--labels-csv", labels_csv, "0/1 label CSV")->check(CLI::ExistingFile);
  c_gen->add_option("--features1-csv", features1_csv, "modality-1 feature CSV")
      ->check(CLI::ExistingFile);
  c_gen->add_option("--features2-csv", features2_csv, "modality-2 feature CSV")
      ->check(CLI::ExistingFile);

  CLI::App* c_coeffs = app.add_subcommand("coeffs", "estimate unary-bound coefficients");
  AddCommon(c_coeffs, common, config_path, seed);
  c_coeffs->add_option("--dataset", coeffs.dataset, "dataset file")->required();
  c_coeffs->add_option("-l,--anchors", anchors, "anchor count (sets anchor_l)");

  CLI::App* c_certify = app.add_subcommand("certify", "check the bound chain on random instances");
  AddCommon(c_certify, common, config_path, seed);

  CLI::App* c_train = app.add_subcommand("train", "train both encoders");
  AddCommon(c_train, common, config_path, seed);
  c_train->add_option("--dataset", train.dataset, "training dataset file")->required();
  c_train->add_option("--coeffs", coeff_path, "coefficient file (mode jcch)");

  CLI::App* c_encode = app.add_subcommand("encode", "hash a dataset with a checkpoint");
  AddCommon(c_encode, common, config_path, seed);
  c_encode->add_option("--checkpoint", encode.checkpoint, "model file")->required();
  c_encode->add_option("--dataset", encode.dataset, "dataset file")->required();

  CLI::App* c_eval = app.add_subcommand("eval", "MAP and precision@k in both directions");
  AddCommon(c_eval, common, config_path, seed);
  c_eval->add_option("--query-codes", eval.query_codes, "encode output for the queries")
      ->required();
  c_eval->add_option("--db-codes", eval.database_codes, "encode output for the database")
      ->required();
  c_eval->add_option("--query-dataset", eval.query_dataset, "query labels (dataset file)")
      ->required();
  c_eval->add_option("--db-dataset", eval.database_dataset, "database labels (dataset file)")
      ->required();
  c_eval->add_option("--direction", eval.direction, "1to2, 2to1 or both")
      ->check(CLI::IsMember({"1to2", "2to1", "both"}));

  CLI::App* c_sweep = app.add_subcommand("sweep", "train and evaluate once per parameter value");
  AddCommon(c_sweep, common, config_path, seed);
  c_sweep->add_option("--data", data_dir, "gen output directory (default: generate)");
  c_sweep->add_option("--param", param, "lambda, beta or anchor_l");
  c_sweep->add_option("--values", values, "comma list; anchor_l accepts n, n/k");
  c_sweep->add_flag("--plot-json", sweep.plot_json, "also write plot series as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFailure;
  }

  auto finish_common = [&](CLI::App* sub) {
    if (sub->count("--config")) common.config_path = config_path;
    if (sub->count("--seed")) common.seed = seed;
  };

  try {
    if (c_gen->parsed()) {
      finish_common(c_gen);
      if (c_gen->count("--labels-csv")) gen.labels_csv = labels_csv;
      if (c_gen->count("--features1-csv")) gen.features1_csv = features1_csv;
      if (c_gen->count("--features2-csv")) gen.features2_csv = features2_csv;
      return CmdGen(common, gen, err);
    }
    if (c_coeffs->parsed()) {
      finish_common(c_coeffs);
      if (c_coeffs->count("--anchors")) coeffs.anchors = anchors;
      return CmdCoeffs(common, coeffs, err);
    }
    if (c_certify->parsed()) {
      finish_common(c_certify);
      return CmdCertify(common, err);
    }
    if (c_train->parsed()) {
      finish_common(c_train);
      if (c_train->count("--coeffs")) train.coefficients = coeff_path;
      return CmdTrain(common, train, err);
    }
    if (c_encode->parsed()) {
      finish_common(c_encode);
      return CmdEncode(common, encode, err);
    }
    if (c_eval->parsed()) {
      finish_common(c_eval);
      return CmdEval(common, eval, err);
    }
    finish_common(c_sweep);
    if (c_sweep->count("--data")) sweep.data_dir = data_dir;
    if (c_sweep->count("--param")) sweep.param = param;
    if (c_sweep->count("--values")) sweep.values = values;
    return CmdSweep(common, sweep, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace jcch::cli
