/*
 Copyright 2026 The nmrmos Authors
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// nmrmos command line: corpus generation, training, MOS prediction,
// evaluation, quality-based retrieval, and embedding export.
//
// Every flag has a config-file equivalent (flat key=value, '#' comments;
// keys are long flag names without the leading dashes). Flags override file
// values, and the effective configuration is echoed to stderr. Runtime
// errors go to stderr with the prefix "nmrmos: error:" and exit code 1.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nmrmos/audio/wav.hpp"
#include "nmrmos/common/error.hpp"
#include "nmrmos/common/parallel.hpp"
#include "nmrmos/eval/metrics.hpp"
#include "nmrmos/eval/pca.hpp"
#include "nmrmos/eval/retrieval.hpp"
#include "nmrmos/infer/predict.hpp"
#include "nmrmos/synth/corpus.hpp"
#include "nmrmos/train/data.hpp"
#include "nmrmos/train/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nmrmos;

namespace {

// ---------------------------------------------------------------------------
// flat key=value config file
// ---------------------------------------------------------------------------

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open config file '", path, "'");
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    require(eq != std::string::npos, "config file '", path, "' line ", line_no,
            ": expected key=value");
    out[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return out;
}

/// Scan argv for --config before CLI11 runs, so file values can seed the
/// option defaults (flags then override them naturally).
std::map<std::string, std::string> preload_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return read_config_file(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) {
      return read_config_file(arg.substr(9));
    }
  }
  return {};
}

class Settings {
 public:
  explicit Settings(std::map<std::string, std::string> file_values)
      : file_(std::move(file_values)) {}

  /// Registers an option whose default may come from the config file.
  template <typename T>
  CLI::Option* add(CLI::App* cmd, const std::string& flag, T& var,
                   const std::string& help) {
    const std::string key = flag.substr(2);  // strip leading "--"
    const auto it = file_.find(key);
    if (it != file_.end()) {
      std::istringstream is(it->second);
      is >> var;
      require(!is.fail(), "config key '", key, "': cannot parse '", it->second,
              "'");
    }
    CLI::Option* opt = cmd->add_option(flag, var, help);
    echoes_[cmd].push_back([key, &var] {
      std::ostringstream os;
      os << key << "=" << var;
      return os.str();
    });
    return opt;
  }

  CLI::Option* add_flag(CLI::App* cmd, const std::string& flag, bool& var,
                        const std::string& help) {
    const std::string key = flag.substr(2);
    const auto it = file_.find(key);
    if (it != file_.end()) {
      var = it->second == "1" || it->second == "true";
    }
    CLI::Option* opt = cmd->add_flag(flag, var, help);
    echoes_[cmd].push_back([key, &var] {
      return key + "=" + (var ? "1" : "0");
    });
    return opt;
  }

  void echo(const CLI::App* cmd) const {
    const auto it = echoes_.find(cmd);
    if (it == echoes_.end()) return;
    std::ostringstream os;
    os << "[config]";
    for (const auto& fn : it->second) os << " " << fn();
    std::cerr << os.str() << "\n";
  }

 private:
  std::map<std::string, std::string> file_;
  std::map<const CLI::App*, std::vector<std::function<std::string()>>> echoes_;
};

// std::istream >> std::string stops at whitespace; paths etc. want the rest.
}  // namespace

namespace std {
// (no std specializations; strings handled by the generic >> which is fine
// for single tokens -- manifest paths with spaces are not supported in the
// config file, only on the command line)
}  // namespace std

namespace {

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      fail(what, ": cannot parse '", item, "' in '", csv, "'");
    }
  }
  require(!out.empty(), what, ": empty list");
  return out;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path == "-") return std::cout;
  file.open(path, std::ios::binary);
  require(file.good(), "cannot open '", path, "' for writing");
  return file;
}

// ---------------------------------------------------------------------------
// gen-corpus
// ---------------------------------------------------------------------------

struct GenCorpusArgs {
  std::string out_dir;
  int clean_count = 40;
  std::string kinds = "additive_noise,lowpass,clip,reverb";
  int levels = 10;
  double clip_seconds = 3.0;
  int train_sources = -1;  // -1: proportional defaults
  int dev_sources = -1;
  int test_sources = -1;
  uint64_t seed = 1;
};

int run_gen_corpus(const GenCorpusArgs& args) {
  synth::CorpusConfig config;
  config.out_dir = args.out_dir;
  config.clean_count = args.clean_count;
  config.levels = args.levels;
  config.clip_seconds = args.clip_seconds;
  config.seed = args.seed;
  config.kinds.clear();
  {
    std::stringstream ss(args.kinds);
    std::string item;
    while (std::getline(ss, item, ',')) {
      config.kinds.push_back(synth::degradation_kind_from_string(item));
    }
  }
  if (args.train_sources >= 0 || args.dev_sources >= 0 || args.test_sources >= 0) {
    require(args.train_sources >= 0 && args.dev_sources >= 0 &&
                args.test_sources >= 0,
            "gen-corpus: set all of train/dev/test sources or none");
    config.train_sources = args.train_sources;
    config.dev_sources = args.dev_sources;
    config.test_sources = args.test_sources;
  } else {
    // 60/15/25, remainder to train.
    config.dev_sources = std::max(1, args.clean_count * 15 / 100);
    config.test_sources = std::max(1, args.clean_count * 25 / 100);
    config.train_sources =
        args.clean_count - config.dev_sources - config.test_sources;
    require(config.train_sources >= 1, "gen-corpus: clean-count ",
            args.clean_count, " too small to split");
  }

  const auto records = synth::gen_corpus(config);

  std::map<std::string, int> per_kind;
  std::map<int, int> per_level;
  int clean = 0;
  for (const auto& rec : records) {
    if (rec.system_id == "clean") {
      ++clean;
      continue;
    }
    ++per_kind[rec.system_id.substr(0, rec.system_id.rfind("_l"))];
    ++per_level[synth::level_for_mos(rec.mos)];
  }
  std::cout << "corpus: " << records.size() << " records (" << clean
            << " clean) in " << args.out_dir << "\n";
  for (const auto& [kind, count] : per_kind) {
    std::cout << "  kind " << kind << ": " << count << "\n";
  }
  for (const auto& [level, count] : per_level) {
    std::cout << "  level " << level << ": " << count << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string manifest;
  std::string clean_manifest;
  std::string checkpoint_dir;
  int epochs = 50;
  int batch_size = 64;
  double lr = 1e-4;
  double lambda_q = 1.0;
  double clean_fraction = 0.25;
  int dev_nmrs = 4;
  uint64_t seed = 1;
  int threads = 0;
  std::string conv_channels = "48,48,48,48";
  std::string kernel_sizes = "10,8,4,4";
  std::string strides = "5,4,2,2";
  int embed_dim = 32;
  int head_hidden = 608;
  int input_samples = 48000;
};

int run_train(const TrainArgs& args) {
  train::TrainConfig config;
  config.manifest_path = args.manifest;
  config.clean_manifest_path = args.clean_manifest;
  config.checkpoint_dir = args.checkpoint_dir;
  config.epochs = args.epochs;
  config.batch_size = args.batch_size;
  config.lr = args.lr;
  config.lambda_q = args.lambda_q;
  config.clean_pair_fraction = args.clean_fraction;
  config.dev_nmr_count = args.dev_nmrs;
  config.seed = args.seed;
  config.threads = args.threads;
  config.model.conv_channels = parse_int_list(args.conv_channels, "conv-channels");
  config.model.kernel_sizes = parse_int_list(args.kernel_sizes, "kernel-sizes");
  config.model.conv_strides = parse_int_list(args.strides, "strides");
  config.model.embed_dim = args.embed_dim;
  config.model.head_hidden = args.head_hidden;
  config.model.input_samples = args.input_samples;

  const int64_t n_params = model::count_parameters(config.model);
  std::cout << "parameters: " << n_params;
  if (n_params >= 100000 && n_params <= 140000) {
    std::cout << " (within the 100k..140k budget)\n";
  } else {
    std::cout << " (outside the 100k..140k budget)\n";
  }

  const auto result = train::train(config, [](const train::EpochLog& e) {
    std::cout << "epoch " << e.epoch << " train_loss " << e.train_loss;
    if (e.dev_spearman) std::cout << " dev_spearman " << *e.dev_spearman;
    if (e.dev_mse) std::cout << " dev_mse " << *e.dev_mse;
    std::cout << "\n" << std::flush;
  });
  std::cout << "best epoch " << result.best_epoch << " -> "
            << result.best_checkpoint_path << "\n";
  std::cout << "final -> " << result.final_checkpoint_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

struct PredictArgs {
  std::string checkpoint;
  std::string input;     // single WAV
  std::string manifest;  // or a manifest...
  std::string split = "test";
  std::string nmr_dir;
  std::string nmr_manifest;
  std::string nmr_split = "train";
  int n = 0;  // 0 = min(100, available)
  std::string out = "-";
  int threads = 0;
  bool signed_mode = false;
};

struct NmrPool {
  std::vector<audio::AudioClip> clips;
  std::vector<double> mos;
};

NmrPool load_nmrs(const PredictArgs& args) {
  NmrPool pool;
  if (!args.nmr_dir.empty()) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(args.nmr_dir)) {
      if (entry.path().extension() == ".wav") {
        paths.push_back(entry.path().string());
      }
    }
    std::sort(paths.begin(), paths.end());
    require(!paths.empty(), "predict: no .wav files in '", args.nmr_dir, "'");
    for (const auto& p : paths) {
      pool.clips.push_back(audio::load_wav_canonical(p));
      pool.mos.push_back(5.0);
    }
  } else if (!args.nmr_manifest.empty()) {
    const auto filter = args.signed_mode ? train::RecordFilter::kAll
                                         : train::RecordFilter::kCleanOnly;
    auto items = train::load_dataset(args.nmr_manifest, args.nmr_split, filter);
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) {
                return a.utterance_id < b.utterance_id;
              });
    require(!items.empty(), "predict: no reference records in '",
            args.nmr_manifest, "' split '", args.nmr_split, "'");
    for (auto& item : items) {
      pool.clips.push_back(std::move(item.clip));
      pool.mos.push_back(item.mos);
    }
  } else {
    fail("predict: provide --nmr-dir or --nmr-manifest");
  }
  return pool;
}

json estimate_to_json(const infer::MosEstimate& est) {
  json j;
  j["mos"] = est.mos;
  j["mean_r"] = est.mean_r;
  j["std_r"] = est.std_r;
  j["n"] = est.n;
  j["per_nmr"] = est.per_nmr;
  return j;
}

int run_predict(const PredictArgs& args) {
  require(!args.input.empty() || !args.manifest.empty(),
          "predict: provide --input or --manifest");
  require(args.input.empty() || args.manifest.empty(),
          "predict: --input and --manifest are mutually exclusive");

  const auto ckpt = train::load_checkpoint(args.checkpoint);
  NmrPool pool = load_nmrs(args);

  int n = args.n;
  if (n == 0) n = std::min<int>(100, static_cast<int>(pool.clips.size()));
  require(n <= static_cast<int>(pool.clips.size()), "predict: n=", n,
          " exceeds the ", pool.clips.size(), " available references");

  std::ofstream file;
  std::ostream& out = open_output(file, args.out);

  struct Item {
    std::string utterance_id;
    audio::AudioClip clip;
  };
  std::vector<Item> items;
  if (!args.input.empty()) {
    items.push_back(
        {fs::path(args.input).stem().string(), audio::load_wav_canonical(args.input)});
  } else {
    for (auto& rec :
         train::load_dataset(args.manifest, args.split, train::RecordFilter::kAll)) {
      items.push_back({rec.utterance_id, std::move(rec.clip)});
    }
    require(!items.empty(), "predict: no records in split '", args.split, "'");
  }

  if (args.signed_mode) {
    for (const auto& item : items) {
      const auto est = infer::predict_mos_signed(ckpt.params, item.clip,
                                                 pool.clips, pool.mos, n,
                                                 args.threads);
      json j = estimate_to_json(est);
      j["utterance_id"] = item.utterance_id;
      out << j.dump() << "\n";
    }
  } else {
    const auto refs = infer::precompute_reference_frames(ckpt.params, pool.clips,
                                                         n, args.threads);
    for (const auto& item : items) {
      const auto est =
          infer::predict_mos_cached(ckpt.params, item.clip, refs, args.threads);
      json j = estimate_to_json(est);
      j["utterance_id"] = item.utterance_id;
      out << j.dump() << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string predictions;
  std::string manifest;
  std::string split = "test";
  std::string out = "-";
  std::string scatter_csv;
};

int run_evaluate(const EvaluateArgs& args) {
  const auto records = synth::read_manifest(args.manifest);
  const auto selected =
      train::select_records(records, args.split, train::RecordFilter::kAll);
  std::map<std::string, const synth::ManifestRecord*> by_id;
  for (const auto& rec : selected) by_id[rec.utterance_id] = &rec;

  std::ifstream in(args.predictions);
  require(in.good(), "evaluate: cannot open predictions '", args.predictions, "'");

  std::vector<double> pred, target;
  std::vector<std::pair<std::string, double>> pred_by_system, target_by_system;
  std::vector<std::array<std::string, 2>> scatter_meta;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail("evaluate: predictions line ", line_no, ": ", e.what());
    }
    const std::string id = j.at("utterance_id").get<std::string>();
    const auto it = by_id.find(id);
    require(it != by_id.end(), "evaluate: utterance_id '", id,
            "' (predictions line ", line_no, ") is not in manifest split '",
            args.split, "'");
    pred.push_back(j.at("mos").get<double>());
    target.push_back(it->second->mos);
    pred_by_system.emplace_back(it->second->system_id, pred.back());
    target_by_system.emplace_back(it->second->system_id, target.back());
    scatter_meta.push_back({id, it->second->system_id});
  }
  require(!pred.empty(), "evaluate: no predictions");

  std::ofstream file;
  std::ostream& out = open_output(file, args.out);

  const auto utterance = eval::make_report("utterance", pred, target);
  const auto sys_pred = eval::aggregate_system(pred_by_system);
  const auto sys_target = eval::aggregate_system(target_by_system);
  std::vector<double> sp, st;
  for (const auto& [id, v] : sys_pred) sp.push_back(v);
  for (const auto& [id, v] : sys_target) st.push_back(v);
  const auto system = eval::make_report("system", sp, st);

  for (const auto& report : {utterance, system}) {
    json j;
    j["level"] = report.level;
    j["mse"] = report.mse;
    j["pearson"] = report.pearson;
    j["spearman"] = report.spearman;
    j["count"] = report.count;
    out << j.dump() << "\n";
  }

  if (!args.scatter_csv.empty()) {
    std::ofstream csv(args.scatter_csv, std::ios::binary);
    require(csv.good(), "evaluate: cannot open '", args.scatter_csv, "'");
    csv << "utterance_id,system_id,predicted,target\n";
    for (size_t i = 0; i < pred.size(); ++i) {
      csv << scatter_meta[i][0] << "," << scatter_meta[i][1] << "," << pred[i]
          << "," << target[i] << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// retrieve / export-embeddings
// ---------------------------------------------------------------------------

struct RetrieveArgs {
  std::string checkpoint;
  std::string manifest;
  std::string split = "test";
  int k = 10;
  std::string out = "-";
  int threads = 0;
};

int run_retrieve(const RetrieveArgs& args) {
  const auto ckpt = train::load_checkpoint(args.checkpoint);
  const auto items = train::load_dataset(args.manifest, args.split,
                                         train::RecordFilter::kDegradedOnly);
  require(!items.empty(), "retrieve: no degraded records in split '",
          args.split, "'");

  std::vector<std::vector<float>> embeddings(items.size());
  std::vector<int> labels(items.size());
  parallel_for(static_cast<int64_t>(items.size()), args.threads, [&](int64_t i) {
    embeddings[static_cast<size_t>(i)] =
        infer::utterance_embedding(ckpt.params, items[static_cast<size_t>(i)].clip);
    labels[static_cast<size_t>(i)] =
        synth::level_for_mos(items[static_cast<size_t>(i)].mos);
  });

  const double mp = eval::retrieval_mp(embeddings, labels, args.k);
  std::ofstream file;
  std::ostream& out = open_output(file, args.out);
  json j;
  j["mp"] = mp;
  j["k"] = args.k;
  j["count"] = items.size();
  out << j.dump() << "\n";
  return 0;
}

struct ExportArgs {
  std::string checkpoint;
  std::string manifest;
  std::string split = "test";
  std::string out;
  int threads = 0;
};

int run_export_embeddings(const ExportArgs& args) {
  const auto ckpt = train::load_checkpoint(args.checkpoint);
  const auto items =
      train::load_dataset(args.manifest, args.split, train::RecordFilter::kAll);
  require(!items.empty(), "export-embeddings: no records in split '",
          args.split, "'");

  std::vector<std::vector<float>> embeddings(items.size());
  parallel_for(static_cast<int64_t>(items.size()), args.threads, [&](int64_t i) {
    embeddings[static_cast<size_t>(i)] =
        infer::utterance_embedding(ckpt.params, items[static_cast<size_t>(i)].clip);
  });
  const auto coords = eval::pca2(embeddings);

  std::ofstream csv(args.out, std::ios::binary);
  require(csv.good(), "export-embeddings: cannot open '", args.out, "'");
  csv << "utterance_id,system_id,mos";
  for (size_t d = 0; d < embeddings[0].size(); ++d) csv << ",e" << d;
  csv << ",pc1,pc2\n";
  for (size_t i = 0; i < items.size(); ++i) {
    csv << items[i].utterance_id << "," << items[i].system_id << ","
        << items[i].mos;
    for (const float v : embeddings[i]) csv << "," << v;
    csv << "," << coords[i][0] << "," << coords[i][1] << "\n";
  }
  std::cout << "wrote " << items.size() << " rows to " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    Settings settings(preload_config(argc, argv));

    CLI::App app{"Speech MOS estimation with non-matching references"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path,
                   "Flat key=value config file; flags override its values");
    bool deterministic = false;
    app.add_flag("--deterministic", deterministic,
                 "Force single-threaded (single-shard) execution");

    GenCorpusArgs gen;
    CLI::App* gen_cmd =
        app.add_subcommand("gen-corpus", "Synthesize a rated corpus + manifest");
    settings.add(gen_cmd, "--out", gen.out_dir, "Output directory")->required();
    settings.add(gen_cmd, "--clean-count", gen.clean_count,
                 "Number of clean source utterances");
    settings.add(gen_cmd, "--kinds", gen.kinds, "Comma list of degradations");
    settings.add(gen_cmd, "--levels", gen.levels, "Quality levels per kind");
    settings.add(gen_cmd, "--clip-seconds", gen.clip_seconds, "Clip duration");
    settings.add(gen_cmd, "--train-sources", gen.train_sources,
                 "Train split size (sources)");
    settings.add(gen_cmd, "--dev-sources", gen.dev_sources,
                 "Dev split size (sources)");
    settings.add(gen_cmd, "--test-sources", gen.test_sources,
                 "Test split size (sources)");
    settings.add(gen_cmd, "--seed", gen.seed, "RNG seed");

    TrainArgs tr;
    CLI::App* train_cmd = app.add_subcommand("train", "Train the model");
    settings.add(train_cmd, "--manifest", tr.manifest, "Corpus manifest")
        ->required();
    settings.add(train_cmd, "--clean-manifest", tr.clean_manifest,
                 "Clean-set manifest (defaults to --manifest)");
    settings.add(train_cmd, "--checkpoint-dir", tr.checkpoint_dir,
                 "Checkpoint output directory")
        ->required();
    settings.add(train_cmd, "--epochs", tr.epochs, "Training epochs");
    settings.add(train_cmd, "--batch-size", tr.batch_size, "Pairs per step");
    settings.add(train_cmd, "--lr", tr.lr, "Adam learning rate");
    settings.add(train_cmd, "--lambda-q", tr.lambda_q,
                 "Relative-rating loss weight");
    settings.add(train_cmd, "--clean-fraction", tr.clean_fraction,
                 "Probability a pair side is drawn from the clean set");
    settings.add(train_cmd, "--dev-nmrs", tr.dev_nmrs,
                 "References for per-epoch dev scoring");
    settings.add(train_cmd, "--seed", tr.seed, "RNG seed");
    settings.add(train_cmd, "--threads", tr.threads,
                 "Compute threads (0 = hardware)");
    settings.add(train_cmd, "--conv-channels", tr.conv_channels,
                 "Encoder channels, comma list");
    settings.add(train_cmd, "--kernel-sizes", tr.kernel_sizes,
                 "Encoder kernels, comma list");
    settings.add(train_cmd, "--strides", tr.strides,
                 "Encoder strides, comma list");
    settings.add(train_cmd, "--embed-dim", tr.embed_dim,
                 "Downsampled frame width");
    settings.add(train_cmd, "--head-hidden", tr.head_hidden,
                 "Head hidden width");
    settings.add(train_cmd, "--input-samples", tr.input_samples,
                 "Excerpt length in samples");

    PredictArgs pr;
    CLI::App* predict_cmd =
        app.add_subcommand("predict", "Estimate MOS against clean references");
    settings.add(predict_cmd, "--checkpoint", pr.checkpoint, "Model checkpoint")
        ->required();
    settings.add(predict_cmd, "--input", pr.input, "Single test WAV");
    settings.add(predict_cmd, "--manifest", pr.manifest, "Corpus manifest");
    settings.add(predict_cmd, "--split", pr.split, "Manifest split to score");
    settings.add(predict_cmd, "--nmr-dir", pr.nmr_dir,
                 "Directory of reference WAVs");
    settings.add(predict_cmd, "--nmr-manifest", pr.nmr_manifest,
                 "Manifest supplying references");
    settings.add(predict_cmd, "--nmr-split", pr.nmr_split,
                 "Split of --nmr-manifest to use");
    settings.add(predict_cmd, "--n", pr.n,
                 "References per estimate (0 = min(100, available))");
    settings.add(predict_cmd, "--out", pr.out, "Output JSONL ('-' = stdout)");
    settings.add(predict_cmd, "--threads", pr.threads,
                 "Compute threads (0 = hardware)");
    settings.add_flag(predict_cmd, "--signed", pr.signed_mode,
                      "Signed mode for non-clean references");

    EvaluateArgs ev;
    CLI::App* eval_cmd =
        app.add_subcommand("evaluate", "Score predictions against a manifest");
    settings.add(eval_cmd, "--predictions", ev.predictions, "Predictions JSONL")
        ->required();
    settings.add(eval_cmd, "--manifest", ev.manifest, "Corpus manifest")
        ->required();
    settings.add(eval_cmd, "--split", ev.split, "Manifest split");
    settings.add(eval_cmd, "--out", ev.out, "Report JSONL ('-' = stdout)");
    settings.add(eval_cmd, "--scatter-csv", ev.scatter_csv,
                 "Optional predicted-vs-target CSV");

    RetrieveArgs rt;
    CLI::App* retrieve_cmd =
        app.add_subcommand("retrieve", "Quality-based retrieval score (MP^k)");
    settings.add(retrieve_cmd, "--checkpoint", rt.checkpoint, "Model checkpoint")
        ->required();
    settings.add(retrieve_cmd, "--manifest", rt.manifest, "Corpus manifest")
        ->required();
    settings.add(retrieve_cmd, "--split", rt.split, "Manifest split");
    settings.add(retrieve_cmd, "--k", rt.k, "Retrieval depth");
    settings.add(retrieve_cmd, "--out", rt.out, "Output JSON ('-' = stdout)");
    settings.add(retrieve_cmd, "--threads", rt.threads,
                 "Compute threads (0 = hardware)");

    ExportArgs ex;
    CLI::App* export_cmd = app.add_subcommand(
        "export-embeddings", "Embeddings + 2-D PCA coordinates as CSV");
    settings.add(export_cmd, "--checkpoint", ex.checkpoint, "Model checkpoint")
        ->required();
    settings.add(export_cmd, "--manifest", ex.manifest, "Corpus manifest")
        ->required();
    settings.add(export_cmd, "--split", ex.split, "Manifest split");
    settings.add(export_cmd, "--out", ex.out, "Output CSV path")->required();
    settings.add(export_cmd, "--threads", ex.threads,
                 "Compute threads (0 = hardware)");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    }

    if (deterministic) {
      tr.threads = 1;
      pr.threads = 1;
      rt.threads = 1;
      ex.threads = 1;
    }

    CLI::App* active = app.get_subcommands().front();
    settings.echo(active);
    if (active == gen_cmd) return run_gen_corpus(gen);
    if (active == train_cmd) return run_train(tr);
    if (active == predict_cmd) return run_predict(pr);
    if (active == eval_cmd) return run_evaluate(ev);
    if (active == retrieve_cmd) return run_retrieve(rt);
    if (active == export_cmd) return run_export_embeddings(ex);
    fail("no subcommand");
  } catch (const std::exception& e) {
    std::cerr << "nmrmos: error: " << e.what() << "\n";
    return 1;
  }
}
