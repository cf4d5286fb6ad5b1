#include "mtcnn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "mtcnn/archive.hpp"
#include "mtcnn/artifact.hpp"
#include "mtcnn/checkpoint.hpp"
#include "mtcnn/csv.hpp"
#include "mtcnn/errors.hpp"
#include "mtcnn/folds.hpp"
#include "mtcnn/prep.hpp"
#include "mtcnn/trace_export.hpp"
#include "mtcnn/train.hpp"

namespace mtcnn {
namespace {

namespace fs = std::filesystem;

std::string na_or(const std::optional<double>& value) {
  return value ? format_double(*value) : "NA";
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

// The paper's training protocol; fixed here rather than exposed as flags.
constexpr int kEpochs = 20;
constexpr int kBatchSize = 50;
constexpr double kLearningRate = 0.001;

}  // namespace

void cmd_preprocess(const PreprocessOptions& options, std::ostream& out) {
  const std::vector<double> allowed = {2.0, 4.0, 6.0, 8.0, 10.0};
  if (std::find(allowed.begin(), allowed.end(), options.window_seconds) == allowed.end())
    throw ConfigError("window seconds must be one of 2, 4, 6, 8, 10");
  if (options.overlap_seconds < 0.0 || options.overlap_seconds >= options.window_seconds)
    throw ConfigError("overlap must satisfy 0 <= overlap < window");
  if (!(options.fs_target > 0.0)) throw ConfigError("target rate must be positive");

  const auto rows = read_manifest(options.manifest);

  WindowArchive archive;
  archive.fs = options.fs_target;
  archive.window_len =
      static_cast<Eigen::Index>(std::llround(options.fs_target * options.window_seconds));

  std::vector<Vector> windows;
  std::set<std::string> ids;
  std::map<int, std::pair<std::string, long>> per_label;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string context =
        "manifest row " + std::to_string(i + 1) + " ('" + rows[i].path + "'): ";
    try {
      SignalRecord record = load_task_signal(rows[i]);
      if (record.fs != options.fs_target) record = resample_cubic(record, options.fs_target);
      for (Window& w : segment(record, options.window_seconds, options.overlap_seconds)) {
        if (options.zscore) w.samples = zscore(w.samples);
        ArchiveEntry entry;
        entry.id = w.subject_id + ":" + w.trial_id + ":" + std::to_string(w.offset);
        entry.subject_id = w.subject_id;
        entry.trial_id = w.trial_id;
        entry.label = w.label;
        entry.offset = w.offset;
        if (!ids.insert(entry.id).second)
          throw DatasetError("duplicate window id '" + entry.id +
                             "' (subject/trial pairs must be unique)");
        auto& [name, count] = per_label[vocabulary_rank(w.label)];
        name = to_string(w.label);
        ++count;
        archive.entries.push_back(std::move(entry));
        windows.push_back(std::move(w.samples));
      }
    } catch (const ParseError& e) {
      throw ParseError(context + e.what());
    } catch (const DatasetError& e) {
      throw DatasetError(context + e.what());
    } catch (const IoError& e) {
      throw IoError(context + e.what());
    } catch (const InvalidArgumentError& e) {
      throw DatasetError(context + e.what());
    }
  }

  archive.samples.resize(archive.window_len, static_cast<Eigen::Index>(windows.size()));
  for (std::size_t i = 0; i < windows.size(); ++i)
    archive.samples.col(static_cast<Eigen::Index>(i)) = windows[i];
  write_archive(options.out, archive);

  out << "records: " << rows.size() << "\n";
  out << "windows: " << windows.size() << "\n";
  for (const auto& [rank, entry] : per_label)
    out << "  " << entry.first << ": " << entry.second << "\n";
}

void cmd_contaminate(const ContaminateOptions& options, std::ostream& out) {
  const ContaminationMode mode = parse_contamination_mode(options.mode);
  const WindowArchive clean = read_archive(options.archive);

  std::vector<ArtifactSource> ocular, muscle;
  for (const auto& row : read_manifest(options.artifacts)) {
    ArtifactSource source = load_artifact_signal(row);
    if (source.fs != clean.fs) {
      SignalRecord record;
      record.samples = source.samples;
      record.fs = source.fs;
      record = resample_cubic(record, clean.fs);
      source.samples = record.samples;
      source.fs = clean.fs;
    }
    (source.kind == ArtifactKind::Ocular ? ocular : muscle).push_back(std::move(source));
  }
  const bool use_oa = mode != ContaminationMode::MA;
  const bool use_ma = mode != ContaminationMode::OA;
  if (use_oa && ocular.empty()) throw DatasetError("mode needs at least one OA artifact");
  if (use_ma && muscle.empty()) throw DatasetError("mode needs at least one MA artifact");

  std::vector<std::pair<double, double>> grid;
  if (mode == ContaminationMode::OA)
    for (double l : options.lambdas) grid.emplace_back(l, 0.0);
  else if (mode == ContaminationMode::MA)
    for (double b : options.betas) grid.emplace_back(0.0, b);
  else
    for (double l : options.lambdas)
      for (double b : options.betas) grid.emplace_back(l, b);
  if (grid.empty()) throw ConfigError("empty lambda/beta grid");

  WindowArchive result;
  result.fs = clean.fs;
  result.window_len = clean.window_len;
  result.samples.resize(clean.window_len,
                        clean.count() * static_cast<Eigen::Index>(grid.size()));

  fs::create_directories(options.out);
  auto report = open_output(fs::path(options.out) / "snr_report.csv");
  report << "id,lambda,beta,snr\n";

  struct GridStats {
    double sum = 0.0;
    long defined = 0;
    long total = 0;
  };
  std::vector<GridStats> stats(grid.size());

  std::uint64_t realization = 0;
  Eigen::Index column = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto [lambda, beta] = grid[g];
    ContaminationParams params{lambda, beta, mode};
    for (Eigen::Index i = 0; i < clean.count(); ++i, ++realization) {
      const ArchiveEntry& src = clean.entries[static_cast<std::size_t>(i)];
      Window window;
      window.samples = clean.samples.col(i);
      window.label = src.label;
      window.subject_id = src.subject_id;
      window.trial_id = src.trial_id;
      window.offset = src.offset;

      // One derived stream per realization keeps the output independent of
      // any future parallel scheduling.
      SeededGenerator gen(derive_seed(options.seed, realization));
      const ArtifactSource* oa =
          use_oa ? &ocular[static_cast<std::size_t>(gen.next_below(ocular.size()))] : nullptr;
      const ArtifactSource* ma =
          use_ma ? &muscle[static_cast<std::size_t>(gen.next_below(muscle.size()))] : nullptr;
      Contamination mixed;
      try {
        mixed = contaminate(window, oa, ma, params, gen);
      } catch (const ShapeError& e) {
        throw DatasetError(e.what());  // short artifacts are a data problem
      }

      ArchiveEntry entry = src;
      entry.id = src.id + "|l" + format_double(lambda) + "|b" + format_double(beta);
      entry.contaminated = true;
      entry.clean_id = src.id;
      entry.oa_id = mixed.oa_id;
      entry.ma_id = mixed.ma_id;
      entry.oa_offset = mixed.oa_offset;
      entry.ma_offset = mixed.ma_offset;
      entry.lambda = lambda;
      entry.beta = beta;
      entry.snr = mixed.snr;

      report << entry.id << ',' << format_double(lambda) << ',' << format_double(beta) << ','
             << (mixed.snr ? format_double(*mixed.snr) : "inf") << "\n";
      stats[g].total += 1;
      if (mixed.snr) {
        stats[g].sum += *mixed.snr;
        stats[g].defined += 1;
      }

      result.samples.col(column++) = mixed.window.samples;
      result.entries.push_back(std::move(entry));
    }
  }
  if (!report) throw IoError("write failed for snr_report.csv");
  report.close();

  // Per-grid-point mean SNR over realizations.
  auto grid_csv = open_output(fs::path(options.out) / "snr_grid.csv");
  grid_csv << "lambda,beta,mean_snr,realizations\n";
  for (std::size_t g = 0; g < grid.size(); ++g) {
    grid_csv << format_double(grid[g].first) << ',' << format_double(grid[g].second) << ','
             << (stats[g].defined > 0
                     ? format_double(stats[g].sum / static_cast<double>(stats[g].defined))
                     : "NA")
             << ',' << stats[g].total << "\n";
  }
  if (!grid_csv) throw IoError("write failed for snr_grid.csv");
  grid_csv.close();

  write_archive(options.out, result);
  out << "grid points: " << grid.size() << "\n";
  out << "realizations: " << result.count() << "\n";
}

namespace {

void write_epoch_csv(const fs::path& path, const std::vector<EpochStats>& stats) {
  auto out = open_output(path);
  out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
  for (const auto& s : stats)
    out << s.epoch << ',' << format_double(s.train_loss) << ','
        << format_double(s.train_accuracy) << ',' << na_or(s.val_loss) << ','
        << na_or(s.val_accuracy) << "\n";
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

void cmd_train(const TrainCliOptions& options, std::ostream& out) {
  const WindowArchive archive = read_archive(options.archive);
  const auto class_labels = classes_present(archive);
  if (class_labels.size() < 2)
    throw DatasetError("archive holds a single class; need at least two");
  if (options.classes != 0 && options.classes != static_cast<int>(class_labels.size()))
    throw ConfigError("--classes " + std::to_string(options.classes) +
                      " does not match the archive's " +
                      std::to_string(class_labels.size()) + " classes");

  Head head;
  if (options.head.empty())
    head = class_labels.size() == 2 ? Head::Sigmoid : Head::Softmax;
  else if (options.head == "sigmoid")
    head = Head::Sigmoid;
  else if (options.head == "softmax")
    head = Head::Softmax;
  else
    throw ConfigError("--head must be sigmoid or softmax");

  std::vector<std::string> class_names;
  for (const TaskLabel label : class_labels) class_names.push_back(to_string(label));

  const std::vector<TrialRef> trials = trials_of(archive);

  FoldOptions fold_options;
  fold_options.fold_count = options.folds;
  fold_options.stratify = options.stratify;
  const FoldPlan plan = make_folds(trials, derive_seed(options.seed, 0xF01D5), fold_options);
  for (const auto& warning : plan.warnings) out << "warning: " << warning << "\n";

  for (int depth : options.depths) {
    ModelConfig config;
    config.window_len = archive.window_len;
    config.depth = depth;
    config.classes = static_cast<int>(class_labels.size());
    config.head = head;
    config.dense_bias = options.dense_bias;
    config.class_names = class_names;
    config.validate();

    const fs::path depth_dir = fs::path(options.out) / ("d" + std::to_string(depth));
    fs::create_directories(depth_dir);

    struct FoldRow {
      long test_windows = 0;
      MetricSet metrics;
    };
    std::vector<FoldRow> rows;

    for (int fold = 0; fold < plan.fold_count; ++fold) {
      const auto& assignment = plan.folds[static_cast<std::size_t>(fold)];
      const auto as_set = [](const std::vector<std::string>& v) {
        return std::set<std::string>(v.begin(), v.end());
      };
      const Dataset train_set = select_by_trials(archive, class_labels, as_set(assignment.train));
      const Dataset val_set =
          select_by_trials(archive, class_labels, as_set(assignment.validation));
      const Dataset test_set = select_by_trials(archive, class_labels, as_set(assignment.test));

      TrainOptions train_options;
      train_options.epochs = kEpochs;
      train_options.batch_size = kBatchSize;
      train_options.lr = kLearningRate;
      train_options.seed = derive_seed(derive_seed(options.seed, static_cast<std::uint64_t>(depth)),
                                       static_cast<std::uint64_t>(fold));

      TrainResult result = train_model(config, train_set, val_set, train_options);
      write_epoch_csv(depth_dir / ("fold" + std::to_string(fold) + "_epochs.csv"), result.stats);
      write_checkpoint((depth_dir / ("fold" + std::to_string(fold) + ".ckpt")).string(),
                       checkpoint_from_model(result.model));

      FoldRow row;
      row.test_windows = test_set.count();
      if (test_set.count() > 0) row.metrics = evaluate(result.model, test_set).overall;
      rows.push_back(row);
      out << "depth " << depth << " fold " << fold << ": test accuracy "
          << na_or(row.metrics.accuracy) << "\n";
    }

    auto metrics_csv = open_output(depth_dir / "metrics.csv");
    metrics_csv << "fold,test_windows,accuracy,precision,recall,f1\n";
    for (std::size_t fold = 0; fold < rows.size(); ++fold)
      metrics_csv << fold << ',' << rows[fold].test_windows << ','
                  << na_or(rows[fold].metrics.accuracy) << ','
                  << na_or(rows[fold].metrics.precision) << ','
                  << na_or(rows[fold].metrics.recall) << ',' << na_or(rows[fold].metrics.f1)
                  << "\n";

    // Aggregate rows in the mean(std) reporting style; NA when any fold is NA.
    const auto aggregate = [&rows](auto select) -> std::pair<std::string, std::string> {
      std::vector<double> values;
      for (const auto& row : rows) {
        const auto value = select(row);
        if (!value) return {"NA", "NA"};
        values.push_back(*value);
      }
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(values.size());
      return {format_double(mean), format_double(std::sqrt(var))};
    };
    const auto acc = aggregate([](const FoldRow& r) { return r.metrics.accuracy; });
    const auto prc = aggregate([](const FoldRow& r) { return r.metrics.precision; });
    const auto rcl = aggregate([](const FoldRow& r) { return r.metrics.recall; });
    const auto f1 = aggregate([](const FoldRow& r) { return r.metrics.f1; });
    long total_test = 0;
    for (const auto& row : rows) total_test += row.test_windows;
    metrics_csv << "mean," << format_double(static_cast<double>(total_test) / rows.size())
                << ',' << acc.first << ',' << prc.first << ',' << rcl.first << ','
                << f1.first << "\n";
    metrics_csv << "std,0," << acc.second << ',' << prc.second << ',' << rcl.second << ','
                << f1.second << "\n";
    if (!metrics_csv) throw IoError("write failed for metrics.csv");
  }
}

namespace {

std::map<std::string, int> class_index_by_name(const ModelConfig& config) {
  if (config.class_names.empty())
    throw ConfigError("checkpoint carries no class names; cannot map labels");
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < config.class_names.size(); ++i)
    index[config.class_names[i]] = static_cast<int>(i);
  return index;
}

Dataset dataset_for_model(const WindowArchive& archive, const ModelConfig& config) {
  if (archive.window_len != config.window_len)
    throw ConfigError("archive windows have " + std::to_string(archive.window_len) +
                      " samples but the checkpoint expects " +
                      std::to_string(config.window_len));
  const auto index = class_index_by_name(config);
  Dataset data;
  data.windows = archive.samples;
  for (const auto& entry : archive.entries) {
    const auto it = index.find(to_string(entry.label));
    if (it == index.end()) {
      std::string known;
      for (const auto& [name, i] : index) known += (known.empty() ? "" : ", ") + name;
      throw DatasetError("label '" + std::string(to_string(entry.label)) +
                         "' is unknown to this model (classes: " + known + ")");
    }
    data.labels.push_back(it->second);
    data.window_ids.push_back(entry.id);
    data.trial_ids.push_back(entry.trial_id);
    data.subject_ids.push_back(entry.subject_id);
  }
  return data;
}

}  // namespace

void cmd_eval(const EvalOptions& options, std::ostream& out) {
  const Model model = model_from_checkpoint(read_checkpoint(options.checkpoint));
  const WindowArchive archive = read_archive(options.archive);
  const Dataset data = dataset_for_model(archive, model.config);
  const EvalReport report = evaluate(model, data);

  fs::create_directories(options.out);
  auto metrics_csv = open_output(fs::path(options.out) / "metrics.csv");
  metrics_csv << "scope,accuracy,precision,recall,f1\n";
  metrics_csv << "overall," << na_or(report.overall.accuracy) << ','
              << na_or(report.overall.precision) << ',' << na_or(report.overall.recall) << ','
              << na_or(report.overall.f1) << "\n";
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    metrics_csv << "class:" << model.config.class_names[c] << ',' << na_or(m.accuracy) << ','
                << na_or(m.precision) << ',' << na_or(m.recall) << ',' << na_or(m.f1) << "\n";
  }
  if (!metrics_csv) throw IoError("write failed for metrics.csv");

  auto confusion_csv = open_output(fs::path(options.out) / "confusion.csv");
  confusion_csv << "actual\\predicted";
  for (const auto& name : model.config.class_names) confusion_csv << ',' << name;
  confusion_csv << "\n";
  for (Eigen::Index r = 0; r < report.confusion.counts.rows(); ++r) {
    confusion_csv << model.config.class_names[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < report.confusion.counts.cols(); ++c)
      confusion_csv << ',' << report.confusion.counts(r, c);
    confusion_csv << "\n";
  }
  if (!confusion_csv) throw IoError("write failed for confusion.csv");

  out << "windows: " << data.count() << "\n";
  out << "accuracy: " << na_or(report.overall.accuracy) << "\n";
}

void cmd_export_activations(const ExportOptions& options, std::ostream& out) {
  const Model model = model_from_checkpoint(read_checkpoint(options.checkpoint));
  const WindowArchive archive = read_archive(options.archive);
  if (archive.window_len != model.config.window_len)
    throw ConfigError("archive windows have " + std::to_string(archive.window_len) +
                      " samples but the checkpoint expects " +
                      std::to_string(model.config.window_len));

  const Eigen::Index index = archive.find(options.window_id);
  if (index < 0) throw DatasetError("no window with id '" + options.window_id + "'");

  ActivationTrace trace;
  model_forward(model, archive.samples.col(index), nullptr, nullptr, &trace);
  export_trace(options.out, trace);
  export_weights(options.out, model);

  out << "window: " << options.window_id << "\n";
  out << "maps: " << trace.maps.size() << "\n";
}

namespace {

bool parse_on_off(const std::string& value, const char* flag) {
  if (value == "on") return true;
  if (value == "off") return false;
  throw ConfigError(std::string(flag) + " must be 'on' or 'off'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"1D-CNN mental-task EEG classifier"};
  app.require_subcommand(1);

  PreprocessOptions prep;
  std::string prep_zscore = "off";
  auto* prep_cmd = app.add_subcommand("preprocess", "resample, window and index raw recordings");
  prep_cmd->add_option("--manifest", prep.manifest, "dataset manifest CSV")->required();
  prep_cmd->add_option("--out", prep.out, "output archive directory")->required();
  prep_cmd->add_option("--fs-target", prep.fs_target, "target rate in Hz (default 500)");
  prep_cmd->add_option("--window-seconds", prep.window_seconds,
                       "window duration: 2, 4, 6, 8 or 10 (default 10)");
  prep_cmd->add_option("--overlap-seconds", prep.overlap_seconds, "window overlap (default 0)");
  prep_cmd->add_option("--zscore", prep_zscore, "per-window z-score: on|off (default off)");

  ContaminateOptions contam;
  auto* contam_cmd =
      app.add_subcommand("contaminate", "mix artifact recordings into clean windows");
  contam_cmd->add_option("--archive", contam.archive, "clean window archive")->required();
  contam_cmd->add_option("--artifacts", contam.artifacts, "artifact manifest CSV")->required();
  contam_cmd->add_option("--out", contam.out, "output directory")->required();
  contam_cmd->add_option("--lambda", contam.lambdas, "OA scale grid, comma separated")
      ->delimiter(',');
  contam_cmd->add_option("--beta", contam.betas, "MA scale grid, comma separated")
      ->delimiter(',');
  contam_cmd->add_option("--mode", contam.mode, "oa | ma | oamma (default oamma)");
  contam_cmd->add_option("--seed", contam.seed, "slice/selection seed (default 0)");

  TrainCliOptions train;
  std::string train_stratify = "on";
  std::string train_dense_bias = "off";
  auto* train_cmd = app.add_subcommand("train", "cross-validated training on an archive");
  train_cmd->add_option("--archive", train.archive, "window archive")->required();
  train_cmd->add_option("--out", train.out, "output directory")->required();
  train_cmd->add_option("--depth", train.depths, "conv depth(s), e.g. 2 or 1,2,3")
      ->delimiter(',');
  train_cmd->add_option("--classes", train.classes, "expected class count (default: inferred)");
  train_cmd->add_option("--head", train.head, "sigmoid | softmax (default by class count)");
  train_cmd->add_option("--seed", train.seed, "master seed (default 0)");
  train_cmd->add_option("--folds", train.folds, "fold count (default 10)");
  train_cmd->add_option("--stratify", train_stratify, "per-class folds: on|off (default on)");
  train_cmd->add_option("--dense-bias", train_dense_bias, "dense-layer bias: on|off (default off)");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on an archive");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "model checkpoint")->required();
  eval_cmd->add_option("--archive", eval.archive, "window archive")->required();
  eval_cmd->add_option("--out", eval.out, "output directory")->required();

  ExportOptions export_opts;
  auto* export_cmd = app.add_subcommand("export-activations",
                                        "per-layer activation maps and weights for one window");
  export_cmd->add_option("--checkpoint", export_opts.checkpoint, "model checkpoint")->required();
  export_cmd->add_option("--archive", export_opts.archive, "window archive")->required();
  export_cmd->add_option("--window-id", export_opts.window_id, "window id from index.csv")
      ->required();
  export_cmd->add_option("--out", export_opts.out, "output directory")->required();

  std::vector<const char*> argv;
  argv.push_back("mtcnn");
  for (const auto& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (prep_cmd->parsed()) {
      prep.zscore = parse_on_off(prep_zscore, "--zscore");
      cmd_preprocess(prep, out);
    } else if (contam_cmd->parsed()) {
      cmd_contaminate(contam, out);
    } else if (train_cmd->parsed()) {
      train.stratify = parse_on_off(train_stratify, "--stratify");
      train.dense_bias = parse_on_off(train_dense_bias, "--dense-bias");
      cmd_train(train, out);
    } else if (eval_cmd->parsed()) {
      cmd_eval(eval, out);
    } else if (export_cmd->parsed()) {
      cmd_export_activations(export_opts, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DatasetError& e) {
    err << "dataset error: " << e.what() << "\n";
    return kExitDataset;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

}  // namespace mtcnn
