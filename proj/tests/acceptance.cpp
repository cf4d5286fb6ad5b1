// Acceptance suite: one line per criterion, nonzero exit if any mandatory
// criterion fails. Usage: acceptance <fixtures-dir>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "mtcnn/archive.hpp"
#include "mtcnn/artifact.hpp"
#include "mtcnn/checkpoint.hpp"
#include "mtcnn/cli.hpp"
#include "mtcnn/csv.hpp"
#include "mtcnn/folds.hpp"
#include "mtcnn/loss.hpp"
#include "mtcnn/model.hpp"
#include "mtcnn/prep.hpp"
#include "mtcnn/train.hpp"
#include "synthetic.hpp"

using namespace mtcnn;
namespace fsys = std::filesystem;

namespace {

std::string g_fixtures;
int g_failures = 0;

struct Check {
  std::string detail;
  bool ok = true;

  void expect(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

void criterion(int number, const std::string& name, const std::function<void(Check&)>& body) {
  Check check;
  try {
    body(check);
  } catch (const std::exception& e) {
    check.ok = false;
    check.detail = std::string("exception: ") + e.what();
  }
  if (check.ok) {
    std::cout << "[PASS] " << number << ". " << name;
    if (!check.detail.empty()) std::cout << " (" << check.detail << ")";
    std::cout << "\n";
  } else {
    ++g_failures;
    std::cout << "[FAIL] " << number << ". " << name << " -- " << check.detail << "\n";
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- criterion 1: gradient oracle ------------------------------------------

constexpr double kGradStep = 1e-5;
constexpr double kGradTol = 1e-4;

double loss_with(Model& model, const Vector& x, int label, const Vector* mask) {
  ForwardCache cache;
  const Vector probs = model_forward(model, x, &cache, mask);
  return loss_for(model, probs, label);
}

// Worst relative FD error over every parameter of the model.
double worst_gradient_error(Model& model, const Vector& x, int label, const Vector* mask) {
  ForwardCache cache;
  const Vector probs = model_forward(model, x, &cache, mask);
  zero_grads(model);
  Vector grad_probs;
  if (model.config.head == Head::Sigmoid) {
    grad_probs.resize(1);
    grad_probs[0] = bce_grad(probs[0], label);
  } else {
    grad_probs = cce_grad(probs, one_hot(label, probs.size()));
  }
  model_backward(model, cache, grad_probs);

  double worst = 0.0;
  for (auto& buffer : model.params()) {
    if (buffer.name == "dense.bias" && !model.config.dense_bias) continue;
    for (Eigen::Index i = 0; i < buffer.value->size(); ++i) {
      const double analytic = (*buffer.grad)(i);
      const double fd = testutil::central_diff(
          (*buffer.value)(i), kGradStep, [&] { return loss_with(model, x, label, mask); });
      worst = std::max(worst, testutil::rel_err(analytic, fd));
    }
  }
  return worst;
}

void gradient_oracle(Check& check) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const bool binary = draw % 2 == 0;
    ModelConfig config;
    config.window_len = 40;
    config.depth = 2;
    config.filters = {2, 2};
    config.classes = binary ? 2 : 3;
    config.head = binary ? Head::Sigmoid : Head::Softmax;
    config.dense_bias = draw % 4 == 1;  // exercise the optional bias path too

    Model model = init_model(config, 1000 + static_cast<std::uint64_t>(draw));
    SeededGenerator gen(2000 + static_cast<std::uint64_t>(draw));
    const Vector x = testutil::random_vector(gen, 40);
    const int label = static_cast<int>(gen.next_below(static_cast<std::uint64_t>(config.classes)));

    Vector mask;
    const Vector* mask_ptr = nullptr;
    if (draw % 4 == 3) {  // and the dropout path
      mask = make_dropout_mask(shape_chain(config).flatten_width, 0.25, gen);
      mask_ptr = &mask;
    }
    worst = std::max(worst, worst_gradient_error(model, x, label, mask_ptr));
  }
  const double elapsed = seconds_since(start);
  check.expect(worst < kGradTol, "worst relative error " + format_double(worst));
  check.expect(elapsed < 30.0, "took " + format_double(elapsed) + " s");
  if (check.ok)
    check.detail = "worst " + format_double(worst) + ", " + format_double(elapsed) + " s";
}

// ---- criterion 7 helper ------------------------------------------------------

struct LearningOutcome {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double elapsed_s = 0.0;
};

LearningOutcome run_learning_experiment() {
  const auto start = std::chrono::steady_clock::now();
  const auto data = testutil::make_spectral_dataset(200, 1000, 500.0, 42);

  // sanity first: the classes must be separable by the spectral oracle
  for (int i = 0; i < 200; ++i)
    if (testutil::spectral_class_oracle(data.all.windows.col(i), data.fs) !=
        data.all.labels[static_cast<std::size_t>(i)])
      throw std::runtime_error("spectral oracle failed to separate the synthetic classes");

  const FoldPlan plan = make_folds(data.trials, 7);
  const auto& fold = plan.folds[0];
  const auto as_set = [](const std::vector<std::string>& v) {
    return std::set<std::string>(v.begin(), v.end());
  };
  const WindowArchive archive = testutil::archive_from(data);
  const std::vector<TaskLabel> classes = {TaskLabel::BT, TaskLabel::ST};
  const Dataset train_set = select_by_trials(archive, classes, as_set(fold.train));
  const Dataset val_set = select_by_trials(archive, classes, as_set(fold.validation));
  const Dataset test_set = select_by_trials(archive, classes, as_set(fold.test));

  ModelConfig config;
  config.window_len = 1000;
  config.depth = 2;
  config.classes = 2;
  config.head = Head::Sigmoid;

  TrainOptions options;
  options.epochs = 20;
  options.batch_size = 50;
  options.lr = 0.001;
  options.seed = 42;

  const TrainResult result = train_model(config, train_set, val_set, options);
  LearningOutcome outcome;
  outcome.train_accuracy = *evaluate(result.model, train_set).overall.accuracy;
  outcome.test_accuracy = *evaluate(result.model, test_set).overall.accuracy;
  outcome.elapsed_s = seconds_since(start);
  return outcome;
}

std::string temp_dir(const std::string& tag) {
  const auto dir = fsys::temp_directory_path() / ("mtcnn_acceptance_" + tag);
  fsys::remove_all(dir);
  fsys::create_directories(dir);
  return dir.string();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_fixtures = argv[1];

  criterion(1, "gradient oracle (finite differences, 100 draws, < 30 s)", gradient_oracle);

  criterion(2, "published shape chain at N=5000", [](Check& check) {
    ModelConfig config;  // canonical: N=5000, depth 2, 16/32 filters
    const Model model = init_model(config, 11);
    SeededGenerator gen(12);
    ActivationTrace trace;
    model_forward(model, testutil::random_vector(gen, 5000), nullptr, nullptr, &trace);
    check.expect(trace.maps[1].second.rows() == 4996 && trace.maps[1].second.cols() == 16,
                 "conv1 shape");
    check.expect(trace.maps[2].second.rows() == 4992 && trace.maps[2].second.cols() == 32,
                 "conv2 shape");
    check.expect(trace.maps[3].second.rows() == 2496 && trace.maps[3].second.cols() == 32,
                 "maxpool shape");
    check.expect(trace.maps[4].second.rows() == 79872, "flatten width");
    const ShapeChain chain = shape_chain(config);
    check.expect(chain.flatten_width == 79872, "shape-chain arithmetic");
  });

  criterion(3, "conv/maxpool match brute force exactly (1000 instances)", [](Check& check) {
    SeededGenerator gen(33);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto len = static_cast<Eigen::Index>(5 + gen.next_below(196));
      const auto channels = static_cast<Eigen::Index>(1 + gen.next_below(8));
      const auto filters = static_cast<Eigen::Index>(1 + gen.next_below(8));
      const Matrix x = testutil::random_matrix(gen, len, channels);

      Conv1dLayer layer;
      layer.in_channels = channels;
      layer.filters = filters;
      layer.kernel_size = 5;
      layer.kernels = testutil::random_matrix(gen, 5 * channels, filters);
      layer.bias = testutil::random_matrix(gen, filters, 1);

      const Matrix conv = conv1d_forward(layer, x);
      const Matrix conv_oracle = testutil::naive_conv1d(x, layer.kernels, layer.bias, 5);
      if (conv != conv_oracle) {
        check.expect(false, "conv mismatch at instance " + std::to_string(trial));
        return;
      }
      const Matrix pool = maxpool1d_forward(x).out;
      const Matrix pool_oracle = testutil::naive_maxpool2(x);
      if (pool != pool_oracle) {
        check.expect(false, "maxpool mismatch at instance " + std::to_string(trial));
        return;
      }
    }
  });

  criterion(4, "metrics match an independent evaluator (1000 tuples)", [](Check& check) {
    SeededGenerator gen(44);
    for (int trial = 0; trial < 1000; ++trial) {
      const long tp = static_cast<long>(gen.next_below(40));
      const long tn = static_cast<long>(gen.next_below(40));
      const long fp = static_cast<long>(gen.next_below(40));
      const long fn = static_cast<long>(gen.next_below(40));
      if (tp + tn + fp + fn == 0) continue;
      const MetricSet m = binary_metrics(tp, tn, fp, fn);
      const auto naive = testutil::naive_metrics(tp, tn, fp, fn);
      const auto same = [](const std::optional<double>& got, double want) {
        if (want < 0.0) return !got.has_value();
        return got.has_value() && std::abs(*got - want) < 1e-12;
      };
      if (!(same(m.accuracy, naive.accuracy) && same(m.precision, naive.precision) &&
            same(m.recall, naive.recall) && same(m.f1, naive.f1))) {
        check.expect(false, "tuple " + std::to_string(trial));
        return;
      }
    }
  });

  criterion(5, "snr law and fixture sweep spanning [0.4, 3]", [](Check& check) {
    SeededGenerator gen(55);
    for (int trial = 0; trial < 100; ++trial) {
      const Vector clean = testutil::random_vector(gen, 200, -2.0, 2.0);
      const Vector noise = testutil::random_vector(gen, 200, -1.0, 1.0);
      const double expected = testutil::naive_rms(clean) / testutil::naive_rms(noise);
      if (std::abs(snr_of(clean, noise) - expected) >= 1e-12) {
        check.expect(false, "snr formula mismatch");
        return;
      }
      const double doubled = snr_of(clean, Vector(2.0 * noise));
      if (std::abs(doubled - 0.5 * snr_of(clean, noise)) >= 1e-12) {
        check.expect(false, "doubling lambda did not halve the snr");
        return;
      }
    }

    if (g_fixtures.empty()) {
      check.expect(false, "no fixtures directory given");
      return;
    }
    const std::string arch = temp_dir("snr_arch");
    const std::string mixed = temp_dir("snr_mixed");
    std::ostringstream out, err;
    int code = run_cli({"preprocess", "--manifest", g_fixtures + "/manifest.csv", "--out",
                        arch, "--window-seconds", "2"},
                       out, err);
    check.expect(code == 0, "preprocess failed: " + err.str());
    if (!check.ok) return;
    code = run_cli({"contaminate", "--archive", arch, "--artifacts",
                    g_fixtures + "/artifacts.csv", "--out", mixed, "--lambda",
                    "0.2,0.5,1,2,4", "--beta", "0.2,0.5,1,2,4", "--mode", "oamma", "--seed",
                    "13"},
                   out, err);
    check.expect(code == 0, "contaminate failed: " + err.str());
    if (!check.ok) return;

    std::ifstream report(fsys::path(mixed) / "snr_report.csv");
    std::string line;
    std::getline(report, line);  // header
    double lo = 1e300, hi = 0.0;
    bool unit_point = false;
    while (std::getline(report, line)) {
      const auto last = line.rfind(',');
      const double snr = std::stod(line.substr(last + 1));
      lo = std::min(lo, snr);
      hi = std::max(hi, snr);
      if (line.find(",1,1,") != std::string::npos) unit_point = true;
    }
    check.expect(unit_point, "lambda=beta=1 grid point missing");
    check.expect(lo <= 0.4 && hi >= 3.0,
                 "sweep covers [" + format_double(lo) + ", " + format_double(hi) + "]");
    if (check.ok)
      check.detail = "sweep [" + format_double(lo) + ", " + format_double(hi) + "]";
  });

  criterion(6, "cubic-spline resampler fidelity", [](Check& check) {
    SignalRecord record;
    record.fs = 250.0;
    record.samples.resize(250);
    for (Eigen::Index i = 0; i < 250; ++i)
      record.samples[i] = std::sin(2.0 * std::numbers::pi * 10.0 * static_cast<double>(i) / 250.0);
    const SignalRecord doubled = resample_cubic(record, 500.0);
    double worst = 0.0;
    for (Eigen::Index j = 5; j < doubled.samples.size() - 5; ++j) {
      const double expected =
          std::sin(2.0 * std::numbers::pi * 10.0 * static_cast<double>(j) / 500.0);
      worst = std::max(worst, std::abs(doubled.samples[j] - expected));
    }
    check.expect(worst < 1e-3, "interior error " + format_double(worst));

    record.samples = Vector::Constant(100, 2.5);
    const SignalRecord constant = resample_cubic(record, 500.0);
    check.expect((constant.samples.array() - 2.5).abs().maxCoeff() < 1e-12,
                 "constant drifted");

    SeededGenerator gen(66);
    record.samples = testutil::random_vector(gen, 100);
    const SignalRecord same_rate = resample_cubic(record, 250.0);
    check.expect((same_rate.samples - record.samples).cwiseAbs().maxCoeff() < 1e-12,
                 "knots not reproduced");
  });

  criterion(7, "end-to-end learning on the separable spectral pair (< 5 min)",
            [](Check& check) {
              const LearningOutcome outcome = run_learning_experiment();
              check.expect(outcome.train_accuracy == 1.0,
                           "training accuracy " + format_double(outcome.train_accuracy));
              check.expect(outcome.test_accuracy >= 0.95,
                           "held-out accuracy " + format_double(outcome.test_accuracy));
              check.expect(outcome.elapsed_s < 300.0,
                           "took " + format_double(outcome.elapsed_s) + " s");
              if (check.ok)
                check.detail = "train 1.0, test " + format_double(outcome.test_accuracy) +
                               ", " + format_double(outcome.elapsed_s) + " s";
            });

  criterion(8, "byte-identical reruns of cmd_train", [](Check& check) {
    const auto data = testutil::make_spectral_dataset(48, 500, 500.0, 77);
    const std::string arch = temp_dir("det_arch");
    write_archive(arch, testutil::archive_from(data));

    const std::string run_a = temp_dir("det_a");
    const std::string run_b = temp_dir("det_b");
    for (const auto& out_dir : {run_a, run_b}) {
      std::ostringstream out, err;
      const int code = run_cli({"train", "--archive", arch, "--out", out_dir, "--depth", "1",
                                "--folds", "3", "--seed", "21"},
                               out, err);
      check.expect(code == 0, "train failed: " + err.str());
      if (!check.ok) return;
    }
    const auto same_file = [&](const std::string& name) {
      return testutil::slurp(fsys::path(run_a) / "d1" / name) ==
             testutil::slurp(fsys::path(run_b) / "d1" / name) &&
             !testutil::slurp(fsys::path(run_a) / "d1" / name).empty();
    };
    check.expect(same_file("metrics.csv"), "metrics.csv differs");
    for (int fold = 0; fold < 3; ++fold) {
      check.expect(same_file("fold" + std::to_string(fold) + ".ckpt"),
                   "fold" + std::to_string(fold) + ".ckpt differs");
      check.expect(same_file("fold" + std::to_string(fold) + "_epochs.csv"),
                   "fold" + std::to_string(fold) + "_epochs.csv differs");
    }
  });

  criterion(9, "fold partition properties", [](Check& check) {
    std::vector<TrialRef> trials;
    for (int i = 0; i < 50; ++i)
      trials.push_back({"bt" + std::to_string(i), "s" + std::to_string(i % 6), TaskLabel::BT});
    for (int i = 0; i < 50; ++i)
      trials.push_back({"st" + std::to_string(i), "s" + std::to_string(i % 6), TaskLabel::ST});

    const FoldPlan plan = make_folds(trials, 99);
    check.expect(plan.folds.size() == 10, "fold count");
    std::set<std::string> all_test;
    for (const auto& fold : plan.folds) {
      check.expect(fold.train.size() == 80 && fold.validation.size() == 10 &&
                       fold.test.size() == 10,
                   "80/10/10 ratios");
      std::set<std::string> seen;
      for (const auto* part : {&fold.train, &fold.validation, &fold.test})
        for (const auto& id : *part)
          check.expect(seen.insert(id).second, "partitions overlap");
      check.expect(seen.size() == trials.size(), "partitions do not cover the trials");
      for (const auto& id : fold.test) all_test.insert(id);
    }
    check.expect(all_test.size() == trials.size(), "rotating tests do not cover all trials");

    // uneven classes stay within one trial of the per-class ratio
    std::vector<TrialRef> uneven;
    for (int i = 0; i < 37; ++i)
      uneven.push_back({"a" + std::to_string(i), "s1", TaskLabel::BT});
    for (int i = 0; i < 45; ++i)
      uneven.push_back({"b" + std::to_string(i), "s2", TaskLabel::ST});
    const FoldPlan uneven_plan = make_folds(uneven, 5);
    for (const auto& fold : uneven_plan.folds) {
      long bt = 0, st = 0;
      for (const auto& id : fold.test) (id[0] == 'a' ? bt : st) += 1;
      check.expect(bt >= 3 && bt <= 4, "uneven BT test share");
      check.expect(st >= 4 && st <= 5, "uneven ST test share");
    }

    // windows inherit their trial's partition, never split below trial level
    const auto data = testutil::make_spectral_dataset(12, 64, 64.0, 9);
    WindowArchive archive = testutil::archive_from(data);
    // four windows per trial
    WindowArchive multi;
    multi.fs = archive.fs;
    multi.window_len = archive.window_len;
    multi.samples.resize(64, archive.count() * 4);
    for (Eigen::Index i = 0; i < archive.count(); ++i)
      for (int w = 0; w < 4; ++w) {
        ArchiveEntry entry = archive.entries[static_cast<std::size_t>(i)];
        entry.offset = w * 64;
        entry.id = entry.subject_id + ":" + entry.trial_id + ":" + std::to_string(entry.offset);
        multi.entries.push_back(entry);
        multi.samples.col(i * 4 + w) = archive.samples.col(i);
      }
    const auto archive_trials = trials_of(multi);
    const FoldPlan window_plan = make_folds(archive_trials, 3, {.fold_count = 4});
    const std::vector<TaskLabel> classes = {TaskLabel::BT, TaskLabel::ST};
    for (const auto& fold : window_plan.folds) {
      const auto as_set = [](const std::vector<std::string>& v) {
        return std::set<std::string>(v.begin(), v.end());
      };
      const Dataset train_set = select_by_trials(multi, classes, as_set(fold.train));
      const Dataset test_set = select_by_trials(multi, classes, as_set(fold.test));
      check.expect(train_set.count() % 4 == 0 && test_set.count() % 4 == 0,
                   "a trial's windows were split across partitions");
      check.expect(train_set.count() + test_set.count() < multi.count(),
                   "validation part missing");
    }
  });

  const char* eegmat = std::getenv("MTCNN_EEGMAT_DIR");
  if (eegmat == nullptr || std::string(eegmat).empty()) {
    std::cout << "[SKIP] 10. database-E reproduction (set MTCNN_EEGMAT_DIR to a directory "
                 "with manifest.csv and artifacts.csv; see README)\n";
  } else {
    const std::string base = eegmat;
    criterion(10, "database-E reproduction (optional)", [&base](Check& check) {
      const std::string arch = temp_dir("eegmat_arch");
      const std::string run = temp_dir("eegmat_run");
      std::ostringstream out, err;
      int code = run_cli({"preprocess", "--manifest", base + "/manifest.csv", "--out", arch},
                         out, err);
      check.expect(code == 0, "preprocess failed: " + err.str());
      if (!check.ok) return;
      code = run_cli({"train", "--archive", arch, "--out", run, "--depth", "2", "--folds",
                      "10", "--seed", "1"},
                     out, err);
      check.expect(code == 0, "train failed: " + err.str());
      if (!check.ok) return;

      std::ifstream metrics(fsys::path(run) / "d2" / "metrics.csv");
      std::string line, mean_line;
      while (std::getline(metrics, line))
        if (line.rfind("mean,", 0) == 0) mean_line = line;
      check.expect(!mean_line.empty(), "no aggregate row");
      if (!check.ok) return;
      std::stringstream fields(mean_line);
      std::string field;
      std::getline(fields, field, ',');  // "mean"
      std::getline(fields, field, ',');  // test windows
      std::getline(fields, field, ',');  // accuracy
      const double accuracy = std::stod(field);
      check.expect(accuracy >= 0.95, "clean accuracy " + field);
      if (!check.ok) return;

      // contaminated variant at the unit operating point
      const std::string mixed = temp_dir("eegmat_mixed");
      const std::string mixed_run = temp_dir("eegmat_mixed_run");
      code = run_cli({"contaminate", "--archive", arch, "--artifacts",
                      base + "/artifacts.csv", "--out", mixed, "--lambda", "1", "--beta", "1",
                      "--mode", "oamma", "--seed", "2"},
                     out, err);
      check.expect(code == 0, "contaminate failed: " + err.str());
      if (!check.ok) return;
      code = run_cli({"train", "--archive", mixed, "--out", mixed_run, "--depth", "2",
                      "--folds", "10", "--seed", "1"},
                     out, err);
      check.expect(code == 0, "train on contaminated data failed: " + err.str());
      if (!check.ok) return;
      std::ifstream mixed_metrics(fsys::path(mixed_run) / "d2" / "metrics.csv");
      std::string mixed_mean;
      while (std::getline(mixed_metrics, line))
        if (line.rfind("mean,", 0) == 0) mixed_mean = line;
      std::stringstream mixed_fields(mixed_mean);
      std::getline(mixed_fields, field, ',');
      std::getline(mixed_fields, field, ',');
      std::getline(mixed_fields, field, ',');
      const double mixed_accuracy = std::stod(field);
      check.expect(std::abs(accuracy - mixed_accuracy) <= 0.05,
                   "contaminated accuracy " + field + " vs clean " + format_double(accuracy));
    });
  }

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all mandatory criteria passed\n";
  return 0;
}
