#include "mtcnn/train.hpp"

#include <algorithm>
#include <map>

#include "mtcnn/errors.hpp"
#include "mtcnn/loss.hpp"

namespace mtcnn {
namespace {

void check_dataset(const ModelConfig& config, const Dataset& data, const char* what) {
  if (data.windows.cols() != static_cast<Eigen::Index>(data.labels.size()))
    throw ShapeError(std::string(what) + ": label count does not match window count");
  if (data.count() > 0 && data.windows.rows() != config.window_len)
    throw ShapeError(std::string(what) + ": window length " +
                     std::to_string(data.windows.rows()) + " does not match config " +
                     std::to_string(config.window_len));
  for (int label : data.labels)
    if (label < 0 || label >= config.classes)
      throw DatasetError(std::string(what) + ": class index " + std::to_string(label) +
                         " out of range");
}

// dLoss/dprobs for one window.
Vector loss_grad(const Model& model, const Vector& probs, int label) {
  if (model.config.head == Head::Sigmoid) {
    Vector g(1);
    g[0] = bce_grad(probs[0], label);
    return g;
  }
  return cce_grad(probs, one_hot(label, probs.size()));
}

}  // namespace

double loss_for(const Model& model, const Vector& probs, int label) {
  if (model.config.head == Head::Sigmoid) return bce_loss(probs[0], label);
  return cce_loss(probs, one_hot(label, probs.size()));
}

int predict_class(const Model& model, const Vector& probs) {
  if (model.config.head == Head::Sigmoid) return probs[0] >= 0.5 ? 1 : 0;
  Eigen::Index best = 0;
  probs.maxCoeff(&best);
  return static_cast<int>(best);
}

TrainResult train_model(const ModelConfig& config, const Dataset& train, const Dataset& val,
                        const TrainOptions& options) {
  config.validate();
  if (train.count() == 0) throw DatasetError("train_model: empty training set");
  check_dataset(config, train, "train set");
  check_dataset(config, val, "validation set");
  if (options.epochs < 1 || options.batch_size < 1)
    throw ConfigError("train_model: epochs and batch size must be positive");

  TrainResult result;
  result.model = init_model(config, options.seed);
  Model& model = result.model;
  auto buffers = model.params();
  AdamState adam = make_adam(buffers, options.lr);
  const Eigen::Index flatten_width = shape_chain(config).flatten_width;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(train.count()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    SeededGenerator epoch_gen(derive_seed(options.seed, static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(epoch_gen.next_below(i));
      std::swap(order[i - 1], order[j]);
    }

    double loss_sum = 0.0;
    long correct = 0;
    ForwardCache cache;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t stop = std::min(order.size(), start + options.batch_size);
      const auto batch_len = static_cast<double>(stop - start);
      const Vector mask =
          config.dropout_rate > 0.0
              ? make_dropout_mask(flatten_width, config.dropout_rate, epoch_gen)
              : Vector();

      zero_grads(model);
      for (std::size_t i = start; i < stop; ++i) {
        const Eigen::Index col = order[i];
        const int label = train.labels[static_cast<std::size_t>(col)];
        const Vector probs = model_forward(model, train.windows.col(col), &cache,
                                           mask.size() > 0 ? &mask : nullptr);
        loss_sum += loss_for(model, probs, label);
        correct += predict_class(model, probs) == label ? 1 : 0;
        model_backward(model, cache, loss_grad(model, probs, label));
      }
      // Average the batch gradient, then one Adam update.
      for (auto& buffer : buffers) *buffer.grad /= batch_len;
      adam_step(adam, buffers);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(train.count());
    stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(train.count());

    if (val.count() > 0) {
      double val_loss_sum = 0.0;
      long val_correct = 0;
      for (Eigen::Index col = 0; col < val.count(); ++col) {
        const Vector probs = model_forward(model, val.windows.col(col));
        val_loss_sum += loss_for(model, probs, val.labels[static_cast<std::size_t>(col)]);
        val_correct +=
            predict_class(model, probs) == val.labels[static_cast<std::size_t>(col)] ? 1 : 0;
      }
      stats.val_loss = val_loss_sum / static_cast<double>(val.count());
      stats.val_accuracy = static_cast<double>(val_correct) / static_cast<double>(val.count());
    }
    result.stats.push_back(stats);
  }
  return result;
}

EvalReport evaluate(const Model& model, const Dataset& data) {
  check_dataset(model.config, data, "eval set");
  ConfusionCounts confusion = make_confusion(model.config.classes);
  for (Eigen::Index col = 0; col < data.count(); ++col) {
    const Vector probs = model_forward(model, data.windows.col(col));
    const int predicted = predict_class(model, probs);
    confusion.counts(data.labels[static_cast<std::size_t>(col)], predicted) += 1;
  }
  return report_from_confusion(confusion);
}

std::vector<TaskLabel> classes_present(const WindowArchive& archive) {
  std::set<int> ranks;
  for (const auto& entry : archive.entries) ranks.insert(vocabulary_rank(entry.label));
  std::vector<TaskLabel> classes;
  for (int rank : ranks) classes.push_back(static_cast<TaskLabel>(rank));
  return classes;
}

std::vector<TrialRef> trials_of(const WindowArchive& archive) {
  std::map<std::string, TrialRef> by_key;
  for (const auto& entry : archive.entries) {
    const std::string key = entry.subject_id + ":" + entry.trial_id;
    auto [it, inserted] =
        by_key.try_emplace(key, TrialRef{key, entry.subject_id, entry.label});
    if (!inserted && it->second.label != entry.label)
      throw DatasetError("trial '" + key + "' carries more than one label");
  }
  std::vector<TrialRef> trials;
  trials.reserve(by_key.size());
  for (const auto& [key, ref] : by_key) trials.push_back(ref);
  return trials;
}

Dataset select_by_trials(const WindowArchive& archive, const std::vector<TaskLabel>& classes,
                         const std::set<std::string>& trial_keys) {
  std::map<int, int> class_of_rank;
  for (std::size_t c = 0; c < classes.size(); ++c)
    class_of_rank[vocabulary_rank(classes[c])] = static_cast<int>(c);

  Dataset data;
  std::vector<Eigen::Index> columns;
  for (std::size_t i = 0; i < archive.entries.size(); ++i) {
    const auto& entry = archive.entries[i];
    if (!trial_keys.contains(entry.subject_id + ":" + entry.trial_id)) continue;
    const auto it = class_of_rank.find(vocabulary_rank(entry.label));
    if (it == class_of_rank.end())
      throw DatasetError("window '" + entry.id + "' has label " + to_string(entry.label) +
                         " outside the class list");
    columns.push_back(static_cast<Eigen::Index>(i));
    data.labels.push_back(it->second);
    data.window_ids.push_back(entry.id);
    data.trial_ids.push_back(entry.trial_id);
    data.subject_ids.push_back(entry.subject_id);
  }
  data.windows.resize(archive.window_len, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i)
    data.windows.col(static_cast<Eigen::Index>(i)) = archive.samples.col(columns[i]);
  return data;
}

}  // namespace mtcnn
