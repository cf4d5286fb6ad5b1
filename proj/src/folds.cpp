#include "mtcnn/folds.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mtcnn/errors.hpp"
#include "mtcnn/rng.hpp"

namespace mtcnn {
namespace {

void shuffle_in_place(std::vector<std::size_t>& items, SeededGenerator& gen) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(gen.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

// Contiguous chunk boundaries: the first (n % k) chunks carry one extra item.
std::vector<std::pair<std::size_t, std::size_t>> chunk_bounds(std::size_t n, int k) {
  std::vector<std::pair<std::size_t, std::size_t>> bounds;
  const std::size_t base = n / static_cast<std::size_t>(k);
  const std::size_t extra = n % static_cast<std::size_t>(k);
  std::size_t start = 0;
  for (int c = 0; c < k; ++c) {
    const std::size_t len = base + (static_cast<std::size_t>(c) < extra ? 1 : 0);
    bounds.emplace_back(start, len);
    start += len;
  }
  return bounds;
}

}  // namespace

FoldPlan make_folds(const std::vector<TrialRef>& trials, std::uint64_t seed,
                    const FoldOptions& options) {
  if (trials.empty()) throw DatasetError("make_folds: no trials");
  if (options.fold_count < 3)
    throw ConfigError("make_folds: need at least 3 folds (train/validation/test)");

  std::set<std::string> seen;
  for (const auto& trial : trials)
    if (!seen.insert(trial.trial_id).second)
      throw DatasetError("make_folds: duplicate trial id '" + trial.trial_id + "'");

  // A group is the unit that moves between partitions: one trial, or one
  // subject's whole trial list in leave-subjects-out mode.
  struct Group {
    std::vector<std::string> trial_ids;
  };
  // Strata are keyed so iteration order is deterministic.
  std::map<std::pair<int, std::string>, std::vector<Group>> strata;

  if (options.group_by_subject) {
    std::map<std::string, Group> by_subject;
    for (const auto& trial : trials) by_subject[trial.subject_id].trial_ids.push_back(trial.trial_id);
    auto& groups = strata[{0, "subjects"}];
    for (auto& [subject, group] : by_subject) groups.push_back(std::move(group));
  } else if (options.stratify) {
    for (const auto& trial : trials)
      strata[{vocabulary_rank(trial.label), to_string(trial.label)}].push_back(
          Group{{trial.trial_id}});
  } else {
    auto& groups = strata[{0, "all"}];
    for (const auto& trial : trials) groups.push_back(Group{{trial.trial_id}});
  }

  FoldPlan plan;
  plan.fold_count = options.fold_count;
  plan.folds.resize(static_cast<std::size_t>(options.fold_count));
  const auto k = options.fold_count;

  std::size_t stratum_index = 0;
  for (auto& [key, groups] : strata) {
    if (groups.size() < static_cast<std::size_t>(k))
      plan.warnings.push_back("stratum '" + key.second + "' has only " +
                              std::to_string(groups.size()) + " assignable units for " +
                              std::to_string(k) + " folds; some partitions will be empty");

    std::vector<std::size_t> order(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    SeededGenerator gen(derive_seed(seed, stratum_index));
    shuffle_in_place(order, gen);

    const auto bounds = chunk_bounds(order.size(), k);
    for (int fold = 0; fold < k; ++fold) {
      // Rotating assignment, staggered per stratum so the oversized leading
      // chunks land on different folds.
      const int test_chunk = static_cast<int>((fold + stratum_index) % static_cast<std::size_t>(k));
      const int val_chunk = (test_chunk + 1) % k;
      auto& assignment = plan.folds[static_cast<std::size_t>(fold)];
      for (int c = 0; c < k; ++c) {
        auto* bucket = c == test_chunk ? &assignment.test
                       : c == val_chunk ? &assignment.validation
                                        : &assignment.train;
        const auto [start, len] = bounds[static_cast<std::size_t>(c)];
        for (std::size_t i = start; i < start + len; ++i)
          for (const auto& id : groups[order[i]].trial_ids) bucket->push_back(id);
      }
    }
    ++stratum_index;
  }

  for (const auto& fold : plan.folds)
    if (fold.train.empty())
      throw DatasetError("make_folds: a fold has an empty training partition; too few trials");
  return plan;
}

}  // namespace mtcnn
