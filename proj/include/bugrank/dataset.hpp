#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bugrank/model.hpp"
#include "bugrank/store.hpp"
#include "bugrank/tfidf.hpp"

namespace bugrank {

struct DatasetConfig {
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  std::size_t list_size = 50;
  FeatureLimits limits;
};

/// Counts laid out like the usual train/test/total dataset table.
struct DatasetManifest {
  std::uint64_t queries_train = 0;
  std::uint64_t queries_test = 0;
  std::uint64_t answers_train = 0;
  std::uint64_t answers_test = 0;
  std::uint64_t vocabulary_size = 0;
  std::uint64_t vocabulary_hash = 0;
  std::uint64_t questions_without_answers = 0;
  DatasetConfig config;

  std::string to_json() const;
  static DatasetManifest from_json(std::string_view text);
};

struct Dataset {
  std::vector<ExampleList> train;
  std::vector<ExampleList> test;
  DatasetManifest manifest;
  /// Question owner (group key) per list, parallel to train/test.
  std::vector<std::int64_t> train_groups;
  std::vector<std::int64_t> test_groups;
};

/// One list per question with at least one answer; the question's own tokens
/// form the query side, labels come from grade_answers, and the split keeps
/// each question owner on one side.
Dataset assemble_training_set(const StoreReader& store, const QuestionIndex& index,
                              const DatasetConfig& config);

/// Writes manifest.json, train.jsonl and test.jsonl. PAD entries are not
/// written; loading pads back to the manifest's list size.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

std::string to_json_line(const ExampleList& list, std::int64_t group);
ExampleList example_list_from_json(std::string_view line, std::int64_t* group = nullptr);

}  // namespace bugrank
