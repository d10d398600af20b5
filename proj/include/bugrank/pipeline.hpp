#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bugrank/checkpoint.hpp"
#include "bugrank/store.hpp"
#include "bugrank/text.hpp"
#include "bugrank/tfidf.hpp"

namespace bugrank {

/// Tokens a question contributes to the index: title, prose and code.
TokenList question_tokens(const RawPost& question);

/// Indexes every stored question, in store order.
QuestionIndex build_question_index(const StoreReader& store);

struct BugReport {
  std::optional<std::string> title;
  std::string description;
  std::optional<std::string> steps_to_reproduce;
};

/// Joins the non-empty fields with single spaces and preprocesses the result.
/// Throws InvalidArgument when every field is empty or blank.
TokenList build_query(const BugReport& b);

struct Recommendation {
  PostId answer_id = 0;
  PostId question_id = 0;
  std::string question_title;
  double model_score = 0;
  std::int64_t vote_score = 0;
  double retrieval_similarity = 0;
  std::string url;
};

enum class RecommendStatus { Ok, NoMatch };

struct RankedSolutionList {
  std::string query;
  RecommendStatus status = RecommendStatus::NoMatch;
  std::vector<Recommendation> items;

  /// {"query", "status", "results": [...]}; the results array is the same
  /// one the HTTP service returns.
  std::string to_json() const;
  std::string results_json() const;
};

std::string answer_url(PostId answer_id);

struct EngineOptions {
  std::size_t retrieval_breadth = 10;  ///< questions pulled from the index
};

/// Index + store + model. Immutable after construction, so recommend() is
/// safe to call from many threads.
class Engine {
 public:
  /// Throws IncompatibleError when the model was trained on another vocabulary.
  Engine(StoreReader store, QuestionIndex index, Checkpoint model, EngineOptions options = {});

  static Engine open(const std::filesystem::path& store_dir,
                     const std::filesystem::path& index_file,
                     const std::filesystem::path& model_dir, EngineOptions options = {});

  RankedSolutionList recommend(const BugReport& report, std::size_t k) const;
  RankedSolutionList recommend_text(const std::string& text, std::size_t k) const;

  const Checkpoint& model() const noexcept { return model_; }
  const QuestionIndex& index() const noexcept { return index_; }
  std::string version() const;

 private:
  StoreReader store_;
  QuestionIndex index_;
  Checkpoint model_;
  EngineOptions options_;
};

}  // namespace bugrank
