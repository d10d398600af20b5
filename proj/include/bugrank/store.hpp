#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bugrank/records.hpp"

namespace bugrank {

// A record store is a directory:
//   posts.jsonl, users.jsonl, comments.jsonl   one JSON object per line
//   answers.idx                                question id -> byte offsets
//   store.json                                 counts
// The layout is described in docs/store_format.md.

struct StoreSummary {
  std::uint64_t posts = 0;
  std::uint64_t questions = 0;
  std::uint64_t answers = 0;
  std::uint64_t orphan_answers = 0;  ///< answers whose parent is not a stored question
  std::uint64_t users = 0;
  std::uint64_t comments = 0;
};

std::string to_json_line(const RawPost& p);
std::string to_json_line(const RawUser& u);
std::string to_json_line(const RawComment& c);
RawPost post_from_json_line(std::string_view line);
RawUser user_from_json_line(std::string_view line);
RawComment comment_from_json_line(std::string_view line);

/// Single writer for one store directory. Opening truncates the record files.
class StoreWriter {
 public:
  explicit StoreWriter(std::filesystem::path dir);

  void append(const Record& r);
  /// Flushes, rebuilds answers.idx and writes store.json.
  StoreSummary finish();

 private:
  std::filesystem::path dir_;
  std::ofstream posts_, users_, comments_;
};

/// Appends `records` to the per-kind files under `dir` in arrival order,
/// creating the files if needed, and refreshes the answer index. Returns the
/// number of records written.
std::size_t write_store(std::span<const Record> records, const std::filesystem::path& dir);

/// Rebuilds answers.idx and store.json from the record files.
StoreSummary rebuild_store_index(const std::filesystem::path& dir);

/// Read-only view over a finished store. Safe for concurrent readers: every
/// lookup opens its own stream.
class StoreReader {
 public:
  explicit StoreReader(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const StoreSummary& summary() const noexcept { return summary_; }

  void for_each_post(const std::function<void(RawPost&&)>& fn) const;
  std::vector<RawPost> scan_posts() const;
  std::vector<RawUser> scan_users() const;
  std::vector<RawComment> scan_comments() const;

  /// Question ids in file order.
  const std::vector<PostId>& question_ids() const noexcept { return question_order_; }
  std::size_t answer_count(PostId question_id) const;

  RawPost post(PostId id) const;
  /// Answers sorted by descending score, ties by ascending id. Throws
  /// NotFoundError for unknown ids and WrongKindError for answer ids.
  std::pair<RawPost, std::vector<RawPost>> question_with_answers(PostId question_id) const;

  const RawUser* user(UserId id) const;

 private:
  struct QuestionEntry {
    std::uint64_t offset = 0;
    std::vector<std::uint64_t> answer_offsets;
  };
  RawPost read_post_at(std::ifstream& in, std::uint64_t offset) const;

  std::filesystem::path dir_;
  StoreSummary summary_;
  std::vector<PostId> question_order_;
  std::unordered_map<PostId, QuestionEntry> questions_;
  std::unordered_map<PostId, std::uint64_t> answers_;
  std::unordered_map<UserId, RawUser> users_;
};

}  // namespace bugrank
