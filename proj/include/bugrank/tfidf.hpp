#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bugrank/execution.hpp"
#include "bugrank/records.hpp"
#include "bugrank/text.hpp"

namespace bugrank {

using TermId = std::uint32_t;

class Vocabulary {
 public:
  Vocabulary() = default;
  /// `terms` must be strictly increasing; df[i] belongs to terms[i].
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint64_t> document_frequency,
             std::uint64_t total_documents);

  std::size_t size() const noexcept { return terms_.size(); }
  std::optional<TermId> id(std::string_view term) const;
  const std::string& term(TermId id) const { return terms_.at(id); }
  std::uint64_t document_frequency(TermId id) const { return df_.at(id); }
  std::uint64_t total_documents() const noexcept { return total_documents_; }
  /// Smoothed idf: ln((1 + N) / (1 + df)) + 1.
  double idf(TermId id) const;
  /// FNV-1a over the term list; ties checkpoints to the index they were built against.
  std::uint64_t hash() const noexcept { return hash_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.df_ == b.df_ && a.total_documents_ == b.total_documents_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> df_;
  std::uint64_t total_documents_ = 0;
  std::unordered_map<std::string, TermId> lookup_;
  std::uint64_t hash_ = 0;
};

/// Sparse unit-norm vector, entries sorted by term id.
struct TfIdfVector {
  std::vector<std::pair<TermId, double>> entries;
  bool empty() const noexcept { return entries.empty(); }
  friend bool operator==(const TfIdfVector&, const TfIdfVector&) = default;
};

struct Posting {
  PostId question_id;
  double weight;
  friend bool operator==(const Posting&, const Posting&) = default;
};

struct RetrievalHit {
  PostId question_id;
  double similarity;
  friend bool operator==(const RetrievalHit&, const RetrievalHit&) = default;
};

class QuestionIndex {
 public:
  /// Builds the index. Throws InvalidArgument on an empty corpus and on token
  /// lists that are not fully preprocessed.
  static QuestionIndex build(std::span<const std::pair<PostId, TokenList>> questions);

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  std::size_t size() const noexcept { return ids_.size(); }
  std::span<const PostId> question_ids() const noexcept { return ids_; }
  const TfIdfVector* vector(PostId id) const;
  PostId id_at(std::size_t slot) const { return ids_.at(slot); }
  const TfIdfVector& vector_at(std::size_t slot) const { return vectors_.at(slot); }
  std::span<const Posting> postings(TermId t) const { return inverted_.at(t); }

  TfIdfVector vectorize(const TokenList& tokens) const;

  /// Top-m questions with similarity > 0, descending similarity, ties by
  /// ascending id.
  std::vector<RetrievalHit> retrieve(const TfIdfVector& query, std::size_t m,
                                     Execution ex = Execution::Parallel) const;

  void save(const std::filesystem::path& path) const;
  static QuestionIndex load(const std::filesystem::path& path);
  std::string serialize() const;
  static QuestionIndex deserialize(std::string_view bytes);

  friend bool operator==(const QuestionIndex& a, const QuestionIndex& b) {
    return a.vocab_ == b.vocab_ && a.ids_ == b.ids_ && a.vectors_ == b.vectors_;
  }

 private:
  void rebuild_views();

  Vocabulary vocab_;
  std::vector<PostId> ids_;             // insertion order
  std::vector<TfIdfVector> vectors_;    // parallel to ids_
  std::unordered_map<PostId, std::size_t> slot_;
  std::vector<std::vector<Posting>> inverted_;
};

/// Dot product of two unit vectors, clamped to [0, 1].
double cosine(const TfIdfVector& a, const TfIdfVector& b) noexcept;

}  // namespace bugrank
