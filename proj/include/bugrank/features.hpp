#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bugrank/html.hpp"
#include "bugrank/records.hpp"
#include "bugrank/text.hpp"
#include "bugrank/tfidf.hpp"

namespace bugrank {

struct ReadabilityIndices {
  double ari = 0;
  double flesch_reading_ease = 0;
  double flesch_kincaid = 0;
  double gunning_fog = 0;
  double smog = 0;
  double coleman_liau = 0;
  double lix = 0;
  double rix = 0;
};

/// All indices are 0 when there are no words or no sentences.
ReadabilityIndices readability(const TextCounts& c);

struct TextAnalysisFeatures {
  std::size_t body_length = 0;
  std::size_t email_count = 0;
  std::size_t url_count = 0;
  double uppercase_pct = 0;
  double lowercase_pct = 0;
  std::size_t spaces_count = 0;
  ReadabilityIndices readability;
  std::size_t lines_of_code = 0;
  double code_percentage = 0;
  std::size_t code_tag_count = 0;
  std::size_t p_tag_count = 0;
  double title_body_similarity = 0;
  std::size_t title_length = 0;
};

std::size_t count_urls(std::string_view s);
std::size_t count_emails(std::string_view s);

/// Body tokens used for similarity and embeddings: prose followed by code.
TokenList body_tokens(const StrippedBody& body);

TextAnalysisFeatures analyze_post(const StrippedBody& body, std::string_view raw_html,
                                  const std::optional<std::string>& title);

struct AffectiveScores {
  double polarity = 0;
  double subjectivity = 0;
};

/// Mean polarity/subjectivity of tokens found in the bundled lexicon.
AffectiveScores sentiment(std::string_view text);
std::size_t lexicon_size();

using RelevanceGrade = int;
inline constexpr RelevanceGrade kPadLabel = -1;

/// Bins vote scores into five contiguous, near-equal buckets by ascending
/// score (stable), grade = bucket index 1..5. Output is position-aligned
/// with the input.
std::vector<RelevanceGrade> grade_answers(const std::vector<std::int64_t>& scores);

/// Cosine between raw term-frequency vectors; 0 when either side is empty.
double title_body_similarity(const TokenList& title, const TokenList& body);

// Dense feature layout. The order is part of the dataset and checkpoint format.
enum DenseField : std::size_t {
  kBodyLength,
  kEmailCount,
  kUrlCount,
  kUppercasePct,
  kLowercasePct,
  kSpacesCount,
  kAri,
  kFleschReadingEase,
  kFleschKincaid,
  kGunningFog,
  kSmog,
  kColemanLiau,
  kLix,
  kRix,
  kLinesOfCode,
  kCodePercentage,
  kCodeTagCount,
  kPTagCount,
  kTitleBodySimilarity,
  kTitleLength,
  kPolarity,
  kSubjectivity,
  kQuestionTitleBodySimilarity,
  kOwnerReputation,
  kRetrievalSimilarity,
  kDenseFieldCount
};

inline constexpr std::size_t kDenseDim = kDenseFieldCount;

struct DenseFieldInfo {
  const char* name;
  bool is_count;  ///< log1p-transformed before standardization
};

const std::array<DenseFieldInfo, kDenseDim>& dense_fields();

/// Token id used for out-of-vocabulary terms (the extra embedding row).
inline TermId oov_id(const Vocabulary& v) { return static_cast<TermId>(v.size()); }
/// Marks an unused slot of a padded id list.
inline constexpr std::int32_t kPadToken = -1;

struct FeatureLimits {
  std::size_t query_tokens = 64;
  std::size_t answer_tokens = 128;
  friend bool operator==(const FeatureLimits&, const FeatureLimits&) = default;
};

struct CandidateFeatures {
  PostId answer_id = 0;
  std::vector<std::int32_t> query_token_ids;
  std::vector<std::int32_t> answer_token_ids;
  std::vector<double> dense;  ///< raw values, kDenseDim entries; normalization is the model's job
  RelevanceGrade label = kPadLabel;

  bool is_pad() const noexcept { return label == kPadLabel; }
  static CandidateFeatures pad(const FeatureLimits& limits);
  friend bool operator==(const CandidateFeatures&, const CandidateFeatures&) = default;
};

/// Looks up ids (OOV -> oov_id) and pads/truncates to `length`.
std::vector<std::int32_t> token_ids(const TokenList& tokens, const Vocabulary& vocab,
                                    std::size_t length);

/// Everything about an answer that does not depend on the query. Computing
/// it once per answer lets training and serving share the same code path.
struct AnswerProfile {
  PostId answer_id = 0;
  std::int64_t vote_score = 0;
  TokenList tokens;
  std::vector<double> dense;  ///< retrieval similarity slot left at 0
};

AnswerProfile profile_answer(const RawPost& answer, const RawPost& question,
                             const RawUser* owner);

CandidateFeatures assemble_candidate(const TokenList& query_tokens, const AnswerProfile& answer,
                                     double retrieval_sim, const Vocabulary& vocab,
                                     const FeatureLimits& limits = {});

CandidateFeatures build_candidate_features(const TokenList& query_tokens, const RawPost& answer,
                                           const RawPost& question, const RawUser* owner,
                                           double retrieval_sim, const Vocabulary& vocab,
                                           const FeatureLimits& limits = {});

}  // namespace bugrank
