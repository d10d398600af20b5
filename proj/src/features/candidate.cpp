#include <cmath>

#include "bugrank/features.hpp"

namespace bugrank {

const std::array<DenseFieldInfo, kDenseDim>& dense_fields() {
  static const std::array<DenseFieldInfo, kDenseDim> fields{{
      {"body_length", true},
      {"email_count", true},
      {"url_count", true},
      {"uppercase_pct", false},
      {"lowercase_pct", false},
      {"spaces_count", true},
      {"ari", false},
      {"flesch_reading_ease", false},
      {"flesch_kincaid", false},
      {"gunning_fog", false},
      {"smog", false},
      {"coleman_liau", false},
      {"lix", false},
      {"rix", false},
      {"lines_of_code", true},
      {"code_percentage", false},
      {"code_tag_count", true},
      {"p_tag_count", true},
      {"title_body_similarity", false},
      {"title_length", true},
      {"polarity", false},
      {"subjectivity", false},
      {"question_title_body_similarity", false},
      {"owner_reputation", true},
      {"retrieval_similarity", false},
  }};
  return fields;
}

CandidateFeatures CandidateFeatures::pad(const FeatureLimits& limits) {
  CandidateFeatures c;
  c.query_token_ids.assign(limits.query_tokens, kPadToken);
  c.answer_token_ids.assign(limits.answer_tokens, kPadToken);
  c.dense.assign(kDenseDim, 0.0);
  c.label = kPadLabel;
  return c;
}

std::vector<std::int32_t> token_ids(const TokenList& tokens, const Vocabulary& vocab,
                                    std::size_t length) {
  std::vector<std::int32_t> ids(length, kPadToken);
  const auto oov = static_cast<std::int32_t>(oov_id(vocab));
  for (std::size_t i = 0; i < length && i < tokens.size(); ++i) {
    const auto id = vocab.id(tokens.tokens[i]);
    ids[i] = id ? static_cast<std::int32_t>(*id) : oov;
  }
  return ids;
}

AnswerProfile profile_answer(const RawPost& answer, const RawPost& question,
                             const RawUser* owner) {
  const auto body = strip_html(answer.body);
  const auto analysis = analyze_post(body, answer.body, question.title);
  const auto affect = sentiment(body.text);
  const auto question_body = strip_html(question.body);
  const double question_sim =
      question.title ? title_body_similarity(preprocess_text(*question.title),
                                             body_tokens(question_body))
                     : 0.0;

  AnswerProfile p;
  p.answer_id = answer.id;
  p.vote_score = answer.score;
  p.tokens = body_tokens(body);
  auto& d = p.dense;
  d.assign(kDenseDim, 0.0);
  const auto& r = analysis.readability;
  d[kBodyLength] = static_cast<double>(analysis.body_length);
  d[kEmailCount] = static_cast<double>(analysis.email_count);
  d[kUrlCount] = static_cast<double>(analysis.url_count);
  d[kUppercasePct] = analysis.uppercase_pct;
  d[kLowercasePct] = analysis.lowercase_pct;
  d[kSpacesCount] = static_cast<double>(analysis.spaces_count);
  d[kAri] = r.ari;
  d[kFleschReadingEase] = r.flesch_reading_ease;
  d[kFleschKincaid] = r.flesch_kincaid;
  d[kGunningFog] = r.gunning_fog;
  d[kSmog] = r.smog;
  d[kColemanLiau] = r.coleman_liau;
  d[kLix] = r.lix;
  d[kRix] = r.rix;
  d[kLinesOfCode] = static_cast<double>(analysis.lines_of_code);
  d[kCodePercentage] = analysis.code_percentage;
  d[kCodeTagCount] = static_cast<double>(analysis.code_tag_count);
  d[kPTagCount] = static_cast<double>(analysis.p_tag_count);
  d[kTitleBodySimilarity] = analysis.title_body_similarity;
  d[kTitleLength] = static_cast<double>(analysis.title_length);
  d[kPolarity] = affect.polarity;
  d[kSubjectivity] = affect.subjectivity;
  d[kQuestionTitleBodySimilarity] = question_sim;
  d[kOwnerReputation] = owner ? static_cast<double>(owner->reputation) : 0.0;
  return p;
}

CandidateFeatures assemble_candidate(const TokenList& query_tokens, const AnswerProfile& answer,
                                     double retrieval_sim, const Vocabulary& vocab,
                                     const FeatureLimits& limits) {
  CandidateFeatures c;
  c.answer_id = answer.answer_id;
  c.query_token_ids = token_ids(query_tokens, vocab, limits.query_tokens);
  c.answer_token_ids = token_ids(answer.tokens, vocab, limits.answer_tokens);
  c.dense = answer.dense;
  c.dense[kRetrievalSimilarity] = retrieval_sim;
  c.label = 0;
  return c;
}

CandidateFeatures build_candidate_features(const TokenList& query_tokens, const RawPost& answer,
                                           const RawPost& question, const RawUser* owner,
                                           double retrieval_sim, const Vocabulary& vocab,
                                           const FeatureLimits& limits) {
  return assemble_candidate(query_tokens, profile_answer(answer, question, owner), retrieval_sim,
                            vocab, limits);
}

}  // namespace bugrank
