#include <algorithm>

#include <json.hpp>

#include "bugrank/error.hpp"
#include "bugrank/features.hpp"
#include "bugrank/html.hpp"
#include "bugrank/pipeline.hpp"

namespace bugrank {

using nlohmann::ordered_json;

TokenList question_tokens(const RawPost& question) {
  const auto body = strip_html(question.body);
  std::string all = question.title.value_or("");
  all.push_back('\n');
  all.append(body.text);
  for (const auto& code : body.code_blocks) {
    all.push_back('\n');
    all.append(code);
  }
  return preprocess_text(all);
}

QuestionIndex build_question_index(const StoreReader& store) {
  std::vector<std::pair<PostId, TokenList>> docs;
  store.for_each_post([&](RawPost&& p) {
    if (p.post_type == PostType::Question) docs.emplace_back(p.id, question_tokens(p));
  });
  return QuestionIndex::build(docs);
}

TokenList build_query(const BugReport& b) {
  std::string joined;
  for (const auto* field : {b.title ? &*b.title : nullptr, &b.description,
                            b.steps_to_reproduce ? &*b.steps_to_reproduce : nullptr}) {
    if (!field || field->empty()) continue;
    if (!joined.empty()) joined.push_back(' ');
    joined.append(*field);
  }
  if (joined.find_first_not_of(" \t\r\n") == std::string::npos)
    throw InvalidArgument("bug report has no text");
  return preprocess_text(joined);
}

std::string answer_url(PostId answer_id) {
  return "https://stackoverflow.com/a/" + std::to_string(answer_id);
}

std::string RankedSolutionList::results_json() const {
  ordered_json results = ordered_json::array();
  for (const auto& r : items)
    results.push_back({{"answer_id", r.answer_id},
                       {"question_id", r.question_id},
                       {"question_title", r.question_title},
                       {"score", r.model_score},
                       {"votes", r.vote_score},
                       {"url", r.url}});
  return results.dump();
}

std::string RankedSolutionList::to_json() const {
  ordered_json j;
  j["query"] = query;
  j["status"] = status == RecommendStatus::Ok ? "ok" : "no_match";
  j["results"] = ordered_json::parse(results_json());
  return j.dump(2);
}

Engine::Engine(StoreReader store, QuestionIndex index, Checkpoint model, EngineOptions options)
    : store_(std::move(store)), index_(std::move(index)), model_(std::move(model)),
      options_(options) {
  const auto& vocab = index_.vocabulary();
  if (model_.params.vocab_hash != vocab.hash() || model_.params.vocab_size != vocab.size())
    throw IncompatibleError("model was trained against vocabulary " +
                            to_hex(model_.params.vocab_hash) + " but the index has " +
                            to_hex(vocab.hash()));
}

Engine Engine::open(const std::filesystem::path& store_dir,
                    const std::filesystem::path& index_file,
                    const std::filesystem::path& model_dir, EngineOptions options) {
  StoreReader store(store_dir);
  auto index = QuestionIndex::load(index_file);
  auto model = load_checkpoint(model_dir, index.vocabulary().hash());
  return Engine(std::move(store), std::move(index), std::move(model), options);
}

std::string Engine::version() const { return model_version(model_); }

RankedSolutionList Engine::recommend_text(const std::string& text, std::size_t k) const {
  return recommend(BugReport{std::nullopt, text, std::nullopt}, k);
}

RankedSolutionList Engine::recommend(const BugReport& report, std::size_t k) const {
  RankedSolutionList out;
  for (const auto* field : {report.title ? &*report.title : nullptr, &report.description,
                            report.steps_to_reproduce ? &*report.steps_to_reproduce : nullptr}) {
    if (!field || field->empty()) continue;
    if (!out.query.empty()) out.query.push_back(' ');
    out.query.append(*field);
  }
  const auto query = build_query(report);
  const auto hits = index_.retrieve(index_.vectorize(query), options_.retrieval_breadth);
  if (hits.empty()) return out;

  struct Pending {
    const RawPost* question;
    RawPost answer;
    double similarity;
  };
  std::vector<RawPost> questions;
  std::vector<std::vector<RawPost>> answer_sets;
  questions.reserve(hits.size());
  for (const auto& h : hits) {
    auto [q, answers] = store_.question_with_answers(h.question_id);
    questions.push_back(std::move(q));
    answer_sets.push_back(std::move(answers));
  }
  std::vector<Pending> pending;
  for (std::size_t i = 0; i < hits.size(); ++i)
    for (auto& a : answer_sets[i]) pending.push_back({&questions[i], std::move(a), hits[i].similarity});
  std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    if (a.answer.score != b.answer.score) return a.answer.score > b.answer.score;
    return a.answer.id < b.answer.id;
  });
  if (pending.size() > model_.config.list_size) pending.resize(model_.config.list_size);
  if (pending.empty()) return out;

  const auto& vocab = index_.vocabulary();
  for (const auto& p : pending) {
    const RawUser* owner = p.answer.owner_user_id ? store_.user(*p.answer.owner_user_id) : nullptr;
    const auto features = build_candidate_features(query, p.answer, *p.question, owner,
                                                   p.similarity, vocab, model_.config.limits);
    Recommendation r;
    r.answer_id = p.answer.id;
    r.question_id = p.question->id;
    r.question_title = p.question->title.value_or("");
    r.model_score = score(model_.params, features);
    r.vote_score = p.answer.score;
    r.retrieval_similarity = p.similarity;
    r.url = answer_url(r.answer_id);
    out.items.push_back(std::move(r));
  }
  std::sort(out.items.begin(), out.items.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.model_score != b.model_score) return a.model_score > b.model_score;
    if (a.vote_score != b.vote_score) return a.vote_score > b.vote_score;
    return a.answer_id < b.answer_id;
  });
  if (out.items.size() > k) out.items.resize(k);
  out.status = RecommendStatus::Ok;
  return out;
}

}  // namespace bugrank
