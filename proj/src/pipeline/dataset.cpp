#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bugrank/checkpoint.hpp"
#include "bugrank/dataset.hpp"
#include "bugrank/error.hpp"
#include "bugrank/pipeline.hpp"
#include "bugrank/split.hpp"

namespace bugrank {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Questions without an owner each form their own group.
std::int64_t group_key(const RawPost& q) {
  return q.owner_user_id ? *q.owner_user_id : -(std::int64_t{1} << 40) - q.id;
}

ordered_json config_json(const DatasetConfig& c) {
  return {{"test_fraction", c.test_fraction},
          {"seed", c.seed},
          {"list_size", c.list_size},
          {"query_tokens", c.limits.query_tokens},
          {"answer_tokens", c.limits.answer_tokens}};
}

std::uint64_t parse_hex(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 16);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw CorruptionError("malformed hex value '" + s + "'");
}

}  // namespace

std::string DatasetManifest::to_json() const {
  ordered_json j;
  j["format"] = "bugrank-dataset";
  j["queries"] = {{"train", queries_train},
                  {"test", queries_test},
                  {"total", queries_train + queries_test}};
  j["answers"] = {{"train", answers_train},
                  {"test", answers_test},
                  {"total", answers_train + answers_test}};
  j["vocabulary_size"] = vocabulary_size;
  j["vocabulary_hash"] = to_hex(vocabulary_hash);
  j["questions_without_answers"] = questions_without_answers;
  j["config"] = config_json(config);
  return j.dump(2);
}

DatasetManifest DatasetManifest::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "bugrank-dataset") throw CorruptionError("not a dataset manifest");
    DatasetManifest m;
    m.queries_train = j.at("queries").at("train").get<std::uint64_t>();
    m.queries_test = j.at("queries").at("test").get<std::uint64_t>();
    m.answers_train = j.at("answers").at("train").get<std::uint64_t>();
    m.answers_test = j.at("answers").at("test").get<std::uint64_t>();
    m.vocabulary_size = j.at("vocabulary_size").get<std::uint64_t>();
    m.vocabulary_hash = parse_hex(j.at("vocabulary_hash").get<std::string>());
    m.questions_without_answers = j.at("questions_without_answers").get<std::uint64_t>();
    const auto& c = j.at("config");
    m.config.test_fraction = c.at("test_fraction").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.list_size = c.at("list_size").get<std::size_t>();
    m.config.limits.query_tokens = c.at("query_tokens").get<std::size_t>();
    m.config.limits.answer_tokens = c.at("answer_tokens").get<std::size_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError(std::string("dataset manifest: ") + e.what());
  }
}

Dataset assemble_training_set(const StoreReader& store, const QuestionIndex& index,
                              const DatasetConfig& config) {
  if (config.list_size == 0) throw InvalidArgument("list_size must be positive");
  const auto& vocab = index.vocabulary();
  std::vector<ExampleList> lists;
  std::vector<std::int64_t> groups;
  std::uint64_t without_answers = 0;

  for (const auto qid : store.question_ids()) {
    auto [question, answers] = store.question_with_answers(qid);
    if (answers.empty()) {
      ++without_answers;
      continue;
    }
    const auto query = question_tokens(question);
    std::vector<std::int64_t> votes;
    for (const auto& a : answers) votes.push_back(a.score);
    const auto grades = grade_answers(votes);

    ExampleList list;
    list.query_id = qid;
    for (std::size_t i = 0; i < answers.size(); ++i) {
      const auto& a = answers[i];
      const RawUser* owner = a.owner_user_id ? store.user(*a.owner_user_id) : nullptr;
      auto c = build_candidate_features(query, a, question, owner, 1.0, vocab, config.limits);
      c.label = grades[i];
      list.candidates.push_back(std::move(c));
    }
    lists.push_back(fit_list(std::move(list), config.list_size, config.limits));
    groups.push_back(group_key(question));
  }
  if (lists.empty()) throw DataError("the store has no question with an answer");

  Dataset ds;
  ds.manifest.config = config;
  ds.manifest.vocabulary_size = vocab.size();
  ds.manifest.vocabulary_hash = vocab.hash();
  ds.manifest.questions_without_answers = without_answers;
  const auto split = group_shuffle_split(groups, config.test_fraction, config.seed);
  for (const auto i : split.train) {
    ds.manifest.answers_train += lists[i].real_count();
    ds.train.push_back(std::move(lists[i]));
    ds.train_groups.push_back(groups[i]);
  }
  for (const auto i : split.test) {
    ds.manifest.answers_test += lists[i].real_count();
    ds.test.push_back(std::move(lists[i]));
    ds.test_groups.push_back(groups[i]);
  }
  ds.manifest.queries_train = ds.train.size();
  ds.manifest.queries_test = ds.test.size();
  return ds;
}

std::string to_json_line(const ExampleList& list, std::int64_t group) {
  ordered_json cands = ordered_json::array();
  for (const auto& c : list.candidates) {
    if (c.is_pad()) continue;
    cands.push_back({{"answer_id", c.answer_id},
                     {"label", c.label},
                     {"query_tokens", c.query_token_ids},
                     {"answer_tokens", c.answer_token_ids},
                     {"dense", c.dense}});
  }
  return ordered_json{{"query_id", list.query_id}, {"group", group}, {"candidates", cands}}.dump();
}

ExampleList example_list_from_json(std::string_view line, std::int64_t* group) {
  try {
    const auto j = nlohmann::json::parse(line);
    ExampleList list;
    list.query_id = j.at("query_id").get<PostId>();
    if (group) *group = j.at("group").get<std::int64_t>();
    for (const auto& c : j.at("candidates")) {
      CandidateFeatures f;
      f.answer_id = c.at("answer_id").get<PostId>();
      f.label = c.at("label").get<int>();
      f.query_token_ids = c.at("query_tokens").get<std::vector<std::int32_t>>();
      f.answer_token_ids = c.at("answer_tokens").get<std::vector<std::int32_t>>();
      f.dense = c.at("dense").get<std::vector<double>>();
      if (f.dense.size() != kDenseDim)
        throw CorruptionError("candidate " + std::to_string(f.answer_id) + " has " +
                              std::to_string(f.dense.size()) + " dense features");
      list.candidates.push_back(std::move(f));
    }
    return list;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError(std::string("dataset line: ") + e.what());
  }
}

void save_dataset(const Dataset& ds, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());
  const auto write = [&](const fs::path& p, const std::vector<ExampleList>& lists,
                         const std::vector<std::int64_t>& groups) {
    std::ofstream out(p, std::ios::trunc);
    for (std::size_t i = 0; i < lists.size(); ++i)
      out << to_json_line(lists[i], i < groups.size() ? groups[i] : 0) << '\n';
    if (!out) throw IoError(p.string(), "write failed");
  };
  write(dir / "train.jsonl", ds.train, ds.train_groups);
  write(dir / "test.jsonl", ds.test, ds.test_groups);
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  out << ds.manifest.to_json() << '\n';
  if (!out) throw IoError((dir / "manifest.json").string(), "write failed");
}

Dataset load_dataset(const fs::path& dir) {
  const auto read_text = [](const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw IoError(p.string(), "cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  Dataset ds;
  ds.manifest = DatasetManifest::from_json(read_text(dir / "manifest.json"));
  const auto read = [&](const fs::path& p, std::vector<ExampleList>& lists,
                        std::vector<std::int64_t>& groups) {
    std::ifstream in(p);
    if (!in) throw IoError(p.string(), "cannot open");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::int64_t g = 0;
      lists.push_back(fit_list(example_list_from_json(line, &g), ds.manifest.config.list_size,
                               ds.manifest.config.limits));
      groups.push_back(g);
    }
  };
  read(dir / "train.jsonl", ds.train, ds.train_groups);
  read(dir / "test.jsonl", ds.test, ds.test_groups);
  if (ds.train.size() != ds.manifest.queries_train || ds.test.size() != ds.manifest.queries_test)
    throw CorruptionError(dir.string() + ": list counts disagree with manifest.json");
  return ds;
}

}  // namespace bugrank
