#include "bugrank/store.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "bugrank/error.hpp"

namespace bugrank {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kPosts = "posts.jsonl";
constexpr const char* kUsers = "users.jsonl";
constexpr const char* kComments = "comments.jsonl";
constexpr const char* kAnswerIndex = "answers.idx";
constexpr const char* kSummary = "store.json";

template <typename T>
void put_opt(ojson& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
void get_opt(const ojson& j, const char* key, std::optional<T>& out) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    out.reset();
  } else {
    out = it->template get<T>();
  }
}

Timestamp get_time(const ojson& j, const char* key) {
  const auto s = j.at(key).get<std::string>();
  const auto t = parse_timestamp(s);
  if (!t) throw DataError("bad timestamp in store: " + s);
  return *t;
}

ojson parse_line(std::string_view line) {
  try {
    return ojson::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed store record: ") + e.what());
  }
}

std::ofstream open_out(const fs::path& p, std::ios::openmode mode) {
  std::ofstream out(p, mode | std::ios::binary);
  if (!out) throw IoError(p.string(), "cannot open for writing");
  return out;
}

}  // namespace

std::string to_json_line(const RawPost& p) {
  ojson j;
  j["id"] = p.id;
  j["post_type"] = static_cast<int>(p.post_type);
  put_opt(j, "accepted_answer_id", p.accepted_answer_id);
  put_opt(j, "parent_id", p.parent_id);
  j["creation_date"] = format_timestamp(p.creation_date);
  j["score"] = p.score;
  put_opt(j, "view_count", p.view_count);
  j["body"] = p.body;
  put_opt(j, "owner_user_id", p.owner_user_id);
  put_opt(j, "title", p.title);
  put_opt(j, "tags", p.tags);
  put_opt(j, "answer_count", p.answer_count);
  put_opt(j, "comment_count", p.comment_count);
  put_opt(j, "favorite_count", p.favorite_count);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string to_json_line(const RawUser& u) {
  ojson j;
  j["id"] = u.id;
  j["reputation"] = u.reputation;
  j["display_name"] = u.display_name;
  j["creation_date"] = format_timestamp(u.creation_date);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string to_json_line(const RawComment& c) {
  ojson j;
  j["id"] = c.id;
  j["post_id"] = c.post_id;
  j["score"] = c.score;
  j["text"] = c.text;
  put_opt(j, "user_id", c.user_id);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

RawPost post_from_json_line(std::string_view line) {
  const auto j = parse_line(line);
  RawPost p;
  try {
    p.id = j.at("id").get<PostId>();
    const int type = j.at("post_type").get<int>();
    if (type != 1 && type != 2) throw DataError("bad post_type in store");
    p.post_type = static_cast<PostType>(type);
    get_opt(j, "accepted_answer_id", p.accepted_answer_id);
    get_opt(j, "parent_id", p.parent_id);
    p.creation_date = get_time(j, "creation_date");
    p.score = j.at("score").get<std::int64_t>();
    get_opt(j, "view_count", p.view_count);
    p.body = j.at("body").get<std::string>();
    get_opt(j, "owner_user_id", p.owner_user_id);
    get_opt(j, "title", p.title);
    get_opt(j, "tags", p.tags);
    get_opt(j, "answer_count", p.answer_count);
    get_opt(j, "comment_count", p.comment_count);
    get_opt(j, "favorite_count", p.favorite_count);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed post record: ") + e.what());
  }
  return p;
}

RawUser user_from_json_line(std::string_view line) {
  const auto j = parse_line(line);
  RawUser u;
  try {
    u.id = j.at("id").get<UserId>();
    u.reputation = j.at("reputation").get<std::int64_t>();
    u.display_name = j.at("display_name").get<std::string>();
    u.creation_date = get_time(j, "creation_date");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed user record: ") + e.what());
  }
  return u;
}

RawComment comment_from_json_line(std::string_view line) {
  const auto j = parse_line(line);
  RawComment c;
  try {
    c.id = j.at("id").get<std::int64_t>();
    c.post_id = j.at("post_id").get<PostId>();
    c.score = j.at("score").get<std::int64_t>();
    c.text = j.at("text").get<std::string>();
    get_opt(j, "user_id", c.user_id);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed comment record: ") + e.what());
  }
  return c;
}

StoreWriter::StoreWriter(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError(dir_.string(), ec.message());
  posts_ = open_out(dir_ / kPosts, std::ios::trunc);
  users_ = open_out(dir_ / kUsers, std::ios::trunc);
  comments_ = open_out(dir_ / kComments, std::ios::trunc);
}

void StoreWriter::append(const Record& r) {
  std::visit(
      [this](const auto& rec) {
        using T = std::decay_t<decltype(rec)>;
        std::ofstream* out = &comments_;
        if constexpr (std::is_same_v<T, RawPost>) out = &posts_;
        if constexpr (std::is_same_v<T, RawUser>) out = &users_;
        *out << to_json_line(rec) << '\n';
        if (!*out) throw IoError(dir_.string(), "write failure");
      },
      r);
}

StoreSummary StoreWriter::finish() {
  posts_.close();
  users_.close();
  comments_.close();
  if (posts_.fail() || users_.fail() || comments_.fail())
    throw IoError(dir_.string(), "flush failure");
  return rebuild_store_index(dir_);
}

std::size_t write_store(std::span<const Record> records, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());
  auto posts = open_out(dir / kPosts, std::ios::app);
  auto users = open_out(dir / kUsers, std::ios::app);
  auto comments = open_out(dir / kComments, std::ios::app);
  for (const auto& r : records) {
    std::visit(
        [&](const auto& rec) {
          using T = std::decay_t<decltype(rec)>;
          std::ofstream* out = &comments;
          if constexpr (std::is_same_v<T, RawPost>) out = &posts;
          if constexpr (std::is_same_v<T, RawUser>) out = &users;
          *out << to_json_line(rec) << '\n';
        },
        r);
  }
  posts.close();
  users.close();
  comments.close();
  if (posts.fail() || users.fail() || comments.fail())
    throw IoError(dir.string(), "write failure");
  rebuild_store_index(dir);
  return records.size();
}

namespace {

std::uint64_t count_lines(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return 0;
  std::uint64_t n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

std::string summary_json(const StoreSummary& s) {
  ojson j;
  j["posts"] = s.posts;
  j["questions"] = s.questions;
  j["answers"] = s.answers;
  j["orphan_answers"] = s.orphan_answers;
  j["users"] = s.users;
  j["comments"] = s.comments;
  return j.dump(2) + "\n";
}

}  // namespace

StoreSummary rebuild_store_index(const fs::path& dir) {
  // Only ids, offsets and parents are kept in memory, never bodies.
  struct AnswerRef {
    PostId id;
    PostId parent;
    std::int64_t score;
    std::uint64_t offset;
  };
  std::vector<std::pair<PostId, std::uint64_t>> questions;
  std::vector<AnswerRef> answers;
  {
    std::ifstream in(dir / kPosts, std::ios::binary);
    if (!in) throw IoError((dir / kPosts).string(), "cannot open");
    std::string line;
    std::uint64_t offset = 0;
    while (std::getline(in, line)) {
      const std::uint64_t here = offset;
      offset += line.size() + 1;
      if (line.empty()) continue;
      const auto p = post_from_json_line(line);
      if (p.is_question())
        questions.emplace_back(p.id, here);
      else
        answers.push_back({p.id, *p.parent_id, p.score, here});
    }
  }
  std::unordered_map<PostId, std::size_t> qslot;
  for (std::size_t i = 0; i < questions.size(); ++i) qslot.emplace(questions[i].first, i);
  std::vector<std::vector<const AnswerRef*>> by_question(questions.size());
  StoreSummary s;
  s.posts = questions.size() + answers.size();
  s.questions = questions.size();
  s.answers = answers.size();
  for (const auto& a : answers) {
    const auto it = qslot.find(a.parent);
    if (it == qslot.end()) {
      ++s.orphan_answers;
    } else {
      by_question[it->second].push_back(&a);
    }
  }
  auto idx = open_out(dir / kAnswerIndex, std::ios::trunc);
  for (std::size_t i = 0; i < questions.size(); ++i) {
    auto& list = by_question[i];
    std::sort(list.begin(), list.end(), [](const AnswerRef* x, const AnswerRef* y) {
      return x->score != y->score ? x->score > y->score : x->id < y->id;
    });
    idx << "Q\t" << questions[i].first << '\t' << questions[i].second << '\t';
    for (std::size_t k = 0; k < list.size(); ++k) idx << (k ? "," : "") << list[k]->offset;
    idx << '\n';
  }
  for (const auto& a : answers)
    idx << "A\t" << a.id << '\t' << a.offset << '\t' << a.parent << '\n';
  idx.close();
  if (idx.fail()) throw IoError((dir / kAnswerIndex).string(), "write failure");

  s.users = count_lines(dir / kUsers);
  s.comments = count_lines(dir / kComments);
  auto sum = open_out(dir / kSummary, std::ios::trunc);
  sum << summary_json(s);
  return s;
}

StoreReader::StoreReader(fs::path dir) : dir_(std::move(dir)) {
  if (!fs::exists(dir_ / kPosts)) throw IoError((dir_ / kPosts).string(), "missing store file");
  std::ifstream idx(dir_ / kAnswerIndex, std::ios::binary);
  if (!idx) throw IoError((dir_ / kAnswerIndex).string(), "missing answer index");
  std::string line;
  while (std::getline(idx, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    std::getline(ss, tag, '\t');
    if (tag == "Q") {
      PostId id;
      QuestionEntry e;
      ss >> id >> e.offset;
      std::string offs;
      if (ss.get() == '\t' && std::getline(ss, offs)) {
        std::istringstream os(offs);
        std::string item;
        while (std::getline(os, item, ','))
          if (!item.empty()) e.answer_offsets.push_back(std::stoull(item));
      }
      if (ss.fail() && !ss.eof()) throw CorruptionError("bad answer index line: " + line);
      question_order_.push_back(id);
      questions_.emplace(id, std::move(e));
      ++summary_.questions;
    } else if (tag == "A") {
      PostId id, parent;
      std::uint64_t off;
      if (!(ss >> id >> off >> parent)) throw CorruptionError("bad answer index line: " + line);
      answers_.emplace(id, off);
      ++summary_.answers;
      if (!questions_.contains(parent)) ++summary_.orphan_answers;
    } else {
      throw CorruptionError("bad answer index line: " + line);
    }
  }
  summary_.posts = summary_.questions + summary_.answers;
  for (auto& u : scan_users()) {
    const auto id = u.id;
    users_.emplace(id, std::move(u));
  }
  summary_.users = users_.size();
  summary_.comments = count_lines(dir_ / kComments);
}

void StoreReader::for_each_post(const std::function<void(RawPost&&)>& fn) const {
  std::ifstream in(dir_ / kPosts, std::ios::binary);
  if (!in) throw IoError((dir_ / kPosts).string(), "cannot open");
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) fn(post_from_json_line(line));
}

std::vector<RawPost> StoreReader::scan_posts() const {
  std::vector<RawPost> out;
  for_each_post([&](RawPost&& p) { out.push_back(std::move(p)); });
  return out;
}

namespace {

template <typename T, typename Fn>
std::vector<T> scan_file(const fs::path& p, Fn decode) {
  std::vector<T> out;
  std::ifstream in(p, std::ios::binary);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(decode(line));
  return out;
}

}  // namespace

std::vector<RawUser> StoreReader::scan_users() const {
  return scan_file<RawUser>(dir_ / kUsers, user_from_json_line);
}

std::vector<RawComment> StoreReader::scan_comments() const {
  return scan_file<RawComment>(dir_ / kComments, comment_from_json_line);
}

std::size_t StoreReader::answer_count(PostId question_id) const {
  const auto it = questions_.find(question_id);
  return it == questions_.end() ? 0 : it->second.answer_offsets.size();
}

RawPost StoreReader::read_post_at(std::ifstream& in, std::uint64_t offset) const {
  in.clear();
  in.seekg(static_cast<std::streamoff>(offset));
  std::string line;
  if (!std::getline(in, line)) throw CorruptionError("answer index points past end of posts file");
  return post_from_json_line(line);
}

RawPost StoreReader::post(PostId id) const {
  std::uint64_t offset;
  if (const auto q = questions_.find(id); q != questions_.end()) {
    offset = q->second.offset;
  } else if (const auto a = answers_.find(id); a != answers_.end()) {
    offset = a->second;
  } else {
    throw NotFoundError("no post with id " + std::to_string(id));
  }
  std::ifstream in(dir_ / kPosts, std::ios::binary);
  if (!in) throw IoError((dir_ / kPosts).string(), "cannot open");
  return read_post_at(in, offset);
}

std::pair<RawPost, std::vector<RawPost>> StoreReader::question_with_answers(
    PostId question_id) const {
  const auto it = questions_.find(question_id);
  if (it == questions_.end()) {
    if (answers_.contains(question_id))
      throw WrongKindError("post " + std::to_string(question_id) + " is an answer");
    throw NotFoundError("no question with id " + std::to_string(question_id));
  }
  std::ifstream in(dir_ / kPosts, std::ios::binary);
  if (!in) throw IoError((dir_ / kPosts).string(), "cannot open");
  auto question = read_post_at(in, it->second.offset);
  std::vector<RawPost> answers;
  answers.reserve(it->second.answer_offsets.size());
  for (const auto off : it->second.answer_offsets) answers.push_back(read_post_at(in, off));
  return {std::move(question), std::move(answers)};
}

const RawUser* StoreReader::user(UserId id) const {
  const auto it = users_.find(id);
  return it == users_.end() ? nullptr : &it->second;
}

}  // namespace bugrank
