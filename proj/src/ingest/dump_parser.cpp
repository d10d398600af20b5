#include "bugrank/dump_parser.hpp"

#include <expat.h>

#include <charconv>
#include <cstring>
#include <exception>
#include <memory>
#include <optional>
#include <string_view>

#include "bugrank/error.hpp"

namespace bugrank {

namespace {

constexpr std::size_t kChunkSize = 1 << 16;

enum class Outcome { Ok, Missing, BadPostType, Invalid };

struct Attrs {
  const XML_Char** raw;

  std::optional<std::string_view> get(const char* name) const {
    for (const XML_Char** a = raw; *a != nullptr; a += 2)
      if (std::strcmp(a[0], name) == 0) return std::string_view(a[1]);
    return std::nullopt;
  }
};

// Returns false when the attribute exists but is not an integer.
bool read_int(const Attrs& attrs, const char* name, std::optional<std::int64_t>& out) {
  out.reset();
  const auto v = attrs.get(name);
  if (!v) return true;
  std::int64_t x = 0;
  const auto* end = v->data() + v->size();
  const auto [ptr, ec] = std::from_chars(v->data(), end, x);
  if (ec != std::errc{} || ptr != end) return false;
  out = x;
  return true;
}

bool read_time(const Attrs& attrs, const char* name, Timestamp& out) {
  const auto v = attrs.get(name);
  if (!v) return true;
  const auto t = parse_timestamp(*v);
  if (!t) return false;
  out = *t;
  return true;
}

std::optional<std::string> read_string(const Attrs& attrs, const char* name) {
  const auto v = attrs.get(name);
  if (!v) return std::nullopt;
  return std::string(*v);
}

Outcome decode_post(const Attrs& attrs, RawPost& p) {
  std::optional<std::int64_t> id, type;
  if (!read_int(attrs, "Id", id) || !read_int(attrs, "PostTypeId", type) || !id || !type)
    return Outcome::Missing;
  if (*type != 1 && *type != 2) return Outcome::BadPostType;
  p.id = *id;
  p.post_type = static_cast<PostType>(*type);
  std::optional<std::int64_t> score;
  if (!read_int(attrs, "AcceptedAnswerId", p.accepted_answer_id) ||
      !read_int(attrs, "ParentId", p.parent_id) || !read_int(attrs, "Score", score) ||
      !read_int(attrs, "ViewCount", p.view_count) ||
      !read_int(attrs, "OwnerUserId", p.owner_user_id) ||
      !read_int(attrs, "AnswerCount", p.answer_count) ||
      !read_int(attrs, "CommentCount", p.comment_count) ||
      !read_int(attrs, "FavoriteCount", p.favorite_count) ||
      !read_time(attrs, "CreationDate", p.creation_date))
    return Outcome::Invalid;
  p.score = score.value_or(0);
  p.body = read_string(attrs, "Body").value_or(std::string{});
  p.title = read_string(attrs, "Title");
  p.tags = read_string(attrs, "Tags");
  if (p.is_answer() && (!p.parent_id || p.title)) return Outcome::Invalid;
  if (p.is_question() && p.parent_id) return Outcome::Invalid;
  return Outcome::Ok;
}

Outcome decode_user(const Attrs& attrs, RawUser& u) {
  std::optional<std::int64_t> id, rep;
  if (!read_int(attrs, "Id", id) || !id) return Outcome::Missing;
  if (!read_int(attrs, "Reputation", rep) || !read_time(attrs, "CreationDate", u.creation_date))
    return Outcome::Invalid;
  if (rep.value_or(0) < 0) return Outcome::Invalid;
  u.id = *id;
  u.reputation = rep.value_or(0);
  u.display_name = read_string(attrs, "DisplayName").value_or(std::string{});
  return Outcome::Ok;
}

Outcome decode_comment(const Attrs& attrs, RawComment& c) {
  std::optional<std::int64_t> id, post, score;
  if (!read_int(attrs, "Id", id) || !read_int(attrs, "PostId", post) || !id || !post)
    return Outcome::Missing;
  if (!read_int(attrs, "Score", score) || !read_int(attrs, "UserId", c.user_id))
    return Outcome::Invalid;
  c.id = *id;
  c.post_id = *post;
  c.score = score.value_or(0);
  c.text = read_string(attrs, "Text").value_or(std::string{});
  return Outcome::Ok;
}

struct ParserState {
  RowKind kind;
  const RecordSink* sink;
  ParseStats stats;
  int depth = 0;
  std::exception_ptr failure;
  XML_Parser parser = nullptr;
};

void on_start(void* user, const XML_Char* name, const XML_Char** atts) {
  auto& st = *static_cast<ParserState*>(user);
  ++st.depth;
  if (st.depth != 2 || std::strcmp(name, "row") != 0) return;
  ++st.stats.rows;
  const Attrs attrs{atts};
  try {
    Outcome outcome;
    Record rec;
    switch (st.kind) {
      case RowKind::Posts: {
        RawPost p;
        outcome = decode_post(attrs, p);
        rec = std::move(p);
        break;
      }
      case RowKind::Users: {
        RawUser u;
        outcome = decode_user(attrs, u);
        rec = std::move(u);
        break;
      }
      default: {
        RawComment c;
        outcome = decode_comment(attrs, c);
        rec = std::move(c);
        break;
      }
    }
    switch (outcome) {
      case Outcome::Ok:
        ++st.stats.emitted;
        (*st.sink)(std::move(rec));
        break;
      case Outcome::Missing: ++st.stats.skipped_missing; break;
      case Outcome::BadPostType: ++st.stats.skipped_post_type; break;
      case Outcome::Invalid: ++st.stats.skipped_invalid; break;
    }
  } catch (...) {
    // Exceptions must not unwind through expat's C frames.
    st.failure = std::current_exception();
    XML_StopParser(st.parser, XML_FALSE);
  }
}

void on_end(void* user, const XML_Char*) { --static_cast<ParserState*>(user)->depth; }

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

}  // namespace

ParseStats parse_rows(RowKind kind, std::istream& in, const RecordSink& sink) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw Error("cannot allocate XML parser");
  ParserState st{kind, &sink, {}, 0, nullptr, parser.get()};
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);

  bool done = false;
  while (!done) {
    void* buf = XML_GetBuffer(parser.get(), static_cast<int>(kChunkSize));
    if (buf == nullptr) throw Error("XML parser out of memory");
    in.read(static_cast<char*>(buf), static_cast<std::streamsize>(kChunkSize));
    const auto got = in.gcount();
    if (in.bad()) throw IoError("<stream>", "read failure");
    done = got == 0 || in.eof();
    if (XML_ParseBuffer(parser.get(), static_cast<int>(got), done ? XML_TRUE : XML_FALSE) ==
        XML_STATUS_ERROR) {
      if (st.failure) std::rethrow_exception(st.failure);
      throw ParseError(static_cast<std::uint64_t>(XML_GetCurrentByteIndex(parser.get())),
                       XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
  }
  if (st.failure) std::rethrow_exception(st.failure);
  return st.stats;
}

namespace {

template <typename T>
std::vector<T> collect(RowKind kind, std::istream& in, ParseStats* stats) {
  std::vector<T> out;
  const auto s = parse_rows(kind, in, [&](Record&& r) { out.push_back(std::get<T>(std::move(r))); });
  if (stats) *stats = s;
  return out;
}

}  // namespace

std::vector<RawPost> parse_posts(std::istream& in, ParseStats* stats) {
  return collect<RawPost>(RowKind::Posts, in, stats);
}
std::vector<RawUser> parse_users(std::istream& in, ParseStats* stats) {
  return collect<RawUser>(RowKind::Users, in, stats);
}
std::vector<RawComment> parse_comments(std::istream& in, ParseStats* stats) {
  return collect<RawComment>(RowKind::Comments, in, stats);
}

}  // namespace bugrank
