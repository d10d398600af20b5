#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "bugrank/timestamp.hpp"

namespace bugrank {

using PostId = std::int64_t;
using UserId = std::int64_t;

enum class PostType : int { Question = 1, Answer = 2 };

/// One row of Posts.xml restricted to the attributes the pipeline uses.
struct RawPost {
  PostId id = 0;
  PostType post_type = PostType::Question;
  std::optional<PostId> accepted_answer_id;
  std::optional<PostId> parent_id;
  Timestamp creation_date{};
  std::int64_t score = 0;
  std::optional<std::int64_t> view_count;
  std::string body;
  std::optional<UserId> owner_user_id;
  std::optional<std::string> title;
  std::optional<std::string> tags;
  std::optional<std::int64_t> answer_count;
  std::optional<std::int64_t> comment_count;
  std::optional<std::int64_t> favorite_count;

  bool is_question() const noexcept { return post_type == PostType::Question; }
  bool is_answer() const noexcept { return post_type == PostType::Answer; }
  friend bool operator==(const RawPost&, const RawPost&) = default;
};

struct RawUser {
  UserId id = 0;
  std::int64_t reputation = 0;
  std::string display_name;
  Timestamp creation_date{};
  friend bool operator==(const RawUser&, const RawUser&) = default;
};

struct RawComment {
  std::int64_t id = 0;
  PostId post_id = 0;
  std::int64_t score = 0;
  std::string text;
  std::optional<UserId> user_id;
  friend bool operator==(const RawComment&, const RawComment&) = default;
};

enum class RowKind { Posts, Users, Comments };

using Record = std::variant<RawPost, RawUser, RawComment>;

}  // namespace bugrank
