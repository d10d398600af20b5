#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <vector>

#include "bugrank/records.hpp"

namespace bugrank {

/// Tallies of rows that did not become records.
struct ParseStats {
  std::uint64_t rows = 0;              ///< <row> elements seen
  std::uint64_t emitted = 0;           ///< records handed to the sink
  std::uint64_t skipped_missing = 0;   ///< mandatory attribute absent or not an integer
  std::uint64_t skipped_post_type = 0; ///< PostTypeId not in {1, 2}
  std::uint64_t skipped_invalid = 0;   ///< violates a record invariant (e.g. answer without ParentId)

  std::uint64_t skipped() const noexcept {
    return skipped_missing + skipped_post_type + skipped_invalid;
  }
};

using RecordSink = std::function<void(Record&&)>;

/// Streams `<root><row .../>...</root>` from `in` and hands each decoded row
/// to `sink`. Memory is bounded by the largest single row. Throws ParseError
/// (with byte offset) on malformed XML.
ParseStats parse_rows(RowKind kind, std::istream& in, const RecordSink& sink);

/// Convenience wrappers that collect everything.
std::vector<RawPost> parse_posts(std::istream& in, ParseStats* stats = nullptr);
std::vector<RawUser> parse_users(std::istream& in, ParseStats* stats = nullptr);
std::vector<RawComment> parse_comments(std::istream& in, ParseStats* stats = nullptr);

}  // namespace bugrank
