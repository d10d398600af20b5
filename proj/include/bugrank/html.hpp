#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bugrank {

/// A post body split into prose and code.
struct StrippedBody {
  std::string text;                     ///< character data outside code regions, tags removed
  std::vector<std::string> code_blocks; ///< inner text of each code region, document order
  std::size_t p_tag_count = 0;
  std::size_t code_tag_count = 0;       ///< <code> regions plus bare <pre> regions
  std::size_t raw_char_count = 0;       ///< code points in the original HTML
};

/// Best-effort HTML splitter. Never throws; an unterminated tag turns the
/// rest of the input into text.
StrippedBody strip_html(std::string_view html);

/// Decodes the five XML entities and numeric character references. Unknown
/// entities are left as written.
std::string decode_entities(std::string_view s);

/// Number of UTF-8 code points, counted as bytes that are not continuation bytes.
std::size_t utf8_length(std::string_view s) noexcept;

}  // namespace bugrank
