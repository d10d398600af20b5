#include "bugrank/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>

namespace bugrank {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_block_tag(std::string_view name) {
  static constexpr std::array<std::string_view, 19> kBlock = {
      "p", "div", "br", "li", "ul", "ol", "pre", "blockquote", "hr", "table",
      "tr", "h1", "h2", "h3", "h4", "h5", "h6", "dd", "dt"};
  return std::find(kBlock.begin(), kBlock.end(), name) != kBlock.end();
}

struct Tag {
  std::string name;
  bool closing = false;
};

// `inner` is the text between '<' and '>'.
Tag parse_tag(std::string_view inner) {
  Tag t;
  std::size_t i = 0;
  while (i < inner.size() && std::isspace(static_cast<unsigned char>(inner[i]))) ++i;
  if (i < inner.size() && inner[i] == '/') {
    t.closing = true;
    ++i;
  }
  while (i < inner.size() && std::isalnum(static_cast<unsigned char>(inner[i])))
    t.name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(inner[i++]))));
  return t;
}

class Splitter {
 public:
  explicit Splitter(StrippedBody& out) : out_(out) {}

  void characters(std::string_view s) {
    if (in_code_) {
      code_buf_.append(s);
    } else if (in_pre_) {
      if (!pre_has_code_) pre_buf_.append(s);
    } else {
      text_.append(s);
    }
  }

  void tag(const Tag& t) {
    if (t.name == "code") {
      if (!t.closing && !in_code_) {
        in_code_ = true;
        code_buf_.clear();
        ++out_.code_tag_count;
        if (in_pre_) pre_has_code_ = true;
      } else if (t.closing && in_code_) {
        flush_code();
      }
      return;
    }
    if (in_code_) return;  // markup inside code is dropped
    if (t.name == "pre") {
      if (!t.closing && !in_pre_) {
        in_pre_ = true;
        pre_has_code_ = false;
        pre_buf_.clear();
      } else if (t.closing && in_pre_) {
        flush_pre();
      }
    }
    if (t.name == "p" && !t.closing) ++out_.p_tag_count;
    if (is_block_tag(t.name) && !text_.empty() && text_.back() != '\n') text_.push_back('\n');
  }

  void finish() {
    if (in_code_) flush_code();
    if (in_pre_) flush_pre();
    out_.text = decode_entities(text_);
    while (!out_.text.empty() && out_.text.back() == '\n') out_.text.pop_back();
  }

 private:
  void flush_code() {
    out_.code_blocks.push_back(decode_entities(code_buf_));
    code_buf_.clear();
    in_code_ = false;
  }
  void flush_pre() {
    if (!pre_has_code_) {
      ++out_.code_tag_count;
      out_.code_blocks.push_back(decode_entities(pre_buf_));
    }
    pre_buf_.clear();
    in_pre_ = false;
    pre_has_code_ = false;
  }

  StrippedBody& out_;
  std::string text_;
  std::string code_buf_;
  std::string pre_buf_;
  bool in_code_ = false;
  bool in_pre_ = false;
  bool pre_has_code_ = false;
};

}  // namespace

std::size_t utf8_length(std::string_view s) noexcept {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    const auto name = s.substr(i + 1, semi - i - 1);
    bool ok = true;
    if (name == "amp") out.push_back('&');
    else if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (name.size() > 1 && name[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const auto digits = name.substr(hex ? 2 : 1);
      const auto [ptr, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      ok = !digits.empty() && ec == std::errc{} && ptr == digits.data() + digits.size() &&
           cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
      if (ok) append_utf8(out, cp);
    } else {
      ok = false;
    }
    if (ok) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

StrippedBody strip_html(std::string_view html) {
  StrippedBody out;
  out.raw_char_count = utf8_length(html);
  Splitter split(out);
  std::size_t i = 0;
  while (i < html.size()) {
    const auto lt = html.find('<', i);
    if (lt == std::string_view::npos) {
      split.characters(html.substr(i));
      break;
    }
    split.characters(html.substr(i, lt - i));
    if (html.compare(lt, 4, "<!--") == 0) {
      const auto end = html.find("-->", lt + 4);
      if (end == std::string_view::npos) {
        split.characters(html.substr(lt));
        break;
      }
      i = end + 3;
      continue;
    }
    const auto gt = html.find('>', lt + 1);
    if (gt == std::string_view::npos) {
      split.characters(html.substr(lt));
      break;
    }
    const auto inner = html.substr(lt + 1, gt - lt - 1);
    // "a < b" in prose is not a tag.
    if (inner.empty() || !(std::isalpha(static_cast<unsigned char>(inner[0])) || inner[0] == '/' ||
                           inner[0] == '!')) {
      split.characters(html.substr(lt, 1));
      i = lt + 1;
      continue;
    }
    split.tag(parse_tag(inner));
    i = gt + 1;
  }
  split.finish();
  return out;
}

}  // namespace bugrank
