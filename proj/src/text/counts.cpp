#include <cctype>

#include "bugrank/html.hpp"
#include "bugrank/text.hpp"

namespace bugrank {

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_vowel(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
    default: return false;
  }
}

}  // namespace

std::size_t count_sentences(std::string_view text) {
  if (text.empty()) return 0;
  std::size_t n = 0;
  bool content = false;
  for (const char c : text) {
    if (is_terminator(c)) {
      if (content) ++n;
      content = false;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      content = true;
    }
  }
  if (content) ++n;
  return n == 0 ? 1 : n;
}

std::size_t count_syllables(std::string_view word) {
  std::size_t groups = 0;
  bool prev_vowel = false;
  for (const char c : word) {
    const bool v = is_vowel(c);
    if (v && !prev_vowel) ++groups;
    prev_vowel = v;
  }
  if (word.size() >= 2 && std::tolower(static_cast<unsigned char>(word.back())) == 'e') {
    const char before = word[word.size() - 2];
    if (std::isalpha(static_cast<unsigned char>(before)) && !is_vowel(before) && groups > 0)
      --groups;
  }
  return groups == 0 ? 1 : groups;
}

TextCounts count_text(std::string_view text) {
  TextCounts c;
  for (std::size_t i = 0; i < text.size();) {
    const auto b = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (b >= 0xF0) len = 4;
    else if (b >= 0xE0) len = 3;
    else if (b >= 0xC0) len = 2;
    if (b < 0x80) {
      if (std::isalnum(b)) ++c.characters;
    } else {
      std::uint32_t cp = 0x10000;  // 4-byte sequences count as characters
      if (len == 2 && i + 1 < text.size()) cp = ((b & 0x1F) << 6) | (text[i + 1] & 0x3F);
      else if (len == 3 && i + 2 < text.size())
        cp = ((b & 0x0F) << 12) | ((text[i + 1] & 0x3F) << 6) | (text[i + 2] & 0x3F);
      if (!is_separator_codepoint(cp)) ++c.characters;
    }
    if (b == '.' || b == '!' || b == '?') ++c.periods;
    i += len;
  }
  const auto words = tokenize(text);
  c.words = words.size();
  for (const auto& w : words.tokens) {
    const auto syl = count_syllables(w);
    c.syllables += syl;
    if (syl >= 3) ++c.complex_words;
    if (utf8_length(w) > 6) ++c.long_words;
  }
  c.sentences = count_sentences(text);
  if (!text.empty() && c.periods == 0) c.periods = 1;
  return c;
}

}  // namespace bugrank
