#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "bugrank/error.hpp"
#include "bugrank/text.hpp"
#include "embedded_data.hpp"

namespace bugrank {

namespace {

struct Decoded {
  std::uint32_t cp;
  std::size_t len;
  bool valid;
};

Decoded decode_utf8(std::string_view s, std::size_t i) {
  const auto c0 = static_cast<unsigned char>(s[i]);
  if (c0 < 0x80) return {c0, 1, true};
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if ((c0 & 0xE0) == 0xC0) {
    len = 2;
    cp = c0 & 0x1F;
  } else if ((c0 & 0xF0) == 0xE0) {
    len = 3;
    cp = c0 & 0x0F;
  } else if ((c0 & 0xF8) == 0xF0) {
    len = 4;
    cp = c0 & 0x07;
  } else {
    return {c0, 1, false};
  }
  if (i + len > s.size()) return {c0, 1, false};
  for (std::size_t k = 1; k < len; ++k) {
    const auto c = static_cast<unsigned char>(s[i + k]);
    if ((c & 0xC0) != 0x80) return {c0, 1, false};
    cp = (cp << 6) | (c & 0x3F);
  }
  return {cp, len, true};
}

bool in(std::uint32_t cp, std::uint32_t lo, std::uint32_t hi) { return cp >= lo && cp <= hi; }

}  // namespace

// Whitespace and punctuation, ASCII plus the Latin-1, General Punctuation,
// Supplemental Punctuation, CJK and fullwidth punctuation ranges.
bool is_separator_codepoint(std::uint32_t cp) {
  if (cp < 0x80) {
    const auto c = static_cast<unsigned char>(cp);
    return c <= 0x20 || c == 0x7F || (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  if (in(cp, 0x80, 0xA0)) return true;
  if (in(cp, 0xA1, 0xBF))
    return !(cp == 0xAA || cp == 0xB2 || cp == 0xB3 || cp == 0xB5 || cp == 0xB9 || cp == 0xBA ||
             in(cp, 0xBC, 0xBE));
  if (cp == 0xD7 || cp == 0xF7) return true;
  return cp == 0x1680 || in(cp, 0x2000, 0x206F) || in(cp, 0x2E00, 0x2E7F) ||
         in(cp, 0x3000, 0x3003) || in(cp, 0x3008, 0x3011) || in(cp, 0x3014, 0x301F) ||
         cp == 0xFEFF || in(cp, 0xFF01, 0xFF0F) || in(cp, 0xFF1A, 0xFF20) ||
         in(cp, 0xFF3B, 0xFF40) || in(cp, 0xFF5B, 0xFF65);
}

TokenList tokenize(std::string_view text) {
  TokenList out;
  std::string cur;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto d = decode_utf8(text, i);
    if (d.valid && is_separator_codepoint(d.cp)) {
      if (!cur.empty()) out.tokens.push_back(std::move(cur));
      cur.clear();
    } else if (d.cp < 0x80) {
      const char c = static_cast<char>(d.cp);
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    } else {
      cur.append(text.substr(i, d.len));
    }
    i += d.len;
  }
  if (!cur.empty()) out.tokens.push_back(std::move(cur));
  out.stage = TokenStage::Tokenized;
  return out;
}

namespace {

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> set = [] {
    std::unordered_set<std::string> s;
    const auto data = embedded::stopwords_en();
    std::size_t pos = 0;
    while (pos < data.size()) {
      auto nl = data.find('\n', pos);
      if (nl == std::string_view::npos) nl = data.size();
      auto w = data.substr(pos, nl - pos);
      if (!w.empty() && w.back() == '\r') w.remove_suffix(1);
      if (!w.empty()) s.emplace(w);
      pos = nl + 1;
    }
    return s;
  }();
  return set;
}

}  // namespace

bool is_stopword(std::string_view word) { return stopword_set().contains(std::string(word)); }

std::size_t stopword_count() { return stopword_set().size(); }

TokenList remove_stopwords(const TokenList& tokens) {
  if (tokens.stage != TokenStage::Tokenized)
    throw InvalidArgument("remove_stopwords expects freshly tokenized input");
  TokenList out;
  out.stage = TokenStage::StopwordsRemoved;
  const auto& stop = stopword_set();
  std::copy_if(tokens.tokens.begin(), tokens.tokens.end(), std::back_inserter(out.tokens),
               [&](const std::string& t) { return !stop.contains(t); });
  return out;
}

TokenList stem_tokens(const TokenList& tokens) {
  if (tokens.stage != TokenStage::StopwordsRemoved)
    throw InvalidArgument("stem_tokens expects stopword-filtered input");
  TokenList out;
  out.stage = TokenStage::Stemmed;
  out.tokens.reserve(tokens.size());
  for (const auto& t : tokens.tokens) out.tokens.push_back(porter_stem(t));
  return out;
}

TokenList preprocess_text(std::string_view text) {
  return stem_tokens(remove_stopwords(tokenize(text)));
}

}  // namespace bugrank
