#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bugrank {

/// Which preprocessing stages a token list has been through. Each stage
/// accepts exactly one predecessor, so a text cannot be preprocessed twice.
enum class TokenStage { Tokenized, StopwordsRemoved, Stemmed };

struct TokenList {
  std::vector<std::string> tokens;
  TokenStage stage = TokenStage::Tokenized;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
  friend bool operator==(const TokenList&, const TokenList&) = default;
};

/// Splits on whitespace and punctuation (ASCII and the common Unicode
/// punctuation blocks), lowercases ASCII, drops empty tokens. Non-ASCII
/// letters pass through unchanged.
TokenList tokenize(std::string_view text);

/// True for code points the tokenizer splits on.
bool is_separator_codepoint(std::uint32_t cp);

/// Requires stage Tokenized.
TokenList remove_stopwords(const TokenList& tokens);

bool is_stopword(std::string_view word);
std::size_t stopword_count();

/// Porter (1980) stemmer, reference C behaviour. Words containing anything
/// other than a-z are returned unchanged.
std::string porter_stem(std::string_view word);

/// Requires stage StopwordsRemoved.
TokenList stem_tokens(const TokenList& tokens);

/// tokenize -> remove_stopwords -> stem.
TokenList preprocess_text(std::string_view text);

/// Counts feeding the readability indices.
struct TextCounts {
  std::size_t characters = 0;     ///< alphanumeric code points
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
  std::size_t complex_words = 0;  ///< >= 3 syllables
  std::size_t long_words = 0;     ///< > 6 characters
  std::size_t periods = 0;        ///< '.', '!', '?' marks, at least 1 for non-empty text
};

std::size_t count_sentences(std::string_view text);
std::size_t count_syllables(std::string_view word);
TextCounts count_text(std::string_view text);

}  // namespace bugrank
