#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>

#include "bugrank/features.hpp"

namespace bugrank {

namespace {

bool url_char(char c) {
  return !(std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '>' || c == '"' ||
           c == '\'');
}

bool scheme_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '.' || c == '-';
}

// [begin, end) of every scheme://rest match.
std::vector<std::pair<std::size_t, std::size_t>> url_spans(std::string_view s) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t from = 0;
  while (true) {
    const auto sep = s.find("://", from);
    if (sep == std::string_view::npos) break;
    std::size_t begin = sep;
    while (begin > 0 && scheme_char(s[begin - 1])) --begin;
    while (begin < sep && !std::isalpha(static_cast<unsigned char>(s[begin]))) ++begin;
    std::size_t end = sep + 3;
    while (end < s.size() && url_char(s[end])) ++end;
    if (begin < sep && end > sep + 3) {
      spans.emplace_back(begin, end);
      from = end;
    } else {
      from = sep + 3;
    }
  }
  return spans;
}

bool local_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '%' ||
         c == '+' || c == '-';
}

bool domain_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-';
}

std::size_t non_blank_lines(std::string_view s) {
  std::size_t n = 0;
  bool content = false;
  for (const char c : s) {
    if (c == '\n') {
      if (content) ++n;
      content = false;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      content = true;
    }
  }
  return content ? n + 1 : n;
}

std::size_t code_lines(std::string_view block) {
  while (!block.empty() && (block.back() == '\n' || block.back() == '\r')) block.remove_suffix(1);
  if (block.empty()) return 0;
  return static_cast<std::size_t>(std::count(block.begin(), block.end(), '\n')) + 1;
}

}  // namespace

std::size_t count_urls(std::string_view s) { return url_spans(s).size(); }

std::size_t count_emails(std::string_view s) {
  std::string masked(s);
  for (const auto& [b, e] : url_spans(s)) std::fill(masked.begin() + b, masked.begin() + e, ' ');
  std::size_t n = 0;
  for (std::size_t at = masked.find('@'); at != std::string::npos; at = masked.find('@', at + 1)) {
    if (at == 0 || !local_char(masked[at - 1])) continue;
    std::size_t end = at + 1;
    while (end < masked.size() && domain_char(masked[end])) ++end;
    auto domain = std::string_view(masked).substr(at + 1, end - at - 1);
    while (!domain.empty() && (domain.back() == '.' || domain.back() == '-'))
      domain.remove_suffix(1);
    const auto dot = domain.rfind('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == domain.size()) continue;
    const auto tld = domain.substr(dot + 1);
    if (std::all_of(tld.begin(), tld.end(),
                    [](char c) { return std::isalpha(static_cast<unsigned char>(c)); }))
      ++n;
  }
  return n;
}

TokenList body_tokens(const StrippedBody& body) {
  std::string all = body.text;
  for (const auto& code : body.code_blocks) {
    all.push_back('\n');
    all.append(code);
  }
  return preprocess_text(all);
}

double title_body_similarity(const TokenList& title, const TokenList& body) {
  if (title.empty() || body.empty()) return 0.0;
  std::map<std::string_view, double> a, b;
  for (const auto& t : title.tokens) a[t] += 1;
  for (const auto& t : body.tokens) b[t] += 1;
  double dot = 0, na = 0, nb = 0;
  for (const auto& [t, n] : a) {
    na += n * n;
    if (const auto it = b.find(t); it != b.end()) dot += n * it->second;
  }
  for (const auto& [t, n] : b) nb += n * n;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

TextAnalysisFeatures analyze_post(const StrippedBody& body, std::string_view raw_html,
                                  const std::optional<std::string>& title) {
  TextAnalysisFeatures f;
  f.body_length = utf8_length(raw_html);
  f.email_count = count_emails(raw_html);
  f.url_count = count_urls(raw_html);
  std::size_t upper = 0, lower = 0;
  for (const char c : raw_html) {
    if (c >= 'A' && c <= 'Z') ++upper;
    else if (c >= 'a' && c <= 'z') ++lower;
    else if (c == ' ') ++f.spaces_count;
  }
  if (f.body_length > 0) {
    f.uppercase_pct = static_cast<double>(upper) / static_cast<double>(f.body_length);
    f.lowercase_pct = static_cast<double>(lower) / static_cast<double>(f.body_length);
  }
  f.readability = readability(count_text(body.text));
  for (const auto& block : body.code_blocks) f.lines_of_code += code_lines(block);
  const auto text_lines = non_blank_lines(body.text);
  if (f.lines_of_code + text_lines > 0)
    f.code_percentage = static_cast<double>(f.lines_of_code) /
                        static_cast<double>(f.lines_of_code + text_lines);
  f.code_tag_count = body.code_tag_count;
  f.p_tag_count = body.p_tag_count;
  if (title) {
    f.title_length = utf8_length(*title);
    f.title_body_similarity = title_body_similarity(preprocess_text(*title), body_tokens(body));
  }
  return f;
}

}  // namespace bugrank
