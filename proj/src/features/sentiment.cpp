#include <string>
#include <unordered_map>

#include "../embedded_data.hpp"
#include "bugrank/error.hpp"
#include "bugrank/features.hpp"

namespace bugrank {

namespace {

struct Entry {
  double polarity = 0;
  double subjectivity = 0;
};

double parse_number(std::string_view s) {
  return std::stod(std::string(s));
}

const std::unordered_map<std::string, Entry>& lexicon() {
  static const auto table = [] {
    std::unordered_map<std::string, Entry> t;
    std::string_view rest = embedded::affect_lexicon();
    while (!rest.empty()) {
      const auto nl = rest.find('\n');
      auto line = rest.substr(0, nl);
      rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      const auto t1 = line.find('\t');
      const auto t2 = line.find('\t', t1 + 1);
      if (t1 == std::string_view::npos || t2 == std::string_view::npos)
        throw DataError("malformed affect lexicon line: " + std::string(line));
      t[std::string(line.substr(0, t1))] = {parse_number(line.substr(t1 + 1, t2 - t1 - 1)),
                                            parse_number(line.substr(t2 + 1))};
    }
    return t;
  }();
  return table;
}

}  // namespace

std::size_t lexicon_size() { return lexicon().size(); }

AffectiveScores sentiment(std::string_view text) {
  const auto& lex = lexicon();
  AffectiveScores s;
  std::size_t hits = 0;
  for (const auto& token : tokenize(text).tokens) {
    const auto it = lex.find(token);
    if (it == lex.end()) continue;
    s.polarity += it->second.polarity;
    s.subjectivity += it->second.subjectivity;
    ++hits;
  }
  if (hits > 0) {
    s.polarity /= static_cast<double>(hits);
    s.subjectivity /= static_cast<double>(hits);
  }
  return s;
}

}  // namespace bugrank
