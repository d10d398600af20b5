// Porter (1980) suffix stripper, following the reference ANSI C release,
// including its two published departures (-bli -> -ble, -logi -> -log).

#include <string>
#include <string_view>

#include "bugrank/text.hpp"

namespace bugrank {

namespace {

class PorterStemmer {
 public:
  explicit PorterStemmer(std::string_view word) : b_(word), k_(static_cast<int>(word.size()) - 1) {}

  std::string run() {
    if (k_ <= 1) return b_;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return b_.substr(0, static_cast<std::size_t>(k_ + 1));
  }

 private:
  bool cons(int i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return false;
      case 'y': return i == 0 ? true : !cons(i - 1);
      default: return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int m() const {
    int n = 0;
    int i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool double_c(int j) const {
    if (j < 1) return false;
    if (b_[j] != b_[j - 1]) return false;
    return cons(j);
  }

  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char ch = b_[i];
    return !(ch == 'w' || ch == 'x' || ch == 'y');
  }

  bool ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (s.back() != b_[k_]) return false;
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(static_cast<std::size_t>(k_ - len + 1), s.size()) != s)
      return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    b_.replace(static_cast<std::size_t>(j_ + 1), std::string::npos, s);
    k_ = j_ + static_cast<int>(s.size());
  }

  void r(std::string_view s) {
    if (m() > 0) set_to(s);
  }

  void step1ab() {
    if (b_[k_] == 's') {
      if (ends("sses")) {
        k_ -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (b_[k_ - 1] != 's') {
        --k_;
      }
    }
    if (ends("eed")) {
      if (m() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_c(k_)) {
        --k_;
        const char ch = b_[k_];
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else if (m() == 1 && cvc(k_)) {
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[k_] = 'i';
  }

  struct Rule {
    std::string_view from;
    std::string_view to;
  };

  template <std::size_t N>
  bool apply(const Rule (&rules)[N]) {
    for (const auto& rule : rules) {
      if (ends(rule.from)) {
        r(rule.to);
        return true;
      }
    }
    return false;
  }

  void step2() {
    switch (b_[k_ - 1]) {
      case 'a': { static const Rule rs[] = {{"ational", "ate"}, {"tional", "tion"}}; apply(rs); break; }
      case 'c': { static const Rule rs[] = {{"enci", "ence"}, {"anci", "ance"}}; apply(rs); break; }
      case 'e': { static const Rule rs[] = {{"izer", "ize"}}; apply(rs); break; }
      case 'l': {
        static const Rule rs[] = {
            {"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
        apply(rs);
        break;
      }
      case 'o': {
        static const Rule rs[] = {{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
        apply(rs);
        break;
      }
      case 's': {
        static const Rule rs[] = {
            {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
        apply(rs);
        break;
      }
      case 't': {
        static const Rule rs[] = {{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
        apply(rs);
        break;
      }
      case 'g': { static const Rule rs[] = {{"logi", "log"}}; apply(rs); break; }
      default: break;
    }
  }

  void step3() {
    switch (b_[k_]) {
      case 'e': {
        static const Rule rs[] = {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
        apply(rs);
        break;
      }
      case 'i': { static const Rule rs[] = {{"iciti", "ic"}}; apply(rs); break; }
      case 'l': { static const Rule rs[] = {{"ical", "ic"}, {"ful", ""}}; apply(rs); break; }
      case 's': { static const Rule rs[] = {{"ness", ""}}; apply(rs); break; }
      default: break;
    }
  }

  void step4() {
    switch (b_[k_ - 1]) {
      case 'a': if (ends("al")) break; return;
      case 'c': if (ends("ance") || ends("ence")) break; return;
      case 'e': if (ends("er")) break; return;
      case 'i': if (ends("ic")) break; return;
      case 'l': if (ends("able") || ends("ible")) break; return;
      case 'n': if (ends("ant") || ends("ement") || ends("ment") || ends("ent")) break; return;
      case 'o':
        if (ends("ion") && j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't')) break;
        if (ends("ou")) break;
        return;
      case 's': if (ends("ism")) break; return;
      case 't': if (ends("ate") || ends("iti")) break; return;
      case 'u': if (ends("ous")) break; return;
      case 'v': if (ends("ive")) break; return;
      case 'z': if (ends("ize")) break; return;
      default: return;
    }
    if (m() > 1) k_ = j_;
  }

  void step5() {
    const int k = k_;
    j_ = k;
    if (b_[k] == 'e') {
      const int a = m();
      if (a > 1 || (a == 1 && !cvc(k - 1))) --k_;
    }
    if (b_[k] == 'l' && double_c(k) && m() > 1) --k_;
  }

  std::string b_;
  int k_;
  int j_ = 0;
};

bool all_lower_ascii(std::string_view w) {
  for (const char c : w)
    if (c < 'a' || c > 'z') return false;
  return true;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.empty() || !all_lower_ascii(word)) return std::string(word);
  return PorterStemmer(word).run();
}

}  // namespace bugrank
