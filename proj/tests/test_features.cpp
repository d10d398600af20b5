#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "bugrank/error.hpp"
#include "bugrank/features.hpp"
#include "bugrank/tfidf.hpp"
#include "support.hpp"

using namespace bugrank;

namespace {

const std::vector<std::int64_t> kGradingScores{1,  2,  2,  2,  11, 16,  17,  22,  24,  30,
                                            32, 36, 45, 69, 79, 125, 361, 943, 1860};

std::map<std::string, std::pair<double, double>> load_lexicon() {
  std::map<std::string, std::pair<double, double>> lex;
  std::istringstream in(testing::read_file(testing::data_file("affect_lexicon.tsv")));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string term;
    double p = 0, s = 0;
    fields >> term >> p >> s;
    lex[term] = {p, s};
  }
  return lex;
}

}  // namespace

TEST_CASE("readability formulas") {
  TextCounts c;
  c.words = 3;
  c.characters = 9;
  c.sentences = 1;
  CHECK(readability(c).ari == doctest::Approx(-5.80));

  c = {};
  c.words = 10;
  c.sentences = 1;
  c.syllables = 14;
  CHECK(readability(c).flesch_kincaid == doctest::Approx(4.83));
  CHECK(readability(c).flesch_reading_ease == doctest::Approx(206.835 - 10.15 - 84.6 * 1.4));

  c = {};
  c.words = 20;
  c.sentences = 2;
  c.periods = 2;
  c.long_words = 4;
  c.complex_words = 3;
  c.characters = 100;
  const auto r = readability(c);
  CHECK(r.lix == doctest::Approx(30.0));
  CHECK(r.rix == doctest::Approx(2.0));
  CHECK(r.smog == doctest::Approx(std::sqrt(3 * 30.0 / 2 + 3)));
  CHECK(r.coleman_liau == doctest::Approx(0.588 * 5 - 0.296 * 10 - 15.8));
  CHECK(r.gunning_fog == doctest::Approx(0.4 * (10 + 100.0 * 3 / 20)));

  const auto zero = readability(TextCounts{});
  CHECK(zero.ari == 0);
  CHECK(zero.smog == 0);
}

TEST_CASE("readability is finite for any counts with words and sentences") {
  std::mt19937 rng(1);
  for (int i = 0; i < 1000; ++i) {
    TextCounts c;
    c.words = 1 + rng() % 500;
    c.sentences = 1 + rng() % 50;
    c.periods = rng() % 50;
    c.characters = rng() % 5000;
    c.syllables = c.words + rng() % 500;
    c.complex_words = rng() % (c.words + 1);
    c.long_words = rng() % (c.words + 1);
    const auto r = readability(c);
    for (const double v : {r.ari, r.flesch_reading_ease, r.flesch_kincaid, r.gunning_fog, r.smog,
                           r.coleman_liau, r.lix, r.rix})
      CHECK(std::isfinite(v));
  }
}

TEST_CASE("analyze_post counts") {
  SUBCASE("tags") {
    const std::string html = "<p>Hi</p>";
    const auto f = analyze_post(strip_html(html), html, std::nullopt);
    CHECK(f.body_length == 9);
    CHECK(f.p_tag_count == 1);
    CHECK(f.code_tag_count == 0);
    CHECK(f.title_length == 0);
  }
  SUBCASE("links and mail") {
    const std::string html = "see http://a.com and https://b.org, mail x@y.z";
    const auto f = analyze_post(strip_html(html), html, std::nullopt);
    CHECK(f.url_count == 2);
    CHECK(f.email_count == 1);
    CHECK(f.spaces_count == 5);
  }
  SUBCASE("case ratios") {
    const auto f = analyze_post(strip_html("AbC"), "AbC", std::nullopt);
    CHECK(f.uppercase_pct == doctest::Approx(2.0 / 3));
    CHECK(f.lowercase_pct == doctest::Approx(1.0 / 3));
  }
  SUBCASE("code metrics") {
    const std::string html = "<p>Try this:</p><pre><code>a = 1\nb = 2\n</code></pre><p>done</p><code>x</code>";
    const auto f = analyze_post(strip_html(html), html, std::string("Try this"));
    CHECK(f.lines_of_code == 3);
    CHECK(f.code_tag_count == 2);
    CHECK(f.p_tag_count == 2);
    CHECK(f.code_percentage == doctest::Approx(3.0 / 5));
    CHECK(f.title_length == 8);
    CHECK(f.title_body_similarity > 0);
  }
}

TEST_CASE("url and email patterns") {
  CHECK(count_urls("") == 0);
  CHECK(count_urls("ftp://x.y/z and ://nothing and http://") == 1);
  CHECK(count_emails("user.name+tag@sub.example.co.uk.") == 1);
  CHECK(count_emails("@handle and a@b and mailto") == 0);
  CHECK(count_emails("http://user@host.com/path") == 0);
}

TEST_CASE("sentiment averages lexicon scores") {
  const auto lex = load_lexicon();
  CHECK(lexicon_size() == lex.size());
  const auto e = sentiment("");
  CHECK(e.polarity == 0.0);
  CHECK(e.subjectivity == 0.0);
  const auto g = sentiment("Great, awesome!");
  CHECK(g.polarity == doctest::Approx(0.9));
  CHECK(g.subjectivity == doctest::Approx(0.875));
  const auto none = sentiment("segfault vector iterator");
  CHECK(none.polarity == 0.0);
  CHECK(none.subjectivity == 0.0);

  std::vector<std::string> terms;
  for (const auto& [t, v] : lex) terms.push_back(t);
  std::mt19937 rng(2);
  for (int round = 0; round < 200; ++round) {
    std::string text;
    double p = 0, s = 0;
    int n = 0;
    for (int i = 0; i < 6; ++i) {
      if (rng() % 2) {
        const auto& t = terms[rng() % terms.size()];
        if (t.find_first_of("-' ") != std::string::npos) continue;
        text += t + " ";
        p += lex.at(t).first;
        s += lex.at(t).second;
        ++n;
      } else {
        text += "qqq ";
      }
    }
    const auto a = sentiment(text);
    CHECK(a.polarity == doctest::Approx(n ? p / n : 0.0));
    CHECK(a.subjectivity == doctest::Approx(n ? s / n : 0.0));
    CHECK(a.polarity >= -1.0);
    CHECK(a.polarity <= 1.0);
    CHECK(a.subjectivity >= 0.0);
    CHECK(a.subjectivity <= 1.0);
  }
}

TEST_CASE("grade_answers buckets a 19-score example") {
  std::mt19937 rng(4);
  auto shuffled = kGradingScores;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto grades = grade_answers(shuffled);
  const std::vector<std::vector<std::int64_t>> expected{
      {1, 2, 2, 2}, {11, 16, 17, 22}, {24, 30, 32, 36}, {45, 69, 79, 125}, {361, 943, 1860}};
  std::vector<std::vector<std::int64_t>> buckets(5);
  for (std::size_t i = 0; i < shuffled.size(); ++i) buckets[grades[i] - 1].push_back(shuffled[i]);
  for (auto& b : buckets) std::sort(b.begin(), b.end());
  CHECK(buckets == expected);
  const auto at30 = std::find(shuffled.begin(), shuffled.end(), 30) - shuffled.begin();
  CHECK(grades[at30] == 3);
}

TEST_CASE("grade_answers small lists") {
  CHECK(grade_answers({42}) == std::vector<RelevanceGrade>{1});
  const auto g = grade_answers({0, 1, 2, 3, 4, 5, 6});
  CHECK(g == std::vector<RelevanceGrade>{1, 1, 2, 2, 3, 4, 5});
  CHECK(grade_answers({5, 5, 5}) == std::vector<RelevanceGrade>{1, 2, 3});
  CHECK_THROWS_AS(grade_answers({}), InvalidArgument);
}

TEST_CASE("grade_answers properties") {
  std::mt19937 rng(8);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<std::int64_t> scores(n);
    for (auto& s : scores) s = static_cast<std::int64_t>(rng() % 1000) - 100;
    // distinct scores so the permutation check is not affected by tie order
    std::sort(scores.begin(), scores.end());
    scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
    const auto grades = grade_answers(scores);
    for (std::size_t i = 1; i < grades.size(); ++i) CHECK(grades[i] >= grades[i - 1]);
    auto perm = scores;
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto pg = grade_answers(perm);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      const auto pos = std::lower_bound(scores.begin(), scores.end(), perm[i]) - scores.begin();
      CHECK(pg[i] == grades[pos]);
    }
    std::vector<std::size_t> hist(6, 0);
    for (const auto g : grades) ++hist[g];
    for (std::size_t b = 0; b < 5; ++b)
      CHECK(hist[b + 1] == grades.size() / 5 + (b < grades.size() % 5 ? 1 : 0));
  }
}

TEST_CASE("title_body_similarity") {
  const TokenList a{{"x", "y"}, TokenStage::Stemmed};
  const TokenList b{{"x", "x", "z"}, TokenStage::Stemmed};
  CHECK(title_body_similarity(a, b) == doctest::Approx(2 / (std::sqrt(2.0) * std::sqrt(5.0))));
  CHECK(title_body_similarity(a, a) == doctest::Approx(1.0));
  CHECK(title_body_similarity(a, TokenList{}) == 0.0);
}

TEST_CASE("candidate features are deterministic and complete") {
  const std::vector<std::pair<PostId, TokenList>> docs{
      {1, preprocess_text("null pointer exception java list")},
      {2, preprocess_text("segmentation fault vector")}};
  const auto index = QuestionIndex::build(docs);
  RawPost q;
  q.id = 1;
  q.title = "Null pointer exception in Java";
  q.body = "<p>My list is null.</p>";
  RawPost a;
  a.id = 10;
  a.post_type = PostType::Answer;
  a.parent_id = 1;
  a.score = 3;
  a.body = "<p>Initialize the list first. It is a great fix, see https://docs.example.org.</p>"
           "<pre><code>List&lt;String&gt; xs = new ArrayList&lt;&gt;();</code></pre>";
  RawUser u;
  u.id = 5;
  u.reputation = 1234;
  const auto query = preprocess_text("java null pointer");
  const FeatureLimits limits{8, 16};
  const auto c1 = build_candidate_features(query, a, q, &u, 0.7, index.vocabulary(), limits);
  const auto c2 = build_candidate_features(query, a, q, &u, 0.7, index.vocabulary(), limits);
  CHECK(c1 == c2);
  CHECK(c1.query_token_ids.size() == 8);
  CHECK(c1.answer_token_ids.size() == 16);
  CHECK(c1.dense.size() == kDenseDim);
  CHECK(c1.dense[kOwnerReputation] == 1234);
  CHECK(c1.dense[kRetrievalSimilarity] == 0.7);
  CHECK(c1.dense[kUrlCount] == 1);
  CHECK(c1.dense[kPolarity] > 0);
  CHECK(c1.dense[kQuestionTitleBodySimilarity] > 0);
  CHECK(c1.query_token_ids[3] == kPadToken);
  const auto oov = static_cast<std::int32_t>(oov_id(index.vocabulary()));
  CHECK(std::count(c1.answer_token_ids.begin(), c1.answer_token_ids.end(), oov) > 0);
  const auto without_owner =
      build_candidate_features(query, a, q, nullptr, 0.7, index.vocabulary(), limits);
  CHECK(without_owner.dense[kOwnerReputation] == 0);
  CHECK(dense_fields()[kOwnerReputation].is_count);
  CHECK(std::string(dense_fields()[kRetrievalSimilarity].name) == "retrieval_similarity");
}
