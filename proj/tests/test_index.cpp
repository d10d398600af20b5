#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <random>

#include "bugrank/error.hpp"
#include "bugrank/kernels.hpp"
#include "bugrank/tfidf.hpp"
#include "support.hpp"

using namespace bugrank;

namespace {

TokenList stemmed(std::vector<std::string> tokens) {
  return TokenList{std::move(tokens), TokenStage::Stemmed};
}

using Corpus = std::vector<std::pair<PostId, TokenList>>;

// Dense tf-idf straight from the formula, keyed by term.
std::map<std::string, double> dense_tfidf(const Corpus& corpus, const TokenList& doc) {
  std::map<std::string, double> df;
  for (const auto& [id, t] : corpus) {
    std::set<std::string> seen(t.tokens.begin(), t.tokens.end());
    for (const auto& w : seen) df[w] += 1;
  }
  const double n = static_cast<double>(corpus.size());
  std::map<std::string, double> v;
  for (const auto& w : doc.tokens)
    if (df.count(w)) v[w] += 1;
  double norm = 0;
  for (auto& [w, x] : v) {
    x *= std::log((1 + n) / (1 + df[w])) + 1;
    norm += x * x;
  }
  for (auto& [w, x] : v) x /= std::sqrt(norm);
  return v;
}

double dense_cos(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double dot = 0;
  for (const auto& [w, x] : a)
    if (auto it = b.find(w); it != b.end()) dot += x * it->second;
  return dot;
}

Corpus random_corpus(std::mt19937& rng, std::size_t docs) {
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f", "g", "h"};
  Corpus c;
  for (std::size_t i = 0; i < docs; ++i) {
    std::vector<std::string> t;
    const auto len = 1 + rng() % 6;
    for (std::size_t j = 0; j < len; ++j) t.push_back(words[rng() % words.size()]);
    c.emplace_back(static_cast<PostId>(100 + (i * 7) % docs * 3), stemmed(t));
  }
  return c;
}

}  // namespace

TEST_CASE("vocabulary counts document frequency") {
  const Corpus c{{1, stemmed({"a", "b"})}, {2, stemmed({"a"})}};
  const auto index = QuestionIndex::build(c);
  const auto& v = index.vocabulary();
  CHECK(v.size() == 2);
  CHECK(v.document_frequency(*v.id("a")) == 2);
  CHECK(v.document_frequency(*v.id("b")) == 1);
  CHECK(v.total_documents() == 2);
  CHECK(v.idf(*v.id("a")) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.idf(*v.id("b")) == doctest::Approx(std::log(1.5) + 1));
}

TEST_CASE("vectorize matches the formula") {
  const Corpus c{{1, stemmed({"a", "b"})}, {2, stemmed({"a"})}};
  const auto index = QuestionIndex::build(c);
  const auto q = stemmed({"a", "a", "b"});
  const auto v = index.vectorize(q);
  const auto oracle = dense_tfidf(c, q);
  REQUIRE(v.entries.size() == 2);
  for (const auto& [t, w] : v.entries)
    CHECK(std::abs(w - oracle.at(index.vocabulary().term(t))) < 1e-12);
  CHECK(index.vectorize(stemmed({"zzz"})).empty());
}

TEST_CASE("single document gives equal weights") {
  const Corpus c{{5, stemmed({"x", "y", "z"})}};
  const auto index = QuestionIndex::build(c);
  const auto* v = index.vector(5);
  REQUIRE(v);
  for (const auto& [t, w] : v->entries) CHECK(w == doctest::Approx(1 / std::sqrt(3.0)));
}

TEST_CASE("build rejects bad input") {
  CHECK_THROWS_AS(QuestionIndex::build(Corpus{}), InvalidArgument);
  const Corpus raw{{1, TokenList{{"a"}, TokenStage::Tokenized}}};
  CHECK_THROWS_AS(QuestionIndex::build(raw), InvalidArgument);
}

TEST_CASE("cosine basics") {
  const Corpus c{{1, stemmed({"a", "b"})}, {2, stemmed({"c"})}, {3, stemmed({"a", "c", "c"})}};
  const auto index = QuestionIndex::build(c);
  const auto v1 = *index.vector(1);
  CHECK(cosine(v1, v1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine(v1, *index.vector(2)) == 0.0);
  CHECK(cosine(v1, TfIdfVector{}) == 0.0);
  CHECK(std::abs(cosine(v1, *index.vector(3)) -
                 dense_cos(dense_tfidf(c, c[0].second), dense_tfidf(c, c[2].second))) < 1e-12);
}

TEST_CASE("retrieve equals an exhaustive scan") {
  std::mt19937 rng(3);
  for (int round = 0; round < 200; ++round) {
    const auto corpus = random_corpus(rng, 5 + rng() % 20);
    Corpus unique;
    std::set<PostId> seen;
    for (const auto& d : corpus)
      if (seen.insert(d.first).second) unique.push_back(d);
    const auto index = QuestionIndex::build(unique);
    const auto q = random_corpus(rng, 1)[0].second;
    const auto qv = index.vectorize(q);
    const std::size_t m = 1 + rng() % 6;

    std::vector<RetrievalHit> all;
    for (const auto& [id, t] : unique) {
      const double s = cosine(qv, *index.vector(id));
      if (s > 0) all.push_back({id, s});
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return a.similarity != b.similarity ? a.similarity > b.similarity
                                          : a.question_id < b.question_id;
    });
    if (all.size() > m) all.resize(m);
    CHECK(index.retrieve(qv, m, Execution::Serial) == all);
    CHECK(index.retrieve(qv, m, Execution::Parallel) == all);
  }
}

TEST_CASE("retrieve identity and no-overlap cases") {
  const Corpus c{{1, stemmed({"a", "b"})}, {2, stemmed({"c", "d"})}, {3, stemmed({"a", "d"})}};
  const auto index = QuestionIndex::build(c);
  const auto hits = index.retrieve(index.vectorize(c[1].second), 3);
  REQUIRE_FALSE(hits.empty());
  CHECK(hits[0].question_id == 2);
  CHECK(hits[0].similarity == doctest::Approx(1.0));
  CHECK(index.retrieve(index.vectorize(stemmed({"q"})), 3).empty());
}

TEST_CASE("vectors are unit norm and postings transpose vectors") {
  std::mt19937 rng(5);
  auto corpus = random_corpus(rng, 30);
  for (std::size_t i = 0; i < corpus.size(); ++i) corpus[i].first = static_cast<PostId>(i + 1);
  const auto index = QuestionIndex::build(corpus);
  std::size_t postings = 0, entries = 0;
  for (std::size_t t = 0; t < index.vocabulary().size(); ++t)
    for (const auto& p : index.postings(static_cast<TermId>(t))) {
      ++postings;
      const auto* v = index.vector(p.question_id);
      REQUIRE(v);
      const auto it = std::find_if(v->entries.begin(), v->entries.end(),
                                   [&](const auto& e) { return e.first == t; });
      REQUIRE(it != v->entries.end());
      CHECK(it->second == p.weight);
    }
  for (const auto& [id, t] : corpus) {
    const auto* v = index.vector(id);
    double n = 0;
    for (const auto& [term, w] : v->entries) n += w * w;
    CHECK(std::abs(std::sqrt(n) - 1) < 1e-9);
    entries += v->entries.size();
  }
  CHECK(postings == entries);
}

TEST_CASE("serialization round-trips and is deterministic") {
  std::mt19937 rng(9);
  auto corpus = random_corpus(rng, 25);
  for (std::size_t i = 0; i < corpus.size(); ++i) corpus[i].first = static_cast<PostId>(i * 2 + 1);
  const auto a = QuestionIndex::build(corpus);
  const auto b = QuestionIndex::build(corpus);
  CHECK(a.serialize() == b.serialize());
  CHECK(QuestionIndex::deserialize(a.serialize()) == a);

  testing::TempDir dir;
  a.save(dir / "idx.bin");
  CHECK(QuestionIndex::load(dir / "idx.bin") == a);

  auto bytes = a.serialize();
  CHECK_THROWS_AS(QuestionIndex::deserialize(bytes.substr(0, bytes.size() / 2)), CorruptionError);
  bytes[bytes.size() / 2] ^= 0x5a;
  CHECK_THROWS_AS(QuestionIndex::deserialize(bytes), CorruptionError);
  CHECK_THROWS_AS(QuestionIndex::load(dir / "missing.bin"), IoError);
}
