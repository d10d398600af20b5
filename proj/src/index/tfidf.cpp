#include "bugrank/tfidf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "bugrank/error.hpp"
#include "bugrank/kernels.hpp"

namespace bugrank {

namespace {

constexpr char kMagic[8] = {'B', 'R', 'I', 'D', 'X', 0, 0, 0};
constexpr std::uint32_t kIndexVersion = 1;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ULL) {
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

static_assert(std::endian::native == std::endian::little,
              "index serialization assumes a little-endian host");

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void bytes(std::string_view s) { out_.append(s); }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > in_.size()) throw CorruptionError("index file truncated");
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string_view bytes(std::size_t n) {
    if (pos_ + n > in_.size()) throw CorruptionError("index file truncated");
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

void normalize(TfIdfVector& v) {
  double norm2 = 0;
  for (const auto& [t, w] : v.entries) norm2 += w * w;
  if (norm2 <= 0) {
    v.entries.clear();
    return;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& [t, w] : v.entries) w *= inv;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint64_t> df,
                       std::uint64_t total_documents)
    : terms_(std::move(terms)), df_(std::move(df)), total_documents_(total_documents) {
  if (terms_.size() != df_.size()) throw InvalidArgument("vocabulary: terms/df size mismatch");
  std::uint64_t h = 1469598103934665603ULL;
  lookup_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i]))
      throw InvalidArgument("vocabulary terms must be strictly increasing");
    if (df_[i] < 1 || df_[i] > total_documents_)
      throw InvalidArgument("vocabulary: document frequency out of range");
    lookup_.emplace(terms_[i], static_cast<TermId>(i));
    h = fnv1a(terms_[i], h);
    h = fnv1a(std::string_view("\n", 1), h);
  }
  hash_ = h;
}

std::optional<TermId> Vocabulary::id(std::string_view term) const {
  const auto it = lookup_.find(std::string(term));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

double Vocabulary::idf(TermId id) const {
  return std::log((1.0 + static_cast<double>(total_documents_)) /
                  (1.0 + static_cast<double>(df_.at(id)))) +
         1.0;
}

double cosine(const TfIdfVector& a, const TfIdfVector& b) noexcept {
  double dot = 0;
  auto i = a.entries.begin();
  auto j = b.entries.begin();
  while (i != a.entries.end() && j != b.entries.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      dot += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return std::clamp(dot, 0.0, 1.0);
}

QuestionIndex QuestionIndex::build(std::span<const std::pair<PostId, TokenList>> questions) {
  if (questions.empty()) throw InvalidArgument("cannot build an index from an empty corpus");
  std::map<std::string, std::uint64_t> df;
  for (const auto& [id, tokens] : questions) {
    if (tokens.stage != TokenStage::Stemmed)
      throw InvalidArgument("index input must be preprocessed token lists");
    std::vector<std::string_view> uniq(tokens.tokens.begin(), tokens.tokens.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (const auto t : uniq) ++df[std::string(t)];
  }
  std::vector<std::string> terms;
  std::vector<std::uint64_t> freq;
  terms.reserve(df.size());
  freq.reserve(df.size());
  for (auto& [t, n] : df) {
    terms.push_back(t);
    freq.push_back(n);
  }

  QuestionIndex idx;
  idx.vocab_ = Vocabulary(std::move(terms), std::move(freq), questions.size());
  idx.ids_.reserve(questions.size());
  idx.vectors_.reserve(questions.size());
  for (const auto& [id, tokens] : questions) {
    if (idx.slot_.contains(id))
      throw InvalidArgument("duplicate question id " + std::to_string(id));
    idx.slot_.emplace(id, idx.ids_.size());
    idx.ids_.push_back(id);
    idx.vectors_.push_back(idx.vectorize(tokens));
  }
  idx.rebuild_views();
  return idx;
}

void QuestionIndex::rebuild_views() {
  slot_.clear();
  inverted_.assign(vocab_.size(), {});
  for (std::size_t s = 0; s < ids_.size(); ++s) {
    slot_.emplace(ids_[s], s);
    for (const auto& [t, w] : vectors_[s].entries) inverted_[t].push_back({ids_[s], w});
  }
}

const TfIdfVector* QuestionIndex::vector(PostId id) const {
  const auto it = slot_.find(id);
  return it == slot_.end() ? nullptr : &vectors_[it->second];
}

TfIdfVector QuestionIndex::vectorize(const TokenList& tokens) const {
  std::map<TermId, double> tf;
  for (const auto& t : tokens.tokens)
    if (const auto id = vocab_.id(t)) tf[*id] += 1.0;
  TfIdfVector v;
  v.entries.reserve(tf.size());
  for (const auto& [t, n] : tf) v.entries.emplace_back(t, n * vocab_.idf(t));
  normalize(v);
  return v;
}

std::vector<RetrievalHit> QuestionIndex::retrieve(const TfIdfVector& query, std::size_t m,
                                                  Execution ex) const {
  if (m == 0) throw InvalidArgument("retrieve: m must be at least 1");
  std::vector<std::size_t> slots;
  for (const auto& [t, w] : query.entries) {
    if (t >= inverted_.size()) continue;
    for (const auto& p : inverted_[t]) slots.push_back(slot_.at(p.question_id));
  }
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  const auto sims = ex == Execution::Serial ? kernels::serial::similarities(*this, query, slots)
                                            : kernels::omp::similarities(*this, query, slots);
  std::vector<RetrievalHit> hits;
  for (std::size_t i = 0; i < slots.size(); ++i)
    if (sims[i] > 0) hits.push_back({ids_[slots[i]], sims[i]});
  const auto better = [](const RetrievalHit& a, const RetrievalHit& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity
                                        : a.question_id < b.question_id;
  };
  if (hits.size() > m) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(m), hits.end(),
                      better);
    hits.resize(m);
  } else {
    std::sort(hits.begin(), hits.end(), better);
  }
  return hits;
}

std::string QuestionIndex::serialize() const {
  Writer w;
  w.bytes(std::string_view(kMagic, sizeof kMagic));
  w.put<std::uint32_t>(kIndexVersion);
  w.put<std::uint64_t>(vocab_.total_documents());
  w.put<std::uint64_t>(vocab_.size());
  for (TermId t = 0; t < vocab_.size(); ++t) {
    const auto& term = vocab_.term(t);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(term.size()));
    w.bytes(term);
    w.put<std::uint64_t>(vocab_.document_frequency(t));
  }
  w.put<std::uint64_t>(ids_.size());
  for (std::size_t s = 0; s < ids_.size(); ++s) {
    w.put<std::int64_t>(ids_[s]);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(vectors_[s].entries.size()));
    for (const auto& [t, weight] : vectors_[s].entries) {
      w.put<std::uint32_t>(t);
      w.put<double>(weight);
    }
  }
  const auto sum = fnv1a(w.str());
  w.put<std::uint64_t>(sum);
  return std::move(w.str());
}

QuestionIndex QuestionIndex::deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.bytes(sizeof kMagic) != std::string_view(kMagic, sizeof kMagic))
    throw CorruptionError("not an index file");
  if (const auto v = r.get<std::uint32_t>(); v != kIndexVersion)
    throw IncompatibleError("index format version " + std::to_string(v) + ", expected " +
                            std::to_string(kIndexVersion));
  const auto n_docs = r.get<std::uint64_t>();
  const auto n_terms = r.get<std::uint64_t>();
  if (n_terms > bytes.size()) throw CorruptionError("index vocabulary size out of range");
  std::vector<std::string> terms;
  std::vector<std::uint64_t> df;
  terms.reserve(n_terms);
  df.reserve(n_terms);
  for (std::uint64_t i = 0; i < n_terms; ++i) {
    const auto len = r.get<std::uint32_t>();
    terms.emplace_back(r.bytes(len));
    df.push_back(r.get<std::uint64_t>());
  }
  QuestionIndex idx;
  try {
    idx.vocab_ = Vocabulary(std::move(terms), std::move(df), n_docs);
  } catch (const InvalidArgument& e) {
    throw CorruptionError(std::string("index vocabulary invalid: ") + e.what());
  }
  const auto n_vec = r.get<std::uint64_t>();
  if (n_vec > bytes.size()) throw CorruptionError("index document count out of range");
  for (std::uint64_t i = 0; i < n_vec; ++i) {
    idx.ids_.push_back(r.get<std::int64_t>());
    const auto nnz = r.get<std::uint32_t>();
    TfIdfVector v;
    for (std::uint32_t k = 0; k < nnz; ++k) {
      const auto t = r.get<std::uint32_t>();
      if (t >= n_terms) throw CorruptionError("index term id out of range");
      v.entries.emplace_back(t, r.get<double>());
    }
    idx.vectors_.push_back(std::move(v));
  }
  const auto expected = fnv1a(bytes.substr(0, r.pos()));
  if (r.get<std::uint64_t>() != expected) throw CorruptionError("index checksum mismatch");
  idx.rebuild_views();
  return idx;
}

void QuestionIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  const auto bytes = serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path.string(), "write failure");
}

QuestionIndex QuestionIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open index");
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace bugrank
