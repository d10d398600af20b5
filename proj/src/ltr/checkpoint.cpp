#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "bugrank/checkpoint.hpp"
#include "bugrank/error.hpp"

namespace bugrank {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kWeights = "weights.bin";

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void put(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

double get(std::string_view in, std::size_t& pos) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += 8;
  return std::bit_cast<double>(bits);
}

// Tensor order: embedding, then weight and bias of each layer; the same again
// for the Adagrad accumulators.
std::string payload(const Checkpoint& c) {
  std::string out;
  const auto tensors = [&](const std::vector<double>& emb, const std::vector<DenseLayer>& layers) {
    for (const double v : emb) put(out, v);
    for (const auto& l : layers) {
      for (const double v : l.weight) put(out, v);
      for (const double v : l.bias) put(out, v);
    }
  };
  tensors(c.params.embedding, c.params.layers);
  tensors(c.optimizer.embedding, c.optimizer.layers);
  return out;
}

ordered_json config_json(const TrainConfig& c) {
  return {{"layer_sizes", c.layer_sizes},
          {"embedding_dim", c.embedding_dim},
          {"batch_size", c.batch_size},
          {"steps", c.steps},
          {"optimizer", "adagrad"},
          {"learning_rate", c.learning_rate},
          {"dropout_rate", c.dropout_rate},
          {"list_size", c.list_size},
          {"group_size", 1},
          {"loss", "approx_ndcg"},
          {"checkpoint_every", c.checkpoint_every},
          {"seed", c.seed},
          {"ndcg_temperature", c.ndcg_temperature},
          {"features", to_string(c.features)},
          {"adagrad_initial_accumulator", c.adagrad_initial_accumulator},
          {"adagrad_epsilon", c.adagrad_epsilon},
          {"query_tokens", c.limits.query_tokens},
          {"answer_tokens", c.limits.answer_tokens}};
}

TrainConfig config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
  c.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.steps = j.at("steps").get<std::size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.dropout_rate = j.at("dropout_rate").get<double>();
  c.list_size = j.at("list_size").get<std::size_t>();
  c.checkpoint_every = j.at("checkpoint_every").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.ndcg_temperature = j.at("ndcg_temperature").get<double>();
  c.features = feature_set_from_string(j.at("features").get<std::string>());
  c.adagrad_initial_accumulator = j.at("adagrad_initial_accumulator").get<double>();
  c.adagrad_epsilon = j.at("adagrad_epsilon").get<double>();
  c.limits.query_tokens = j.at("query_tokens").get<std::size_t>();
  c.limits.answer_tokens = j.at("answer_tokens").get<std::size_t>();
  return c;
}

std::uint64_t from_hex(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(p.string(), "cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string to_hex(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

std::string model_version(const Checkpoint& ckpt) {
  return "step" + std::to_string(ckpt.step) + "-" + to_hex(fnv1a(payload(ckpt))).substr(0, 12);
}

void save_checkpoint(const Checkpoint& ckpt, const fs::path& dir) {
  const auto& p = ckpt.params;
  const std::string weights = payload(ckpt);

  ordered_json tensors = ordered_json::array();
  tensors.push_back({{"name", "embedding"}, {"shape", {p.vocab_size + 1, p.embedding_dim}}});
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const std::string name = l + 1 == p.layers.size() ? "output" : "hidden" + std::to_string(l);
    tensors.push_back({{"name", name + ".weight"}, {"shape", {p.layers[l].out, p.layers[l].in}}});
    tensors.push_back({{"name", name + ".bias"}, {"shape", {p.layers[l].out}}});
  }

  ordered_json fields = ordered_json::array();
  for (const auto& f : dense_fields()) fields.push_back(f.name);

  ordered_json m;
  m["format"] = "bugrank-checkpoint";
  m["version"] = kCheckpointVersion;
  m["step"] = ckpt.step;
  m["config"] = config_json(ckpt.config);
  m["vocab_size"] = p.vocab_size;
  m["vocab_hash"] = to_hex(p.vocab_hash);
  m["embedding_dim"] = p.embedding_dim;
  m["use_dense"] = p.use_dense;
  m["normalization"] = {{"fields", fields}, {"mean", p.norm.mean}, {"stddev", p.norm.stddev}};
  m["tensors"] = tensors;
  m["payload"] = {{"file", kWeights},
                  {"encoding", "float64-le"},
                  {"sections", {"params", "adagrad_accumulators"}},
                  {"bytes", weights.size()},
                  {"fnv1a", to_hex(fnv1a(weights))}};

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());
  {
    std::ofstream out(dir / kWeights, std::ios::binary | std::ios::trunc);
    out.write(weights.data(), static_cast<std::streamsize>(weights.size()));
    if (!out) throw IoError((dir / kWeights).string(), "write failed");
  }
  std::ofstream out(dir / kManifest, std::ios::trunc);
  out << m.dump(2) << '\n';
  if (!out) throw IoError((dir / kManifest).string(), "write failed");
}

Checkpoint load_checkpoint(const fs::path& dir, std::optional<std::uint64_t> expected_vocab_hash) {
  const auto manifest_path = dir / kManifest;
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError(manifest_path.string() + ": " + e.what());
  }

  Checkpoint c;
  try {
    if (m.at("format") != "bugrank-checkpoint")
      throw CorruptionError(manifest_path.string() + ": not a checkpoint manifest");
    const int version = m.at("version").get<int>();
    if (version != kCheckpointVersion)
      throw IncompatibleError("checkpoint version " + std::to_string(version) +
                              " is not supported (expected " +
                              std::to_string(kCheckpointVersion) + ")");
    c.step = m.at("step").get<std::uint64_t>();
    c.config = config_from_json(m.at("config"));
    c.config.validate();
    const auto vocab_size = m.at("vocab_size").get<std::size_t>();
    const auto hash = from_hex(m.at("vocab_hash").get<std::string>());
    if (expected_vocab_hash && *expected_vocab_hash != hash)
      throw IncompatibleError("checkpoint was trained against vocabulary " + to_hex(hash) +
                              " but the index has vocabulary " + to_hex(*expected_vocab_hash));
    const auto& norm = m.at("normalization");
    Normalization n{norm.at("mean").get<std::vector<double>>(),
                    norm.at("stddev").get<std::vector<double>>()};
    if (norm.at("fields").size() != kDenseDim)
      throw IncompatibleError("checkpoint uses a different dense feature layout");
    c.params = init_params(c.config, vocab_size, hash, std::move(n));
    c.optimizer = init_adagrad(c.params, 0.0);
    if (c.params.embedding_dim != m.at("embedding_dim").get<std::size_t>() ||
        c.params.use_dense != m.at("use_dense").get<bool>())
      throw CorruptionError(manifest_path.string() + ": shape fields disagree with config");

    const std::string weights = read_file(dir / kWeights);
    const auto& pl = m.at("payload");
    if (weights.size() != pl.at("bytes").get<std::size_t>() ||
        weights.size() != payload(c).size())
      throw CorruptionError((dir / kWeights).string() + ": payload has " +
                            std::to_string(weights.size()) + " bytes, expected " +
                            std::to_string(payload(c).size()));
    if (fnv1a(weights) != from_hex(pl.at("fnv1a").get<std::string>()))
      throw CorruptionError((dir / kWeights).string() + ": checksum mismatch");

    std::size_t pos = 0;
    const auto fill = [&](std::vector<double>& emb, std::vector<DenseLayer>& layers) {
      for (auto& v : emb) v = get(weights, pos);
      for (auto& l : layers) {
        for (auto& v : l.weight) v = get(weights, pos);
        for (auto& v : l.bias) v = get(weights, pos);
      }
    };
    fill(c.params.embedding, c.params.layers);
    fill(c.optimizer.embedding, c.optimizer.layers);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptionError(manifest_path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw CorruptionError(manifest_path.string() + ": malformed hex field");
  } catch (const std::out_of_range& e) {
    throw CorruptionError(manifest_path.string() + ": malformed hex field");
  } catch (const InvalidArgument& e) {
    throw CorruptionError(manifest_path.string() + ": " + e.what());
  }
  return c;
}

}  // namespace bugrank
