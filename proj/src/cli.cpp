#include <fstream>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "bugrank/checkpoint.hpp"
#include "bugrank/cli.hpp"
#include "bugrank/dataset.hpp"
#include "bugrank/dump_parser.hpp"
#include "bugrank/error.hpp"
#include "bugrank/pipeline.hpp"
#include "bugrank/service.hpp"
#include "bugrank/store.hpp"
#include "bugrank/train.hpp"

namespace bugrank {

namespace fs = std::filesystem;

namespace {

struct IngestArgs {
  std::string posts, users, comments, store;
};
struct IndexArgs {
  std::string store, out;
};
struct DatasetArgs {
  std::string store, index, out;
  DatasetConfig config;
};
struct TrainArgs {
  std::string dataset, out, preset = "exp1", features;
  std::vector<std::size_t> layers;
  std::optional<double> lr, dropout, temperature;
  std::optional<std::size_t> batch, steps, checkpoint_every, list_size, embedding_dim;
  std::optional<std::uint64_t> seed;
};
struct EvalArgs {
  std::string model, dataset, scorer = "model", split = "test";
  bool json = false;
};
struct QueryArgs {
  std::string model, index, store, text;
  std::size_t k = 10;
  std::size_t breadth = 10;
  bool json = false;
};
struct ServeArgs {
  std::string model, index, store, host = "127.0.0.1";
  int port = 8080;
  std::size_t breadth = 10;
};

void print_stats(std::ostream& out, const char* kind, const ParseStats& s) {
  out << kind << ": rows=" << s.rows << " stored=" << s.emitted
      << " skipped_missing=" << s.skipped_missing << " skipped_post_type=" << s.skipped_post_type
      << " skipped_invalid=" << s.skipped_invalid << '\n';
}

int run_ingest(const IngestArgs& a, std::ostream& out) {
  StoreWriter writer(a.store);
  const auto ingest = [&](RowKind kind, const std::string& path, const char* label) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open");
    const auto stats = parse_rows(kind, in, [&](Record&& r) { writer.append(r); });
    print_stats(out, label, stats);
  };
  ingest(RowKind::Posts, a.posts, "posts");
  ingest(RowKind::Users, a.users, "users");
  if (!a.comments.empty()) ingest(RowKind::Comments, a.comments, "comments");
  const auto s = writer.finish();
  out << "store " << a.store << ": questions=" << s.questions << " answers=" << s.answers
      << " orphan_answers=" << s.orphan_answers << " users=" << s.users
      << " comments=" << s.comments << '\n';
  return kExitOk;
}

int run_index(const IndexArgs& a, std::ostream& out) {
  const StoreReader store(a.store);
  const auto index = build_question_index(store);
  index.save(a.out);
  out << "indexed " << index.size() << " questions, vocabulary " << index.vocabulary().size()
      << " terms, hash " << to_hex(index.vocabulary().hash()) << '\n';
  return kExitOk;
}

int run_dataset(const DatasetArgs& a, std::ostream& out) {
  const StoreReader store(a.store);
  const auto index = QuestionIndex::load(a.index);
  const auto ds = assemble_training_set(store, index, a.config);
  save_dataset(ds, a.out);
  const auto& m = ds.manifest;
  out << std::left << std::setw(10) << "" << std::setw(10) << "train" << std::setw(10) << "test"
      << "total\n";
  out << std::setw(10) << "queries" << std::setw(10) << m.queries_train << std::setw(10)
      << m.queries_test << m.queries_train + m.queries_test << '\n';
  out << std::setw(10) << "answers" << std::setw(10) << m.answers_train << std::setw(10)
      << m.answers_test << m.answers_train + m.answers_test << '\n';
  return kExitOk;
}

TrainConfig train_config(const TrainArgs& a) {
  auto c = preset(a.preset);
  if (!a.layers.empty()) c.layer_sizes = a.layers;
  if (a.lr) c.learning_rate = *a.lr;
  if (a.dropout) c.dropout_rate = *a.dropout;
  if (a.temperature) c.ndcg_temperature = *a.temperature;
  if (a.batch) c.batch_size = *a.batch;
  if (a.steps) c.steps = *a.steps;
  if (a.checkpoint_every) c.checkpoint_every = *a.checkpoint_every;
  if (a.list_size) c.list_size = *a.list_size;
  if (a.embedding_dim) c.embedding_dim = *a.embedding_dim;
  if (a.seed) c.seed = *a.seed;
  if (!a.features.empty()) c.features = feature_set_from_string(a.features);
  c.validate();
  return c;
}

int run_train(const TrainArgs& a, std::ostream& out) {
  const auto config = train_config(a);
  const auto ds = load_dataset(a.dataset);
  TrainInputs inputs{ds.train, ds.test, ds.manifest.vocabulary_size,
                     ds.manifest.vocabulary_hash};
  TrainHistory history;
  const auto write_history = [&] {
    std::ofstream h(fs::path(a.out) / "history.json", std::ios::trunc);
    h << history.to_json() << '\n';
  };
  const auto result = train(inputs, config, [&](const Checkpoint& c, const CheckpointRecord& r) {
    save_checkpoint(c, a.out);
    history.checkpoints.push_back(r);
    write_history();
    out << "step " << r.step << " loss " << std::fixed << std::setprecision(6) << r.train_loss
        << " ndcg@10 " << r.eval.ndcg[kMetricDepth - 1] << '\n';
  });
  save_checkpoint(result.final, a.out);
  out << "model " << model_version(result.final) << " written to " << a.out << '\n';
  return kExitOk;
}

int run_eval(const EvalArgs& a, std::ostream& out) {
  const auto ckpt = load_checkpoint(a.model);
  const auto ds = load_dataset(a.dataset);
  if (ds.manifest.vocabulary_hash != ckpt.params.vocab_hash)
    throw IncompatibleError("dataset vocabulary " + to_hex(ds.manifest.vocabulary_hash) +
                            " does not match the model's " + to_hex(ckpt.params.vocab_hash));
  std::vector<ExampleList> lists;
  for (const auto& l : a.split == "train" ? ds.train : ds.test)
    lists.push_back(fit_list(l, ckpt.config.list_size, ckpt.config.limits));
  MetricReport report;
  if (a.scorer == "oracle") {
    std::vector<std::vector<double>> scores;
    for (const auto& l : lists) {
      std::vector<double> s;
      for (const auto& c : l.candidates) s.push_back(c.label);
      scores.push_back(std::move(s));
    }
    report = evaluate_scores(lists, scores);
  } else {
    report = evaluate(ckpt.params, lists);
  }
  out << (a.json ? report.to_json() + "\n" : report.to_table());
  return kExitOk;
}

int run_query(const QueryArgs& a, std::ostream& out) {
  const auto engine = Engine::open(a.store, a.index, a.model, {a.breadth});
  const auto list = engine.recommend_text(a.text, a.k);
  if (a.json) {
    out << list.to_json() << '\n';
    return kExitOk;
  }
  if (list.status == RecommendStatus::NoMatch) {
    out << "no matching questions\n";
    return kExitOk;
  }
  std::size_t rank = 1;
  for (const auto& r : list.items) {
    out << std::setw(3) << rank++ << "  " << std::fixed << std::setprecision(4) << r.model_score
        << "  votes " << std::setw(5) << r.vote_score << "  " << r.url << "  "
        << r.question_title << '\n';
  }
  return kExitOk;
}

int run_serve(const ServeArgs& a, std::ostream& out) {
  const auto engine = Engine::open(a.store, a.index, a.model, {a.breadth});
  RecommendServer server(engine);
  const int port = server.bind(a.host, a.port);
  if (port < 0) throw IoError(a.host + ":" + std::to_string(a.port), "cannot bind");
  out << "serving model " << engine.version() << " on http://" << a.host << ':' << port
      << std::endl;
  return server.listen() ? kExitOk : kExitInternal;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ranks Stack Overflow answers for bug reports", "bugrank"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse dump XML files into a record store");
  ingest_cmd->add_option("--posts", ingest.posts, "Posts.xml")->required();
  ingest_cmd->add_option("--users", ingest.users, "Users.xml")->required();
  ingest_cmd->add_option("--comments", ingest.comments, "Comments.xml");
  ingest_cmd->add_option("--store", ingest.store, "Output store directory")->required();

  IndexArgs index;
  auto* index_cmd = app.add_subcommand("index", "Build the TF-IDF question index");
  index_cmd->add_option("--store", index.store)->required();
  index_cmd->add_option("--out", index.out, "Index file")->required();

  DatasetArgs dataset;
  auto* dataset_cmd = app.add_subcommand("dataset", "Assemble train/test ranking lists");
  dataset_cmd->add_option("--store", dataset.store)->required();
  dataset_cmd->add_option("--index", dataset.index)->required();
  dataset_cmd->add_option("--out", dataset.out)->required();
  dataset_cmd->add_option("--test-frac", dataset.config.test_fraction)->capture_default_str();
  dataset_cmd->add_option("--seed", dataset.config.seed)->capture_default_str();
  dataset_cmd->add_option("--list-size", dataset.config.list_size)->capture_default_str();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train the ranking model");
  train_cmd->add_option("--dataset", tr.dataset)->required();
  train_cmd->add_option("--out", tr.out, "Checkpoint directory")->required();
  train_cmd->add_option("--preset", tr.preset, "exp1, exp2 or exp3")->capture_default_str();
  train_cmd->add_option("--layers", tr.layers, "Hidden widths, e.g. 64,32,16")->delimiter(',');
  train_cmd->add_option("--lr", tr.lr);
  train_cmd->add_option("--dropout", tr.dropout);
  train_cmd->add_option("--batch", tr.batch);
  train_cmd->add_option("--steps", tr.steps);
  train_cmd->add_option("--checkpoint-every", tr.checkpoint_every);
  train_cmd->add_option("--list-size", tr.list_size);
  train_cmd->add_option("--embedding-dim", tr.embedding_dim);
  train_cmd->add_option("--temperature", tr.temperature, "ApproxNDCG temperature");
  train_cmd->add_option("--seed", tr.seed);
  train_cmd->add_option("--features", tr.features, "embedding or embedding+dense")
      ->check(CLI::IsMember({"embedding", "embedding+dense"}));

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Report ranking metrics on a dataset split");
  eval_cmd->add_option("--model", ev.model)->required();
  eval_cmd->add_option("--dataset", ev.dataset)->required();
  eval_cmd->add_option("--scorer", ev.scorer)->check(CLI::IsMember({"model", "oracle"}));
  eval_cmd->add_option("--split", ev.split)->check(CLI::IsMember({"train", "test"}));
  eval_cmd->add_flag("--json", ev.json);

  QueryArgs q;
  auto* query_cmd = app.add_subcommand("query", "Recommend answers for a bug description");
  query_cmd->add_option("--model", q.model)->required();
  query_cmd->add_option("--index", q.index)->required();
  query_cmd->add_option("--store", q.store)->required();
  query_cmd->add_option("--text", q.text)->required();
  query_cmd->add_option("--k", q.k)->capture_default_str();
  query_cmd->add_option("--breadth", q.breadth, "Questions retrieved")->capture_default_str();
  query_cmd->add_flag("--json", q.json);

  ServeArgs sv;
  auto* serve_cmd = app.add_subcommand("serve", "Serve recommendations over HTTP");
  serve_cmd->add_option("--model", sv.model)->required();
  serve_cmd->add_option("--index", sv.index)->required();
  serve_cmd->add_option("--store", sv.store)->required();
  serve_cmd->add_option("--host", sv.host)->capture_default_str();
  serve_cmd->add_option("--port", sv.port)->capture_default_str();
  serve_cmd->add_option("--breadth", sv.breadth)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ingest_cmd->parsed()) return run_ingest(ingest, out);
    if (index_cmd->parsed()) return run_index(index, out);
    if (dataset_cmd->parsed()) return run_dataset(dataset, out);
    if (train_cmd->parsed()) return run_train(tr, out);
    if (eval_cmd->parsed()) return run_eval(ev, out);
    if (query_cmd->parsed()) return run_query(q, out);
    if (serve_cmd->parsed()) return run_serve(sv, out);
  } catch (const InvalidArgument& e) {
    err << "bugrank: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "bugrank: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "bugrank: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace bugrank
