#include "layoutjudge/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "layoutjudge/baselines.hpp"
#include "layoutjudge/corpus.hpp"
#include "layoutjudge/corruption.hpp"
#include "layoutjudge/discriminator.hpp"
#include "layoutjudge/error.hpp"
#include "layoutjudge/evaluation.hpp"
#include "layoutjudge/features.hpp"
#include "layoutjudge/generators.hpp"
#include "layoutjudge/io.hpp"
#include "layoutjudge/layout_engine.hpp"
#include "layoutjudge/simd/kernels.hpp"
#include "layoutjudge/syndromes.hpp"

namespace layoutjudge {
namespace {

namespace fs = std::filesystem;

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_key_values(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParseError, "expected key=value in " + path.string());
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

// Appends --key=value for config entries not already given as flags.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  }
  if (config.empty()) return args;
  for (const auto& [key, value] : read_key_values(config)) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (!given) args.push_back(flag + "=" + value);
  }
  return args;
}

// Resolved options of a subcommand, as key=value lines --config accepts.
void record_run(const CLI::App& app, const std::string& command, const fs::path& primary) {
  auto out = open_out(fs::path(primary.string() + ".run.txt"));
  out << "command=" << command << '\n';
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || opt->get_lnames().empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
    } else {
      value = opt->get_default_str();
      if (value.empty()) continue;
    }
    out << name << '=' << value << '\n';
  }
}

void print_verdict(std::ostream& out, const Verdict& v) {
  out << "verdict " << (v.prefers_a ? 'A' : 'B') << " score=" << number(v.t)
      << (v.zero_confidence ? " zero-confidence" : "") << '\n';
}

std::map<std::string, std::vector<double>> syndrome_values(const Graph& g, const Layout& raw) {
  const Layout l = normalize_layout(raw, g);
  std::map<std::string, std::vector<double>> s;
  const auto axes = principal_axes(l);
  s["PRINVEC1"] = {axes.v1.x, axes.v1.y};
  s["PRINVEC2"] = {axes.v2.x, axes.v2.y};
  auto pc = princomp(l);
  s["PRINCOMP1"] = std::move(pc.first);
  s["PRINCOMP2"] = std::move(pc.second);
  s["ANGULAR"] = angular(g, l);
  s["EDGE_LENGTH"] = edge_length(g, l);
  s["RDF_GLOBAL"] = rdf_global(l);
  s["TENSION"] = tension(g, l);
  for (int i = 0, d = 1; i < 10; ++i, d *= 2) s["RDF_LOCAL_" + std::to_string(d)] = rdf_local(g, l, d);
  for (auto& [name, values] : s) {
    if (name.rfind("PRINVEC", 0) != 0) std::sort(values.begin(), values.end());
  }
  return s;
}

void add_config_flag(CLI::App* cmd) {
  // merge_config has already spliced the file in; the value is only validated here
  cmd->add_option("--config", "key=value file supplying defaults for these flags")
      ->type_name("FILE")
      ->expected(1)
      ->check(CLI::Validator(CLI::ExistingFile).description(""));
}

struct Context {
  std::ostream& out;
  std::ostream& err;
};

// ---------------------------------------------------------------------------

void add_gen(CLI::App& root, Context& ctx) {
  auto* cmd = root.add_subcommand("gen", "Generate a graph (and its native layout)");
  auto kind = std::make_shared<std::string>();
  auto spec = std::make_shared<GeneratorSpec>();
  auto out_graph = std::make_shared<std::string>();
  auto out_layout = std::make_shared<std::string>();
  cmd->add_option("--kind", *kind, "GRID, TORUS1, TORUS2, LINDENMAYER, QUASI3D..QUASI6D, MOSAIC1, MOSAIC2, BOTTLE")
      ->required();
  cmd->add_option("--rows", spec->rows, "Grid and torus rows");
  cmd->add_option("--cols", spec->cols, "Grid and torus columns");
  cmd->add_option("--extent", spec->extent, "Lattice extent of QUASI kinds");
  cmd->add_option("--n", spec->target_n, "Target vertex count");
  cmd->add_option("--seed", spec->seed, "Seed")->capture_default_str();
  cmd->add_option("--out-graph", *out_graph, "Graph file")->required();
  cmd->add_option("--out-layout", *out_layout, "Native layout file");
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    spec->kind = parse_generator_kind(upper(*kind));
    if (!out_layout->empty() && !has_native_layout(spec->kind)) {
      throw CLI::ValidationError("--out-layout", to_string(spec->kind) + " has no native layout");
    }
    const auto gen = generate(*spec);
    write_graph(gen.graph, fs::path(*out_graph));
    if (!out_layout->empty()) write_layout(*gen.native, fs::path(*out_layout));
    record_run(*cmd, "gen", *out_graph);
    ctx.out << to_string(*spec) << " n=" << gen.graph.vertex_count() << " m=" << gen.graph.edge_count() << '\n';
  });
}

void add_layout(CLI::App& root, Context& ctx) {
  auto* cmd = root.add_subcommand("layout", "Compute a layout of a graph");
  auto algo = std::make_shared<std::string>();
  auto seed = std::make_shared<std::uint64_t>(0);
  auto iterations = std::make_shared<int>(0);
  auto graph = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--algo", *algo, "fdp, stress, uniform, normal or phantom")
      ->required()
      ->check(CLI::IsMember({"fdp", "stress", "uniform", "normal", "phantom"}));
  cmd->add_option("--seed", *seed, "Seed")->capture_default_str();
  cmd->add_option("--iterations", *iterations, "Iteration cap (0 keeps the algorithm default)")->capture_default_str();
  cmd->add_option("--graph", *graph, "Graph file")->required();
  cmd->add_option("--out", *out, "Layout file")->required();
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    const Graph g = read_graph(fs::path(*graph));
    Layout l;
    if (*algo == "fdp" || *algo == "stress") {
      auto params = *algo == "fdp" ? LayoutParams::force_directed(*seed) : LayoutParams::stress(*seed);
      if (*iterations > 0) params.iterations = *iterations;
      l = *algo == "fdp" ? layout_force_directed(g, params) : layout_stress_min(g, params);
    } else if (*algo == "phantom") {
      l = layout_phantom(g, *seed);
    } else {
      l = layout_random(g, *algo == "uniform" ? RandomDistribution::kUniform : RandomDistribution::kNormal, *seed);
    }
    l.graph_id = fs::path(*graph).stem().string();
    write_layout(l, fs::path(*out));
    record_run(*cmd, "layout", *out);
    ctx.out << to_string(l.provenance) << " n=" << l.size() << '\n';
  });
}

void add_worsen(CLI::App& root, Context& ctx) {
  auto* cmd = root.add_subcommand("worsen", "Degrade a layout");
  auto kind = std::make_shared<std::string>();
  auto spec = std::make_shared<WorsenSpec>();
  auto graph = std::make_shared<std::string>();
  auto layout = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--kind", *kind, "perturb, flip-nodes, flip-edges or movlsq")->required();
  cmd->add_option("--r", spec->r, "Amount in [0, 1]")->required()->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", spec->seed, "Seed")->capture_default_str();
  cmd->add_option("--graph", *graph, "Graph file")->required();
  cmd->add_option("--layout", *layout, "Layout file")->required();
  cmd->add_option("--out", *out, "Output layout file")->required();
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    spec->kind = parse_worsen_kind(upper(*kind));
    const Graph g = read_graph(fs::path(*graph));
    const Layout l = read_layout(fs::path(*layout), g);
    const Layout w = worsen(g, normalize_layout(l, g), *spec);
    write_layout(w, fs::path(*out));
    record_run(*cmd, "worsen", *out);
    ctx.out << to_string(w.provenance) << '\n';
  });
}

void add_syndromes(CLI::App& root, Context& ctx) {
  auto* cmd = root.add_subcommand("syndromes", "Write every quality syndrome of a layout as JSON");
  auto graph = std::make_shared<std::string>();
  auto layout = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--graph", *graph, "Graph file")->required();
  cmd->add_option("--layout", *layout, "Layout file")->required();
  cmd->add_option("--out", *out, "JSON file (standard output when omitted)");
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    const Graph g = read_graph(fs::path(*graph));
    const Layout l = read_layout(fs::path(*layout), g);
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [name, values] : syndrome_values(g, l)) doc[name] = values;
    const std::string text = doc.dump(1) + "\n";
    if (out->empty()) {
      ctx.out << text;
    } else {
      open_out(*out) << text;
      record_run(*cmd, "syndromes", *out);
    }
  });
}

void add_plot_rdf(CLI::App& root, Context& ctx) {
  auto* cmd = root.add_subcommand("plot-rdf", "Histogram CSV of a syndrome for one or more layouts");
  auto graph = std::make_shared<std::string>();
  auto layouts = std::make_shared<std::vector<std::string>>();
  auto syndrome = std::make_shared<std::string>("RDF_GLOBAL");
  auto bins = std::make_shared<std::size_t>(64);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--graph", *graph, "Graph file")->required();
  cmd->add_option("--layout", *layouts, "Layout file (repeatable)")->required()->delimiter(',');
  cmd->add_option("--syndrome", *syndrome, "RDF_GLOBAL, RDF_LOCAL_<d>, ANGULAR, EDGE_LENGTH, TENSION, PRINCOMP1, PRINCOMP2")
      ->capture_default_str();
  cmd->add_option("--bins", *bins, "Bin count")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--out", *out, "CSV file (standard output when omitted)");
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    const Graph g = read_graph(fs::path(*graph));
    std::ostringstream csv;
    csv << "layout,syndrome,bin,lo,hi,fraction\n";
    for (const auto& path : *layouts) {
      const auto values = syndrome_values(g, read_layout(fs::path(path), g));
      const auto it = values.find(upper(*syndrome));
      if (it == values.end()) throw Error(ErrorCode::kUnknownGroup, "unknown syndrome '" + *syndrome + "'");
      const auto& v = it->second;
      const auto hist = histogram(v, *bins);
      const double lo = *std::min_element(v.begin(), v.end());
      const double hi = *std::max_element(v.begin(), v.end());
      const double width = (hi - lo) / static_cast<double>(*bins);
      for (std::size_t b = 0; b < hist.size(); ++b) {
        csv << fs::path(path).stem().string() << ',' << it->first << ',' << b << ',' << number(lo + width * b) << ','
            << number(lo + width * (b + 1)) << ',' << number(hist[b]) << '\n';
      }
    }
    if (out->empty()) {
      ctx.out << csv.str();
    } else {
      open_out(*out) << csv.str();
      record_run(*cmd, "plot-rdf", *out);
    }
  });
}

void add_features(CLI::App& root, Context& ctx) {
  auto* cmd = root.add_subcommand("features", "Feature vectors of layouts of one graph as TSV");
  auto graph = std::make_shared<std::string>();
  auto layouts = std::make_shared<std::vector<std::string>>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--graph", *graph, "Graph file")->required();
  cmd->add_option("--layout", *layouts, "Layout file (repeatable)")->required()->delimiter(',');
  cmd->add_option("--out", *out, "TSV file (standard output when omitted)");
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    const Graph g = read_graph(fs::path(*graph));
    const DistanceMatrix hops = shortest_path_distances(g);
    std::vector<std::string> ids;
    std::vector<FeatureVector> rows;
    for (const auto& path : *layouts) {
      ids.push_back(fs::path(path).stem().string());
      rows.push_back(feature_vector(g, hops, read_layout(fs::path(path), g)));
    }
    if (out->empty()) {
      write_feature_table(ctx.out, ids, rows);
    } else {
      auto file = open_out(*out);
      write_feature_table(file, ids, rows);
      record_run(*cmd, "features", *out);
    }
  });
}

struct CorpusOptions {
  std::string out;
  std::uint64_t seed = 0;
  CorpusConfig config;
  std::string kinds;
  std::string ladder;
  std::string interpolation;
  std::string worsen_kinds;
};

void add_corpus(CLI::App& root, Context& ctx) {
  auto* corpus = root.add_subcommand("corpus", "Corpus operations");
  corpus->require_subcommand(1);
  auto* cmd = corpus->add_subcommand("build", "Build a labeled corpus");
  auto o = std::make_shared<CorpusOptions>();
  cmd->add_option("--out", o->out, "Output directory")->required();
  cmd->add_option("--seed", o->seed, "Master seed")->capture_default_str();
  cmd->add_option("--graphs", o->config.graph_count, "Graph count")->capture_default_str();
  cmd->add_option("--min-n", o->config.min_n, "Smallest target vertex count")->capture_default_str();
  cmd->add_option("--max-n", o->config.max_n, "Largest target vertex count")->capture_default_str();
  cmd->add_option("--kinds", o->kinds, "Comma-separated generator kinds (default: all)");
  cmd->add_option("--ladder", o->ladder, "Comma-separated worsening amounts");
  cmd->add_option("--interpolation", o->interpolation, "Comma-separated interpolation amounts");
  cmd->add_option("--worsen-kinds", o->worsen_kinds, "Comma-separated worsening kinds");
  cmd->add_option("--t-min", o->config.augment.t_min, "Smallest |t| kept")->capture_default_str();
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    std::string text;
    if (!o->kinds.empty()) text += "kinds=" + upper(o->kinds) + "\n";
    if (!o->ladder.empty()) text += "ladder=" + o->ladder + "\n";
    if (!o->interpolation.empty()) text += "interpolation=" + o->interpolation + "\n";
    if (!o->worsen_kinds.empty()) text += "worsen_kinds=" + upper(o->worsen_kinds) + "\n";
    std::istringstream extra(to_string(o->config) + text);
    const CorpusConfig config = parse_corpus_config(extra);
    const Corpus c = build_corpus(config, o->seed);
    save_corpus(c, o->out);
    record_run(*cmd, "corpus build", fs::path(o->out) / "manifest.txt");
    ctx.out << "graphs=" << c.graphs.size() << " layouts=" << c.layouts.size() << " pairs=" << c.pairs.size() << '\n';
  });
}

struct TrainOptions {
  std::string corpus;
  std::string out;
  std::string method = "model";
  TrainConfig train;
  std::vector<std::string> only;
  std::vector<std::string> exclude;
  int restarts = 10;
  int iterations = 200;
};

void add_train_flags(CLI::App* cmd, TrainOptions& o) {
  cmd->add_option("--epochs", o.train.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--learning-rate", o.train.learning_rate, "SGD learning rate")->capture_default_str();
  cmd->add_option("--momentum", o.train.momentum, "SGD momentum")->capture_default_str();
  cmd->add_option("--batch-size", o.train.batch_size, "Mini-batch size")->capture_default_str();
}

std::array<bool, kLayoutFeatureCount> mask_from(const TrainOptions& o) {
  if (!o.only.empty() && !o.exclude.empty()) throw CLI::ValidationError("--only and --exclude are exclusive");
  if (!o.only.empty()) return ablation_mask(AblationMode::kOnly, o.only);
  return ablation_mask(AblationMode::kExclude, o.exclude);
}

void add_train(CLI::App& root, Context& ctx) {
  auto* cmd = root.add_subcommand("train", "Train a discriminator on every pair of a corpus");
  auto o = std::make_shared<TrainOptions>();
  cmd->add_option("--corpus", o->corpus, "Corpus directory")->required();
  cmd->add_option("--out", o->out, "Model (or COMB weights) file")->required();
  cmd->add_option("--method", o->method, "model or comb")->capture_default_str()->check(CLI::IsMember({"model", "comb"}));
  cmd->add_option("--seed", o->train.seed, "Seed")->capture_default_str();
  add_train_flags(cmd, *o);
  cmd->add_option("--only", o->only, "Use only these syndrome groups")->delimiter(',');
  cmd->add_option("--exclude", o->exclude, "Drop these syndrome groups")->delimiter(',');
  cmd->add_option("--restarts", o->restarts, "COMB Nelder-Mead restarts")->capture_default_str();
  cmd->add_option("--iterations", o->iterations, "COMB Nelder-Mead iterations")->capture_default_str();
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    Corpus c = load_corpus(o->corpus);
    std::vector<std::size_t> all(c.pairs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (o->method == "comb") {
      compute_baseline_inputs(c);
      std::vector<CombPair> pairs;
      for (const auto& p : c.pairs) pairs.push_back({c.metrics[p.a], c.metrics[p.b], p.t});
      const CombWeights w = comb_fit_weights(pairs, {o->restarts, o->iterations, o->train.seed});
      auto file = open_out(o->out);
      write_comb_weights(w, file);
      ctx.out << "training accuracy " << number(comb_training_accuracy(w, pairs)) << '\n';
    } else {
      TrainConfig config = o->train;
      config.active = mask_from(*o);
      TrainingSet data;
      data.features = c.features;
      for (const auto& p : c.pairs) data.pairs.push_back({p.a, p.b, p.t});
      const auto result = train(data, config);
      save_model(result.model, fs::path(o->out));
      auto loss = open_out(fs::path(o->out + ".loss.tsv"));
      loss << "epoch\tloss\n";
      for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) loss << e + 1 << '\t' << number(result.epoch_loss[e]) << '\n';
      ctx.out << "final training loss " << number(result.epoch_loss.back()) << '\n';
    }
    record_run(*cmd, "train", o->out);
  });
}

struct EvalOptions {
  std::string corpus;
  std::string out;
  std::string csv;
  std::vector<std::string> methods{"model", "stress", "comb"};
  CrossValidationConfig cv;
  TrainOptions train;
  std::string mode = "only";
  std::vector<std::string> groups;
  bool each = false;
};

void add_cv_flags(CLI::App* cmd, EvalOptions& o) {
  cmd->add_option("--corpus", o.corpus, "Corpus directory")->required();
  cmd->add_option("--rounds", o.cv.rounds, "Random subsampling rounds")->capture_default_str();
  cmd->add_option("--test-fraction", o.cv.test_fraction, "Share of graphs held out per round")->capture_default_str();
  cmd->add_option("--seed", o.cv.seed, "Seed")->capture_default_str();
  cmd->add_option("--out", o.out, "Text table file (standard output when omitted)");
  cmd->add_option("--csv", o.csv, "CSV table file");
  add_train_flags(cmd, o.train);
}

void emit_reports(const std::vector<EvalReport>& reports, const EvalOptions& o, const CLI::App& cmd,
                  const std::string& name, Context& ctx) {
  std::ostringstream table;
  write_eval_table(table, reports);
  if (o.out.empty()) {
    ctx.out << table.str();
  } else {
    open_out(o.out) << table.str();
  }
  if (!o.csv.empty()) {
    auto csv = open_out(o.csv);
    write_eval_csv(csv, reports);
  }
  if (!o.out.empty()) record_run(cmd, name, o.out);
  else if (!o.csv.empty()) record_run(cmd, name, o.csv);
}

void add_eval(CLI::App& root, Context& ctx) {
  auto* cmd = root.add_subcommand("eval", "Cross-validated accuracy of the model and the baselines");
  auto o = std::make_shared<EvalOptions>();
  add_cv_flags(cmd, *o);
  cmd->add_option("--methods", o->methods, "Any of model, stress, comb, oracle, coin")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember({"model", "stress", "comb", "oracle", "coin"}));
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    Corpus c = load_corpus(o->corpus);
    const bool baselines = std::any_of(o->methods.begin(), o->methods.end(),
                                       [](const std::string& m) { return m == "stress" || m == "comb"; });
    if (baselines) compute_baseline_inputs(c);
    std::vector<EvalReport> reports;
    for (const auto& m : o->methods) {
      if (m == "model") reports.push_back(cross_validate(c, model_method(o->train.train), o->cv, "model"));
      if (m == "stress") reports.push_back(cross_validate(c, stress_method(), o->cv, "STRESS"));
      if (m == "comb") reports.push_back(cross_validate(c, comb_method(), o->cv, "COMB"));
      if (m == "oracle") reports.push_back(cross_validate(c, oracle_method(), o->cv, "oracle"));
      if (m == "coin") reports.push_back(cross_validate(c, coin_flip_method(), o->cv, "coin-flip"));
    }
    emit_reports(reports, *o, *cmd, "eval", ctx);
  });
}

void add_ablate(CLI::App& root, Context& ctx) {
  auto* cmd = root.add_subcommand("ablate", "Retrain with syndrome groups kept or removed");
  auto o = std::make_shared<EvalOptions>();
  add_cv_flags(cmd, *o);
  cmd->add_option("--mode", o->mode, "only or exclude")->capture_default_str()->check(CLI::IsMember({"only", "exclude"}));
  cmd->add_option("--group", o->groups, "Syndrome group (repeatable; listed groups are ablated together)")
      ->delimiter(',');
  cmd->add_flag("--each", o->each, "Ablate every syndrome group in turn");
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    if (o->each == !o->groups.empty()) throw CLI::ValidationError("give either --group or --each");
    const Corpus c = load_corpus(o->corpus);
    const AblationMode mode = o->mode == "only" ? AblationMode::kOnly : AblationMode::kExclude;
    std::vector<EvalReport> reports;
    reports.push_back(cross_validate(c, model_method(o->train.train), o->cv, "all syndromes"));
    if (o->each) {
      for (const auto& g : syndrome_groups()) {
        const std::vector<std::string> one = {g};
        reports.push_back(ablation(c, mode, one, o->train.train, o->cv));
      }
    } else {
      reports.push_back(ablation(c, mode, o->groups, o->train.train, o->cv));
    }
    emit_reports(reports, *o, *cmd, "ablate", ctx);
  });
}

void add_compare(CLI::App& root, Context& ctx) {
  auto* cmd = root.add_subcommand("compare", "Decide which of two layouts is better");
  auto method = std::make_shared<std::string>("model");
  auto graph = std::make_shared<std::string>();
  auto a = std::make_shared<std::string>();
  auto b = std::make_shared<std::string>();
  auto model = std::make_shared<std::string>();
  auto weights = std::make_shared<std::string>();
  cmd->add_option("--method", *method, "model, stress or comb")
      ->capture_default_str()
      ->check(CLI::IsMember({"model", "stress", "comb"}));
  cmd->add_option("--graph", *graph, "Graph file")->required();
  cmd->add_option("--layout-a", *a, "First layout")->required();
  cmd->add_option("--layout-b", *b, "Second layout")->required();
  cmd->add_option("--model", *model, "Model file (method model)");
  cmd->add_option("--weights", *weights, "COMB weights file (method comb)");
  add_config_flag(cmd);
  cmd->callback([=, &ctx] {
    if (*method == "model" && model->empty()) throw CLI::RequiredError("--model");
    if (*method == "comb" && weights->empty()) throw CLI::RequiredError("--weights");
    const Graph g = read_graph(fs::path(*graph));
    const Layout la = read_layout(fs::path(*a), g);
    const Layout lb = read_layout(fs::path(*b), g);
    Verdict v;
    if (*method == "stress") {
      v = stress_discriminate(shortest_path_distances(g), la, lb);
    } else if (*method == "comb") {
      auto in = open_in(*weights);
      v = comb_discriminate(read_comb_weights(in), g, la, lb);
    } else {
      v = predict(load_model(fs::path(*model)), g, la, lb);
    }
    print_verdict(ctx.out, v);
  });
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Judge which of two layouts of a graph looks better", "layoutjudge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("layoutjudge 1.0 (") +
                                        std::string(simd::isa_name(simd::kernels().isa)) + " kernels)");
  Context ctx{out, err};
  add_gen(app, ctx);
  add_layout(app, ctx);
  add_worsen(app, ctx);
  add_syndromes(app, ctx);
  add_plot_rdf(app, ctx);
  add_features(app, ctx);
  add_corpus(app, ctx);
  add_train(app, ctx);
  add_eval(app, ctx);
  add_ablate(app, ctx);
  add_compare(app, ctx);

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const CLI::App* sub = &app; sub != nullptr;) {
      const auto subs = sub->get_subcommands();
      sub = subs.empty() ? nullptr : subs.front();
      if (sub) failed = sub;
    }
    err << failed->help();
    return 1;
  } catch (const Error& e) {
    std::string message = e.what();
    const std::string prefix = std::string(error_code_name(e.code())) + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    err << "error[" << error_code_name(e.code()) << "]: " << message << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error[Internal]: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace layoutjudge
