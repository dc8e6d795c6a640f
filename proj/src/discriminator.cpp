#include "layoutjudge/discriminator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "layoutjudge/error.hpp"

namespace layoutjudge {
namespace {

constexpr char kMagic[] = "layoutjudge-model";
constexpr int kFormatVersion = 1;

struct Masks {
  std::array<double, kLayoutFeatureCount> m1;
  std::array<double, kHidden1> m2;
};

void draw_masks(Masks& masks, Rng& rng) {
  for (auto& v : masks.m1) v = rng.uniform() < kDropout1 ? 0.0 : 1.0 / (1.0 - kDropout1);
  for (auto& v : masks.m2) v = rng.uniform() < kDropout2 ? 0.0 : 1.0 / (1.0 - kDropout2);
}

// Activations of one SM branch, kept for the backward pass.
struct Branch {
  std::array<double, kLayoutFeatureCount> x;  // input after dropout
  std::array<double, kHidden1> h;             // dense 1 after dropout
  std::array<double, kHidden2> pre;           // dense 2 before ReLU
  std::array<double, kHidden2> s;
};

void branch_forward(const double* w, const double* v, const Masks* masks, Branch& out) {
  for (std::size_t i = 0; i < kLayoutFeatureCount; ++i) out.x[i] = masks ? v[i] * masks->m1[i] : v[i];
  for (std::size_t o = 0; o < kHidden1; ++o) out.h[o] = w[kOffB1 + o];
  for (std::size_t i = 0; i < kLayoutFeatureCount; ++i) {
    const double xi = out.x[i];
    if (xi == 0.0) continue;
    const double* row = w + kOffW1 + i * kHidden1;
    for (std::size_t o = 0; o < kHidden1; ++o) out.h[o] += xi * row[o];
  }
  if (masks) {
    for (std::size_t o = 0; o < kHidden1; ++o) out.h[o] *= masks->m2[o];
  }
  for (std::size_t o = 0; o < kHidden2; ++o) out.pre[o] = w[kOffB2 + o];
  for (std::size_t i = 0; i < kHidden1; ++i) {
    const double hi = out.h[i];
    const double* row = w + kOffW2 + i * kHidden2;
    for (std::size_t o = 0; o < kHidden2; ++o) out.pre[o] += hi * row[o];
  }
  for (std::size_t o = 0; o < kHidden2; ++o) out.s[o] = std::max(0.0, out.pre[o]);
}

struct Forward {
  Branch a;
  Branch b;
  std::array<double, kJoined> z;
  double t;
};

void dm_forward_cached(const double* w, const double* graph, const double* va, const double* vb,
                       const Masks* masks, Forward& f) {
  branch_forward(w, va, masks, f.a);
  branch_forward(w, vb, masks, f.b);
  for (std::size_t o = 0; o < kHidden2; ++o) f.z[o] = f.a.s[o] - f.b.s[o];
  for (std::size_t o = 0; o < kAux; ++o) {
    double v = w[kOffBa + o];
    for (std::size_t i = 0; i < kGraphFeatureCount; ++i) v += graph[i] * w[kOffWa + i * kAux + o];
    f.z[kHidden2 + o] = v;
  }
  double pre = w[kOffBo];
  for (std::size_t i = 0; i < kJoined; ++i) pre += f.z[i] * w[kOffWo + i];
  f.t = std::tanh(pre);
}

// Accumulates the gradient of one branch given d(loss)/d(s).
void branch_backward(const double* w, const Branch& br, const Masks* masks,
                     const std::array<double, kHidden2>& ds, double* grad) {
  std::array<double, kHidden2> dpre;
  for (std::size_t o = 0; o < kHidden2; ++o) dpre[o] = br.pre[o] > 0.0 ? ds[o] : 0.0;
  std::array<double, kHidden1> dh{};
  for (std::size_t i = 0; i < kHidden1; ++i) {
    const double* row = w + kOffW2 + i * kHidden2;
    double* grow = grad + kOffW2 + i * kHidden2;
    double acc = 0.0;
    for (std::size_t o = 0; o < kHidden2; ++o) {
      grow[o] += br.h[i] * dpre[o];
      acc += row[o] * dpre[o];
    }
    dh[i] = masks ? acc * masks->m2[i] : acc;
  }
  for (std::size_t o = 0; o < kHidden2; ++o) grad[kOffB2 + o] += dpre[o];
  for (std::size_t o = 0; o < kHidden1; ++o) grad[kOffB1 + o] += dh[o];
  for (std::size_t i = 0; i < kLayoutFeatureCount; ++i) {
    const double xi = br.x[i];
    if (xi == 0.0) continue;
    double* grow = grad + kOffW1 + i * kHidden1;
    for (std::size_t o = 0; o < kHidden1; ++o) grow[o] += xi * dh[o];
  }
}

void check_dims(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                    std::to_string(n));
  }
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Standardization Standardization::identity() {
  Standardization s;
  s.layout_std.fill(1.0);
  s.active.fill(true);
  s.graph_std.fill(1.0);
  return s;
}

ModelParams init_model(std::uint64_t seed) {
  ModelParams m;
  Rng rng(seed);
  auto fill = [&](std::size_t offset, std::size_t fan_in, std::size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (std::size_t k = 0; k < fan_in * fan_out; ++k) m.weights[offset + k] = rng.uniform(-limit, limit);
  };
  fill(kOffW1, kLayoutFeatureCount, kHidden1);
  fill(kOffW2, kHidden1, kHidden2);
  fill(kOffWa, kGraphFeatureCount, kAux);
  fill(kOffWo, kJoined, 1);
  return m;
}

PairInput standardize(const Standardization& s, const FeatureVector& a, const FeatureVector& b) {
  PairInput p;
  for (std::size_t i = 0; i < kLayoutFeatureCount; ++i) {
    if (!s.active[i]) continue;
    p.a[i] = (a.layout[i] - s.layout_mean[i]) / s.layout_std[i];
    p.b[i] = (b.layout[i] - s.layout_mean[i]) / s.layout_std[i];
  }
  for (std::size_t i = 0; i < kGraphFeatureCount; ++i) {
    p.graph[i] = (a.graph[i] - s.graph_mean[i]) / s.graph_std[i];
  }
  return p;
}

std::array<double, kHidden2> sm_forward(const ModelParams& m, std::span<const double> v, Mode mode,
                                        Rng& rng) {
  check_dims(v, kLayoutFeatureCount, "layout feature vector");
  Masks masks;
  if (mode == Mode::kTrain) draw_masks(masks, rng);
  Branch br;
  branch_forward(m.weights.data(), v.data(), mode == Mode::kTrain ? &masks : nullptr, br);
  return br.s;
}

double dm_forward(const ModelParams& m, std::span<const double> graph, std::span<const double> a,
                  std::span<const double> b, Mode mode, Rng& rng) {
  check_dims(graph, kGraphFeatureCount, "graph feature vector");
  check_dims(a, kLayoutFeatureCount, "layout feature vector");
  check_dims(b, kLayoutFeatureCount, "layout feature vector");
  Masks masks;
  if (mode == Mode::kTrain) draw_masks(masks, rng);
  Forward f;
  dm_forward_cached(m.weights.data(), graph.data(), a.data(), b.data(),
                    mode == Mode::kTrain ? &masks : nullptr, f);
  return f.t;
}

double loss_and_gradient(const ModelParams& m, std::span<const PairInput> batch,
                         std::vector<double>* gradient, Rng* rng) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyInput, "empty batch");
  const double* w = m.weights.data();
  if (gradient) gradient->assign(kParamCount, 0.0);
  const double inv = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  Masks masks;
  Forward f;
  for (const auto& p : batch) {
    if (rng) draw_masks(masks, *rng);
    const Masks* mp = rng ? &masks : nullptr;
    dm_forward_cached(w, p.graph.data(), p.a.data(), p.b.data(), mp, f);
    const double err = f.t - p.t;
    loss += err * err * inv;
    if (!gradient) continue;
    double* g = gradient->data();
    const double dpre = 2.0 * err * inv * (1.0 - f.t * f.t);
    g[kOffBo] += dpre;
    std::array<double, kHidden2> ds;
    for (std::size_t i = 0; i < kJoined; ++i) g[kOffWo + i] += dpre * f.z[i];
    for (std::size_t o = 0; o < kHidden2; ++o) ds[o] = dpre * w[kOffWo + o];
    for (std::size_t o = 0; o < kAux; ++o) {
      const double da = dpre * w[kOffWo + kHidden2 + o];
      g[kOffBa + o] += da;
      for (std::size_t i = 0; i < kGraphFeatureCount; ++i) g[kOffWa + i * kAux + o] += p.graph[i] * da;
    }
    branch_backward(w, f.a, mp, ds, g);
    for (auto& v : ds) v = -v;
    branch_backward(w, f.b, mp, ds, g);
  }
  return loss;
}

Standardization fit_standardization(const TrainingSet& data,
                                    const std::array<bool, kLayoutFeatureCount>& active) {
  std::set<std::size_t> rows;
  for (const auto& p : data.pairs) {
    if (p.a >= data.features.size() || p.b >= data.features.size()) {
      throw Error(ErrorCode::kInvariantViolation, "pair references a missing feature row");
    }
    rows.insert(p.a);
    rows.insert(p.b);
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "no training pairs");
  Standardization s = Standardization::identity();
  s.active = active;
  const double n = static_cast<double>(rows.size());
  auto fit = [&](auto get, double& mean, double& sd, bool& constant) {
    double sum = 0.0;
    for (const auto r : rows) sum += get(data.features[r]);
    mean = sum / n;
    double var = 0.0;
    for (const auto r : rows) {
      const double d = get(data.features[r]) - mean;
      var += d * d;
    }
    sd = std::sqrt(var / n);
    constant = !(sd > 0.0);
    if (constant) sd = 1.0;
  };
  for (std::size_t i = 0; i < kLayoutFeatureCount; ++i) {
    fit([i](const FeatureVector& f) { return f.layout[i]; }, s.layout_mean[i], s.layout_std[i],
        s.layout_constant[i]);
  }
  for (std::size_t i = 0; i < kGraphFeatureCount; ++i) {
    fit([i](const FeatureVector& f) { return f.graph[i]; }, s.graph_mean[i], s.graph_std[i],
        s.graph_constant[i]);
  }
  return s;
}

TrainResult train(const TrainingSet& data, const TrainConfig& config) {
  if (data.pairs.empty()) throw Error(ErrorCode::kEmptyInput, "no training pairs");
  if (!(config.learning_rate > 0.0) || config.batch_size == 0 || config.epochs <= 0) {
    throw Error(ErrorCode::kInvariantViolation, "learning rate, batch size and epochs must be positive");
  }
  TrainResult result;
  result.model = init_model(Rng::derive(config.seed, 1));
  result.model.standardization = fit_standardization(data, config.active);

  std::vector<PairInput> inputs;
  inputs.reserve(data.pairs.size());
  for (const auto& p : data.pairs) {
    PairInput in = standardize(result.model.standardization, data.features[p.a], data.features[p.b]);
    in.t = p.t;
    inputs.push_back(in);
  }

  Rng order_rng(Rng::derive(config.seed, 2));
  Rng dropout_rng(Rng::derive(config.seed, 3));
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> velocity(kParamCount, 0.0);
  std::vector<double> grad;
  std::vector<PairInput> batch;
  auto& w = result.model.weights;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    order_rng.shuffle(order);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(inputs[order[k]]);
      total += loss_and_gradient(result.model, batch, &grad, &dropout_rng) * static_cast<double>(batch.size());
      for (std::size_t k = 0; k < kParamCount; ++k) {
        velocity[k] = config.momentum * velocity[k] - config.learning_rate * grad[k];
        w[k] += velocity[k];
      }
    }
    result.epoch_loss.push_back(total / static_cast<double>(inputs.size()));
  }
  return result;
}

Verdict predict(const ModelParams& m, const FeatureVector& a, const FeatureVector& b) {
  const PairInput in = standardize(m.standardization, a, b);
  Forward f;
  dm_forward_cached(m.weights.data(), in.graph.data(), in.a.data(), in.b.data(), nullptr, f);
  return verdict_from(f.t);
}

Verdict predict(const ModelParams& m, const Graph& g, const Layout& a, const Layout& b) {
  const DistanceMatrix hops = shortest_path_distances(g);
  return predict(m, feature_vector(g, hops, a), feature_vector(g, hops, b));
}

void save_model(const ModelParams& m, std::ostream& out) {
  std::ostringstream body;
  const auto& s = m.standardization;
  auto row = [&body](const char* name, const auto& values) {
    body << name;
    for (const auto v : values) {
      if constexpr (std::is_same_v<std::decay_t<decltype(v)>, bool>) {
        body << ' ' << (v ? 1 : 0);
      } else {
        body << ' ' << format_double(v);
      }
    }
    body << '\n';
  };
  body << kMagic << ' ' << kFormatVersion << '\n';
  body << "feature-hash " << hex64(m.feature_hash) << '\n';
  body << "params " << m.weights.size() << '\n';
  row("layout-mean", s.layout_mean);
  row("layout-std", s.layout_std);
  row("layout-constant", s.layout_constant);
  row("layout-active", s.active);
  row("graph-mean", s.graph_mean);
  row("graph-std", s.graph_std);
  row("graph-constant", s.graph_constant);
  row("weights", m.weights);
  const std::string text = body.str();
  out << text << "checksum " << hex64(fnv1a(text)) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "failed to write model");
}

void save_model(const ModelParams& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  save_model(m, out);
}

namespace {

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}

  std::istringstream expect(const std::string& key) {
    std::string line;
    if (!std::getline(in_, line)) throw Error(ErrorCode::kParseError, "model file ends before " + key);
    std::istringstream fields(line);
    std::string name;
    fields >> name;
    if (name != key) throw Error(ErrorCode::kParseError, "expected '" + key + "', found '" + name + "'");
    return fields;
  }

 private:
  std::istringstream in_;
};

double parse_double(const std::string& token) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kParseError, "bad number '" + token + "'");
  }
  return v;
}

template <class Array>
void read_row(LineReader& reader, const std::string& key, Array& values) {
  auto fields = reader.expect(key);
  std::string token;
  for (auto& v : values) {
    if (!(fields >> token)) throw Error(ErrorCode::kParseError, key + " has too few values");
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, bool>) {
      if (token != "0" && token != "1") throw Error(ErrorCode::kParseError, "bad flag in " + key);
      v = token == "1";
    } else {
      v = parse_double(token);
    }
  }
  if (fields >> token) throw Error(ErrorCode::kParseError, key + " has too many values");
}

}  // namespace

ModelParams load_model(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const std::string key = "checksum ";
  const auto at = text.rfind(key);
  if (at == std::string::npos || (at > 0 && text[at - 1] != '\n')) {
    throw Error(ErrorCode::kChecksumMismatch, "model file has no checksum line");
  }
  std::string stored = text.substr(at + key.size());
  while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
  const std::string body = text.substr(0, at);
  if (stored != hex64(fnv1a(body))) throw Error(ErrorCode::kChecksumMismatch, "model file is corrupted");

  LineReader reader(body);
  ModelParams m;
  {
    auto fields = reader.expect(kMagic);
    int version = 0;
    if (!(fields >> version)) throw Error(ErrorCode::kParseError, "missing format version");
    if (version != kFormatVersion) {
      throw Error(ErrorCode::kVersionMismatch, "model format version " + std::to_string(version) +
                                                   ", expected " + std::to_string(kFormatVersion));
    }
  }
  {
    auto fields = reader.expect("feature-hash");
    std::string hex;
    fields >> hex;
    if (hex != hex64(feature_order_hash())) {
      throw Error(ErrorCode::kVersionMismatch, "model was trained on a different feature order");
    }
    m.feature_hash = feature_order_hash();
  }
  {
    auto fields = reader.expect("params");
    std::size_t count = 0;
    fields >> count;
    if (count != kParamCount) {
      throw Error(ErrorCode::kVersionMismatch, "model has " + std::to_string(count) + " parameters");
    }
  }
  auto& s = m.standardization;
  read_row(reader, "layout-mean", s.layout_mean);
  read_row(reader, "layout-std", s.layout_std);
  read_row(reader, "layout-constant", s.layout_constant);
  read_row(reader, "layout-active", s.active);
  read_row(reader, "graph-mean", s.graph_mean);
  read_row(reader, "graph-std", s.graph_std);
  read_row(reader, "graph-constant", s.graph_constant);
  read_row(reader, "weights", m.weights);
  for (const double sd : s.layout_std) {
    if (!(sd > 0.0)) throw Error(ErrorCode::kParseError, "nonpositive stddev");
  }
  for (const double sd : s.graph_std) {
    if (!(sd > 0.0)) throw Error(ErrorCode::kParseError, "nonpositive stddev");
  }
  return m;
}

ModelParams load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return load_model(in);
}

}  // namespace layoutjudge
