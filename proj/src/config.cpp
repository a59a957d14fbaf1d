#include "ncagc/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ncagc {
namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("'" + key + "' expects true/false, got '" + value + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

using Setter = std::function<void(TrainConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"dataset", [](TrainConfig& c, const auto&, const auto& v) { c.dataset = v; }},
      {"learning_rate", [](TrainConfig& c, const auto& k, const auto& v) { c.learning_rate = to_double(k, v); }},
      {"epochs", [](TrainConfig& c, const auto& k, const auto& v) { c.epochs = static_cast<int>(to_integer(k, v)); }},
      {"encoder_dims",
       [](TrainConfig& c, const auto& k, const auto& v) {
         c.encoder_dims.clear();
         std::stringstream ss(v);
         std::string part;
         while (std::getline(ss, part, ',')) {
           part = trim(part);
           if (!part.empty()) c.encoder_dims.push_back(static_cast<Index>(to_integer(k, part)));
         }
       }},
      {"gnn_kind", [](TrainConfig& c, const auto&, const auto& v) { c.gnn_kind = parse_layer_kind(v); }},
      {"activation", [](TrainConfig& c, const auto&, const auto& v) { c.activation = parse_activation(v); }},
      {"neighborhood_size", [](TrainConfig& c, const auto& k, const auto& v) { c.neighborhood_size = static_cast<int>(to_integer(k, v)); }},
      {"lambda_nbr", [](TrainConfig& c, const auto& k, const auto& v) { c.weights.nbr = to_double(k, v); }},
      {"lambda_cse", [](TrainConfig& c, const auto& k, const auto& v) { c.weights.cse = to_double(k, v); }},
      {"lambda_coef", [](TrainConfig& c, const auto& k, const auto& v) { c.weights.coef = to_double(k, v); }},
      {"knn_source",
       [](TrainConfig& c, const auto& k, const auto& v) {
         if (v == "latent") c.knn_source = KnnSource::latent;
         else if (v == "attributes") c.knn_source = KnnSource::attributes;
         else throw ConfigError("'" + k + "' must be latent or attributes");
       }},
      {"knn_refresh_every", [](TrainConfig& c, const auto& k, const auto& v) { c.knn_refresh_every = static_cast<int>(to_integer(k, v)); }},
      {"energy_fraction", [](TrainConfig& c, const auto& k, const auto& v) { c.affinity.energy_fraction = to_double(k, v); }},
      {"rank_multiplier", [](TrainConfig& c, const auto& k, const auto& v) { c.affinity.rank_multiplier = static_cast<int>(to_integer(k, v)); }},
      {"smoothing", [](TrainConfig& c, const auto& k, const auto& v) { c.affinity.smoothing = to_bool(k, v); }},
      {"smoothing_power", [](TrainConfig& c, const auto& k, const auto& v) { c.affinity.smoothing_power = to_double(k, v); }},
      {"cse_mode",
       [](TrainConfig& c, const auto& k, const auto& v) {
         if (v == "contrastive") c.cse_mode = SelfExpressionMode::contrastive;
         else if (v == "plain") c.cse_mode = SelfExpressionMode::plain;
         else throw ConfigError("'" + k + "' must be contrastive or plain");
       }},
      {"nbr_enabled", [](TrainConfig& c, const auto& k, const auto& v) { c.nbr_enabled = to_bool(k, v); }},
      {"coef_norm", [](TrainConfig& c, const auto&, const auto& v) { c.coef_norm = parse_coef_norm(v); }},
      {"temperature", [](TrainConfig& c, const auto& k, const auto& v) { c.contrast.temperature = to_double(k, v); }},
      {"nbr_exclude_positives", [](TrainConfig& c, const auto& k, const auto& v) { c.contrast.exclude_positives_from_denominator = to_bool(k, v); }},
      {"normalization", [](TrainConfig& c, const auto&, const auto& v) { c.normalization = parse_normalization(v); }},
      {"seed", [](TrainConfig& c, const auto& k, const auto& v) { c.seed = static_cast<std::uint64_t>(to_integer(k, v)); }},
      {"eval_every", [](TrainConfig& c, const auto& k, const auto& v) { c.eval_every = static_cast<int>(to_integer(k, v)); }},
      {"kmeans_restarts", [](TrainConfig& c, const auto& k, const auto& v) { c.kmeans_restarts = static_cast<int>(to_integer(k, v)); }},
      {"adam_beta1", [](TrainConfig& c, const auto& k, const auto& v) { c.adam_beta1 = to_double(k, v); }},
      {"adam_beta2", [](TrainConfig& c, const auto& k, const auto& v) { c.adam_beta2 = to_double(k, v); }},
      {"adam_epsilon", [](TrainConfig& c, const auto& k, const auto& v) { c.adam_epsilon = to_double(k, v); }},
  };
  return table;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (neighborhood_size < 1) throw ConfigError("neighborhood_size (K) must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (weights.nbr < 0.0 || weights.cse < 0.0 || weights.coef < 0.0) {
    throw ConfigError("loss weights must be nonnegative");
  }
  if (encoder_dims.empty()) throw ConfigError("encoder_dims must list at least one layer");
  for (const Index d : encoder_dims) {
    if (d < 1) throw ConfigError("encoder_dims entries must be positive");
  }
  if (knn_refresh_every < 1) throw ConfigError("knn_refresh_every must be >= 1");
  if (eval_every < 0) throw ConfigError("eval_every must be >= 0");
  if (!(affinity.energy_fraction > 0.0 && affinity.energy_fraction <= 1.0)) {
    throw ConfigError("energy_fraction must lie in (0, 1]");
  }
  if (affinity.rank_multiplier < 1) throw ConfigError("rank_multiplier must be >= 1");
  if (!(affinity.smoothing_power > 0.0)) throw ConfigError("smoothing_power must be positive");
  if (!(contrast.temperature > 0.0)) throw ConfigError("temperature must be positive");
  if (kmeans_restarts < 1) throw ConfigError("kmeans_restarts must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw ConfigError("adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw ConfigError("adam_epsilon must be positive");
}

TrainConfig preset(const std::string& dataset) {
  TrainConfig c;
  c.dataset = dataset;
  if (dataset == "cora") {
    c.learning_rate = 1e-4;
    c.encoder_dims = {1024, 512};
    c.weights = {10.0, 10.0, 10.0};
    c.epochs = 400;
  } else if (dataset == "citeseer" || dataset == "citeseer-prose") {
    c.learning_rate = 1e-4;
    c.encoder_dims = {1024, 1024};
    c.weights = dataset == "citeseer" ? LossWeights{100.0, 1.0, 1.0} : LossWeights{10.0, 1.0, 1.0};
    c.epochs = 200;
  } else if (dataset == "wiki") {
    c.learning_rate = 1e-4;
    c.encoder_dims = {1024, 512};
    c.weights = {10.0, 1.0, 10.0};
    c.epochs = 300;
    c.normalization = AttributeNormalization::none;
  } else if (dataset == "acm") {
    c.learning_rate = 5e-4;
    c.encoder_dims = {1024, 512};
    c.weights = {100.0, 200.0, 3500.0};
    c.epochs = 200;
  } else if (dataset == "toy") {
    c.learning_rate = 1e-3;
    c.encoder_dims = {32, 16};
    c.weights = {1.0, 1.0, 1.0};
    c.neighborhood_size = 5;
    c.epochs = 30;
    c.affinity.rank_multiplier = 2;
  } else {
    throw ConfigError("no preset for dataset '" + dataset + "'");
  }
  c.neighborhood_size = dataset == "toy" ? 5 : 10;
  c.gnn_kind = LayerKind::attention;
  c.activation = Activation::prelu;
  return c;
}

std::vector<std::string> preset_names() {
  return {"cora", "citeseer", "citeseer-prose", "wiki", "acm", "toy"};
}

void apply_setting(TrainConfig& config, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(config, key, value);
}

TrainConfig parse_config(const std::string& text, TrainConfig base) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(base, trim(std::string_view(stripped).substr(0, eq)),
                  trim(std::string_view(stripped).substr(eq + 1)));
  }
  return base;
}

TrainConfig load_config(const std::filesystem::path& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

std::string to_text(const TrainConfig& c) {
  std::ostringstream out;
  std::string dims;
  for (std::size_t i = 0; i < c.encoder_dims.size(); ++i) {
    if (i > 0) dims += ",";
    dims += std::to_string(c.encoder_dims[i]);
  }
  const auto b = [](bool v) { return v ? "true" : "false"; };
  out << "dataset = " << c.dataset << '\n'
      << "learning_rate = " << format_double(c.learning_rate) << '\n'
      << "epochs = " << c.epochs << '\n'
      << "encoder_dims = " << dims << '\n'
      << "gnn_kind = " << to_string(c.gnn_kind) << '\n'
      << "activation = " << to_string(c.activation) << '\n'
      << "neighborhood_size = " << c.neighborhood_size << '\n'
      << "lambda_nbr = " << format_double(c.weights.nbr) << '\n'
      << "lambda_cse = " << format_double(c.weights.cse) << '\n'
      << "lambda_coef = " << format_double(c.weights.coef) << '\n'
      << "knn_source = " << to_string(c.knn_source) << '\n'
      << "knn_refresh_every = " << c.knn_refresh_every << '\n'
      << "energy_fraction = " << format_double(c.affinity.energy_fraction) << '\n'
      << "rank_multiplier = " << c.affinity.rank_multiplier << '\n'
      << "smoothing = " << b(c.affinity.smoothing) << '\n'
      << "smoothing_power = " << format_double(c.affinity.smoothing_power) << '\n'
      << "cse_mode = " << to_string(c.cse_mode) << '\n'
      << "nbr_enabled = " << b(c.nbr_enabled) << '\n'
      << "coef_norm = " << to_string(c.coef_norm) << '\n'
      << "temperature = " << format_double(c.contrast.temperature) << '\n'
      << "nbr_exclude_positives = " << b(c.contrast.exclude_positives_from_denominator) << '\n'
      << "normalization = " << to_string(c.normalization) << '\n'
      << "seed = " << c.seed << '\n'
      << "eval_every = " << c.eval_every << '\n'
      << "kmeans_restarts = " << c.kmeans_restarts << '\n'
      << "adam_beta1 = " << format_double(c.adam_beta1) << '\n'
      << "adam_beta2 = " << format_double(c.adam_beta2) << '\n'
      << "adam_epsilon = " << format_double(c.adam_epsilon) << '\n';
  return out.str();
}

std::string config_hash(const TrainConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : to_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_string(KnnSource source) {
  return source == KnnSource::latent ? "latent" : "attributes";
}

std::string to_string(SelfExpressionMode mode) {
  return mode == SelfExpressionMode::contrastive ? "contrastive" : "plain";
}

}  // namespace ncagc
