#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "uavspoof/channel.hpp"
#include "uavspoof/common.hpp"
#include "uavspoof/dataset.hpp"
#include "uavspoof/scenario.hpp"

namespace uavspoof {

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed for " + path);
}

namespace config_detail {

/// Context for line-precise messages: "<source>:<line>: key '<key>': ...".
struct Where {
  std::string source;
  std::string key;
  int line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(source + ":" + std::to_string(line) + ": key '" + key + "': " + what);
  }
};

inline Where where(const std::string& source, const std::string& key, const YAML::Node& n) {
  return {source, key, n.Mark().line + 1};
}

inline std::string scalar(const YAML::Node& n, const Where& w) {
  if (!n.IsScalar()) w.fail("expected a scalar value");
  return n.Scalar();
}

inline double as_double(const YAML::Node& n, const Where& w) {
  double v = 0.0;
  const std::string s = scalar(n, w);
  if (!parse_double(s, v)) w.fail("expected a number, got '" + s + "'");
  return v;
}

inline std::uint64_t as_u64(const YAML::Node& n, const Where& w) {
  const std::string s = scalar(n, w);
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    w.fail("expected a non-negative integer, got '" + s + "'");
  return v;
}

inline bool as_bool(const YAML::Node& n, const Where& w) {
  const std::string s = scalar(n, w);
  if (s == "true" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "no" || s == "off") return false;
  w.fail("expected true or false, got '" + s + "'");
}

inline Vec3 as_vec3(const YAML::Node& n, const Where& w) {
  if (!n.IsSequence() || n.size() != 3) w.fail("expected a 3-element list [x, y, h]");
  return {as_double(n[0], w), as_double(n[1], w), as_double(n[2], w)};
}

inline std::vector<BaseStation> as_stations(const YAML::Node& n, const Where& w) {
  if (!n.IsSequence()) w.fail("expected a list of {id, position}");
  std::vector<BaseStation> out;
  for (const auto& item : n) {
    const Where iw{w.source, w.key, item.Mark().line + 1};
    if (!item.IsMap() || !item["id"] || !item["position"]) iw.fail("each entry needs id and position");
    out.push_back({static_cast<int>(as_u64(item["id"], iw)), as_vec3(item["position"], iw)});
  }
  return out;
}

using Handler = std::function<void(const YAML::Node&, const Where&)>;

/// Applies handlers to a flat YAML map, rejecting unknown keys.
inline void apply(const std::string& text, const std::string& source, const std::map<std::string, Handler>& handlers) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) return;
  if (!root.IsMap()) throw Error(source + ":1: expected a key: value mapping");
  for (const auto& kv : root) {
    const std::string key = kv.first.Scalar();
    const Where w = where(source, key, kv.first);
    auto it = handlers.find(key);
    if (it == handlers.end()) w.fail("unknown key");
    it->second(kv.second, w);
  }
}

inline void emit_vec3(YAML::Emitter& out, const Vec3& v) {
  out << YAML::Flow << YAML::BeginSeq << format_double(v.x()) << format_double(v.y()) << format_double(v.z())
      << YAML::EndSeq;
}

inline std::map<std::string, Handler> scenario_handlers(ScenarioConfig& c, ChannelParams& p) {
  return {
      {"base_stations", [&c](const YAML::Node& n, const Where& w) { c.base_stations = as_stations(n, w); }},
      {"start", [&c](const YAML::Node& n, const Where& w) { c.start = as_vec3(n, w); }},
      {"mission_radius_m", [&c](const YAML::Node& n, const Where& w) { c.mission_radius = as_double(n, w); }},
      {"n_destinations", [&c](const YAML::Node& n, const Where& w) { c.n_destinations = as_u64(n, w); }},
      {"carrier_frequency_ghz",
       [&c, &p](const YAML::Node& n, const Where& w) { c.carrier_frequency = p.carrier_frequency = as_double(n, w); }},
      {"window_size", [&c](const YAML::Node& n, const Where& w) { c.window_size = as_u64(n, w); }},
      {"rng_seed", [&c, &p](const YAML::Node& n, const Where& w) { c.rng_seed = p.rng_seed = as_u64(n, w); }},
      {"sample_period_s", [&c](const YAML::Node& n, const Where& w) { c.sample_period = as_double(n, w); }},
      {"nlos_shadow_sigma_db", [&p](const YAML::Node& n, const Where& w) { p.nlos_shadow_sigma = as_double(n, w); }},
      {"los_shadow_formula", [&p](const YAML::Node& n, const Where& w) { p.los_shadow_formula = as_bool(n, w); }},
      {"meas_noise_sigma_db", [&p](const YAML::Node& n, const Where& w) { p.measurement_noise = as_double(n, w); }},
      {"los_mode",
       [&p](const YAML::Node& n, const Where& w) {
         const std::string s = scalar(n, w);
         if (s == "deterministic") p.los_mode = LosMode::kDeterministic;
         else if (s == "sampled") p.los_mode = LosMode::kSampled;
         else w.fail("expected deterministic or sampled, got '" + s + "'");
       }},
  };
}

inline void emit_scenario(YAML::Emitter& out, const ScenarioConfig& c, const ChannelParams& p) {
  out << YAML::Key << "base_stations" << YAML::Value << YAML::BeginSeq;
  for (const auto& bs : c.base_stations) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << bs.id << YAML::Key << "position"
        << YAML::Value;
    emit_vec3(out, bs.position);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "start" << YAML::Value;
  emit_vec3(out, c.start);
  out << YAML::Key << "mission_radius_m" << YAML::Value << format_double(c.mission_radius);
  out << YAML::Key << "n_destinations" << YAML::Value << c.n_destinations;
  out << YAML::Key << "carrier_frequency_ghz" << YAML::Value << format_double(c.carrier_frequency);
  out << YAML::Key << "window_size" << YAML::Value << c.window_size;
  out << YAML::Key << "rng_seed" << YAML::Value << c.rng_seed;
  out << YAML::Key << "sample_period_s" << YAML::Value << format_double(c.sample_period);
  out << YAML::Key << "nlos_shadow_sigma_db" << YAML::Value << format_double(p.nlos_shadow_sigma);
  out << YAML::Key << "los_shadow_formula" << YAML::Value << YAML::TrueFalseBool << p.los_shadow_formula;
  out << YAML::Key << "meas_noise_sigma_db" << YAML::Value << format_double(p.measurement_noise);
  out << YAML::Key << "los_mode" << YAML::Value
      << (p.los_mode == LosMode::kSampled ? "sampled" : "deterministic");
}

}  // namespace config_detail

/// Scenario plus channel settings as read from one config file.
struct SimulationConfig {
  ScenarioConfig scenario = default_config();
  ChannelParams channel;
};

/// Missing keys keep their defaults.
inline SimulationConfig parse_config(const std::string& text, const std::string& source = "<config>") {
  SimulationConfig cfg;
  cfg.channel.carrier_frequency = cfg.scenario.carrier_frequency;
  config_detail::apply(text, source, config_detail::scenario_handlers(cfg.scenario, cfg.channel));
  return cfg;
}

inline SimulationConfig load_config(const std::string& path) { return parse_config(read_file(path), path); }

inline std::string emit_config(const ScenarioConfig& c, const ChannelParams& p) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  config_detail::emit_scenario(out, c, p);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

/// `extra` handles keys beyond the spec itself (sidecar integrity fields).
inline DatasetSpec parse_spec(const std::string& text, const std::string& source = "<spec>",
                              std::map<std::string, config_detail::Handler> extra = {}) {
  using config_detail::Where;
  DatasetSpec s;
  auto handlers = config_detail::scenario_handlers(s.scenario, s.channel);
  handlers.merge(extra);
  handlers["method"] = [&s](const YAML::Node& n, const Where& w) {
    try {
      s.method = parse_feature_method(config_detail::scalar(n, w));
    } catch (const Error& e) {
      w.fail(e.what());
    }
  };
  handlers["wd_operands"] = [&s](const YAML::Node& n, const Where& w) {
    const std::string v = config_detail::scalar(n, w);
    if (v == "measured_vs_theoretical") s.wd_operands = WdOperands::kMeasuredVsTheoretical;
    else if (v == "delta_vs_zero") s.wd_operands = WdOperands::kDeltaVsZero;
    else w.fail("expected measured_vs_theoretical or delta_vs_zero, got '" + v + "'");
  };
  handlers["n_bs"] = [&s](const YAML::Node& n, const Where& w) {
    s.n_bs = static_cast<int>(config_detail::as_u64(n, w));
  };
  handlers["train_size"] = [&s](const YAML::Node& n, const Where& w) { s.train_size = config_detail::as_u64(n, w); };
  handlers["test_size"] = [&s](const YAML::Node& n, const Where& w) { s.test_size = config_detail::as_u64(n, w); };
  handlers["dataset_seed"] = [&s](const YAML::Node& n, const Where& w) { s.rng_seed = config_detail::as_u64(n, w); };
  config_detail::apply(text, source, handlers);
  return s;
}

inline DatasetSpec load_spec(const std::string& path) { return parse_spec(read_file(path), path); }

inline void emit_spec_fields(YAML::Emitter& out, const DatasetSpec& s) {
  config_detail::emit_scenario(out, s.scenario, s.channel);
  out << YAML::Key << "method" << YAML::Value << std::string(to_string(s.method));
  out << YAML::Key << "wd_operands" << YAML::Value
      << (s.wd_operands == WdOperands::kDeltaVsZero ? "delta_vs_zero" : "measured_vs_theoretical");
  out << YAML::Key << "n_bs" << YAML::Value << s.n_bs;
  out << YAML::Key << "train_size" << YAML::Value << s.train_size;
  out << YAML::Key << "test_size" << YAML::Value << s.test_size;
  out << YAML::Key << "dataset_seed" << YAML::Value << s.rng_seed;
}

inline std::string emit_spec(const DatasetSpec& s) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  emit_spec_fields(out, s);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

/// Provenance hash: SHA-256 of the canonical spec text.
inline std::string spec_hash(const DatasetSpec& s) { return sha256_hex(emit_spec(s)); }

}  // namespace uavspoof
