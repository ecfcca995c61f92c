// Copyright 2026 The padmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "padmm/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "padmm/errors.hpp"

namespace padmm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw ConfigError("config key '" + key + "': expected " + expected + ", got '" + value +
                    "'");
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) bad_value(key, value, "a number");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, value, "a number");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size()) bad_value(key, value, "an integer");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, value, "an integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size() || value.front() == '-') bad_value(key, value, "a nonnegative integer");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, value, "a nonnegative integer");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  bad_value(key, value, "a boolean (true/false/on/off/1/0)");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value,
               int line_no) {
  if (key == "dataset") {
    cfg.dataset = value;
  } else if (key == "synthetic_samples") {
    cfg.synthetic_samples = static_cast<int>(parse_int(key, value));
  } else if (key == "synthetic_dim") {
    cfg.synthetic_dim = static_cast<int>(parse_int(key, value));
  } else if (key == "label_noise") {
    cfg.label_noise = parse_double(key, value);
  } else if (key == "adult_data") {
    cfg.adult_data = value;
  } else if (key == "adult_test") {
    cfg.adult_test = value;
  } else if (key == "adult_cache") {
    cfg.adult_cache = value;
  } else if (key == "topology") {
    cfg.topology = value;
  } else if (key == "topology_file") {
    cfg.topology_file = value;
  } else if (key == "n") {
    cfg.n = static_cast<int>(parse_int(key, value));
  } else if (key == "rho") {
    cfg.rho = parse_double(key, value);
  } else if (key == "lambda") {
    cfg.lambda = parse_double(key, value);
  } else if (key == "domain_diameter") {
    cfg.domain_diameter = parse_double(key, value);
  } else if (key == "t") {
    cfg.t = static_cast<int>(parse_int(key, value));
  } else if (key == "l") {
    cfg.l_values.clear();
    for (const auto& item : split_list(value)) {
      cfg.l_values.push_back(static_cast<int>(parse_int(key, item)));
    }
  } else if (key == "projection") {
    cfg.projection = parse_bool(key, value);
  } else if (key == "minibatch") {
    cfg.minibatch = static_cast<int>(parse_int(key, value));
  } else if (key == "epsilon") {
    cfg.epsilons.clear();
    for (const auto& item : split_list(value)) {
      cfg.epsilons.push_back(parse_double(key, item));
    }
  } else if (key == "delta") {
    cfg.delta = parse_double(key, value);
  } else if (key == "noise") {
    cfg.noise_enabled = parse_bool(key, value);
  } else if (key == "c0") {
    cfg.c0 = parse_double(key, value);
  } else if (key == "c2") {
    cfg.c2 = parse_double(key, value);
  } else if (key == "seeds") {
    cfg.seeds.clear();
    for (const auto& item : split_list(value)) {
      cfg.seeds.push_back(parse_u64(key, item));
    }
  } else if (key == "data_seed") {
    cfg.data_seed = parse_u64(key, value);
  } else if (key == "test_fraction") {
    cfg.test_fraction = parse_double(key, value);
  } else if (key == "beta") {
    cfg.beta = parse_double(key, value);
  } else if (key == "oracle_tol") {
    cfg.oracle_tol = parse_double(key, value);
  } else if (key == "report_broadcasts") {
    cfg.report_broadcasts = parse_bool(key, value);
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else {
    throw ConfigError("unknown config key '" + key + "' (line " + std::to_string(line_no) +
                      ")");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dataset != "synthetic" && dataset != "adult") {
    throw ConfigError("config key 'dataset': must be synthetic or adult");
  }
  if (dataset == "synthetic") {
    if (synthetic_samples < 1) throw ConfigError("config key 'synthetic_samples': must be >= 1");
    if (synthetic_dim < 1) throw ConfigError("config key 'synthetic_dim': must be >= 1");
    if (label_noise < 0.0 || label_noise > 1.0) {
      throw ConfigError("config key 'label_noise': must be in [0,1]");
    }
  } else if (adult_cache.empty()) {
    throw ConfigError("config key 'adult_cache': required when dataset = adult");
  }
  if (topology != "complete" && topology != "ring" && topology != "file") {
    throw ConfigError("config key 'topology': must be complete, ring, or file");
  }
  if (topology == "file" && topology_file.empty()) {
    throw ConfigError("config key 'topology_file': required when topology = file");
  }
  if (topology != "file" && n < 2) throw ConfigError("config key 'n': must be >= 2");
  if (!(rho > 0.0)) throw ConfigError("config key 'rho': must be > 0");
  if (!(lambda > 0.0)) {
    throw ConfigError("config key 'lambda': must be > 0 (the excess-risk oracle needs a "
                      "unique minimizer)");
  }
  if (!(domain_diameter > 0.0)) throw ConfigError("config key 'domain_diameter': must be > 0");
  if (t < 1) throw ConfigError("config key 't': must be >= 1");
  if (l_values.empty()) throw ConfigError("config key 'l': list must be nonempty");
  for (int l : l_values) {
    if (l < 1) throw ConfigError("config key 'l': entries must be >= 1");
  }
  if (minibatch < 0) throw ConfigError("config key 'minibatch': must be >= 0");
  if (epsilons.empty()) throw ConfigError("config key 'epsilon': list must be nonempty");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw ConfigError("config key 'epsilon': entries must be > 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("config key 'delta': must be in (0,1)");
  if (c0 < 0.0) throw ConfigError("config key 'c0': must be >= 0 (0 selects the default)");
  if (c2 < 0.0) throw ConfigError("config key 'c2': must be >= 0 (0 selects the derived value)");
  if (seeds.empty()) throw ConfigError("config key 'seeds': list must be nonempty");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("config key 'test_fraction': must be in (0,1)");
  }
  if (!(oracle_tol > 0.0)) throw ConfigError("config key 'oracle_tol': must be > 0");
  if (out_dir.empty()) throw ConfigError("config key 'out_dir': must be nonempty");
}

std::string ExperimentConfig::echo() const {
  std::ostringstream out;
  out << "dataset = " << dataset << '\n';
  out << "synthetic_samples = " << synthetic_samples << '\n';
  out << "synthetic_dim = " << synthetic_dim << '\n';
  out << "label_noise = " << fmt(label_noise) << '\n';
  out << "adult_data = " << adult_data << '\n';
  out << "adult_test = " << adult_test << '\n';
  out << "adult_cache = " << adult_cache << '\n';
  out << "topology = " << topology << '\n';
  out << "topology_file = " << topology_file << '\n';
  out << "n = " << n << '\n';
  out << "rho = " << fmt(rho) << '\n';
  out << "lambda = " << fmt(lambda) << '\n';
  out << "domain_diameter = " << fmt(domain_diameter) << '\n';
  out << "t = " << t << '\n';
  out << "l = ";
  for (std::size_t i = 0; i < l_values.size(); ++i) out << (i ? "," : "") << l_values[i];
  out << '\n';
  out << "projection = " << (projection ? "true" : "false") << '\n';
  out << "minibatch = " << minibatch << '\n';
  out << "epsilon = ";
  for (std::size_t i = 0; i < epsilons.size(); ++i) out << (i ? "," : "") << fmt(epsilons[i]);
  out << '\n';
  out << "delta = " << fmt(delta) << '\n';
  out << "noise = " << (noise_enabled ? "true" : "false") << '\n';
  out << "c0 = " << fmt(c0) << '\n';
  out << "c2 = " << fmt(c2) << '\n';
  out << "seeds = ";
  for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
  out << '\n';
  out << "data_seed = " << data_seed << '\n';
  out << "test_fraction = " << fmt(test_fraction) << '\n';
  out << "beta = " << fmt(beta) << '\n';
  out << "oracle_tol = " << fmt(oracle_tol) << '\n';
  out << "report_broadcasts = " << (report_broadcasts ? "true" : "false") << '\n';
  out << "out_dir = " << out_dir << '\n';
  return out.str();
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    apply_key(cfg, key, value, line_no);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace padmm
