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

#include "padmm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "padmm/errors.hpp"
#include "padmm/rng.hpp"

namespace padmm {

namespace {

constexpr int kAdultFieldCount = 15;  // 14 attributes + income label
constexpr int kExpectedAdultDim = 104;

// Attribute kinds in UCI Adult schema order.  education-num (index 4) is a
// numeric duplicate of education and is excluded from the encoding.
enum class Kind { kContinuous, kCategorical, kDropped };
constexpr Kind kAdultKinds[14] = {
    Kind::kContinuous,   // age
    Kind::kCategorical,  // workclass
    Kind::kContinuous,   // fnlwgt
    Kind::kCategorical,  // education
    Kind::kDropped,      // education-num
    Kind::kCategorical,  // marital-status
    Kind::kCategorical,  // occupation
    Kind::kCategorical,  // relationship
    Kind::kCategorical,  // race
    Kind::kCategorical,  // sex
    Kind::kContinuous,   // capital-gain
    Kind::kContinuous,   // capital-loss
    Kind::kContinuous,   // hours-per-week
    Kind::kCategorical,  // native-country
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& row) {
  std::vector<std::string> fields;
  std::stringstream ss(row);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  return fields;
}

double parse_number(const std::string& s, std::size_t row_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("adult row " + std::to_string(row_no) + ": not a number: '" + s + "'");
  }
}

int parse_label(std::string s, std::size_t row_no) {
  if (!s.empty() && s.back() == '.') s.pop_back();  // adult.test style
  if (s == ">50K") return 1;
  if (s == "<=50K") return -1;
  throw ParseError("adult row " + std::to_string(row_no) + ": unknown label '" + s + "'");
}

void scale_columns_to_unit_max(Dataset& data) {
  if (data.samples.empty()) return;
  std::vector<double> col_max(static_cast<std::size_t>(data.dim), 0.0);
  for (const auto& s : data.samples) {
    for (int j = 0; j < data.dim; ++j) {
      col_max[static_cast<std::size_t>(j)] =
          std::max(col_max[static_cast<std::size_t>(j)],
                   std::fabs(s.features[static_cast<std::size_t>(j)]));
    }
  }
  for (auto& s : data.samples) {
    for (int j = 0; j < data.dim; ++j) {
      double m = col_max[static_cast<std::size_t>(j)];
      if (m > 0.0) s.features[static_cast<std::size_t>(j)] /= m;
    }
  }
}

void scale_rows_into_unit_ball(Dataset& data) {
  for (auto& s : data.samples) {
    double norm_sq = 0.0;
    for (double x : s.features) norm_sq += x * x;
    double norm = std::sqrt(norm_sq);
    if (norm > 1.0) {
      for (double& x : s.features) x /= norm;
    }
  }
}

}  // namespace

Dataset preprocess_adult(const std::vector<std::string>& raw_rows) {
  // First pass: parse fields, drop rows with missing values, learn the
  // category vocabularies (sorted for a deterministic column order).
  struct ParsedRow {
    std::vector<std::string> fields;
  };
  std::vector<ParsedRow> kept;
  std::vector<std::map<std::string, int>> vocab(14);
  for (std::size_t idx = 0; idx < raw_rows.size(); ++idx) {
    const std::size_t row_no = idx + 1;
    std::vector<std::string> fields = split_fields(raw_rows[idx]);
    if (fields.size() != kAdultFieldCount) {
      throw ParseError("adult row " + std::to_string(row_no) + ": expected " +
                       std::to_string(kAdultFieldCount) + " fields, got " +
                       std::to_string(fields.size()));
    }
    bool missing = false;
    for (const auto& f : fields) {
      if (f == "?") {
        missing = true;
        break;
      }
    }
    if (missing) continue;
    for (int a = 0; a < 14; ++a) {
      if (kAdultKinds[a] == Kind::kCategorical) {
        vocab[static_cast<std::size_t>(a)].emplace(fields[static_cast<std::size_t>(a)], 0);
      }
    }
    kept.push_back({std::move(fields)});
  }
  // Assign one-hot offsets per attribute.
  int dim = 0;
  std::vector<int> attr_offset(14, -1);
  for (int a = 0; a < 14; ++a) {
    attr_offset[static_cast<std::size_t>(a)] = dim;
    switch (kAdultKinds[a]) {
      case Kind::kContinuous:
        dim += 1;
        break;
      case Kind::kCategorical: {
        auto& v = vocab[static_cast<std::size_t>(a)];
        int pos = 0;
        for (auto& [_, slot] : v) slot = pos++;
        dim += pos;
        break;
      }
      case Kind::kDropped:
        break;
    }
  }

  Dataset out;
  out.dim = dim;
  out.samples.reserve(kept.size());
  std::size_t row_no = 0;
  for (const auto& row : kept) {
    ++row_no;
    Sample s;
    s.features.assign(static_cast<std::size_t>(dim), 0.0);
    for (int a = 0; a < 14; ++a) {
      const std::string& f = row.fields[static_cast<std::size_t>(a)];
      const int off = attr_offset[static_cast<std::size_t>(a)];
      switch (kAdultKinds[a]) {
        case Kind::kContinuous:
          s.features[static_cast<std::size_t>(off)] = parse_number(f, row_no);
          break;
        case Kind::kCategorical:
          s.features[static_cast<std::size_t>(off + vocab[static_cast<std::size_t>(a)].at(f))] = 1.0;
          break;
        case Kind::kDropped:
          break;
      }
    }
    s.label = parse_label(row.fields[14], row_no);
    out.samples.push_back(std::move(s));
  }

  scale_columns_to_unit_max(out);
  scale_rows_into_unit_ball(out);
  return out;
}

namespace {

void read_adult_file(const std::filesystem::path& path, std::vector<std::string>& rows) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open adult file: " + path.string());
  }
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '|') continue;  // adult.test banner line
    rows.push_back(std::move(t));
  }
}

}  // namespace

Dataset load_adult(const std::filesystem::path& data_path,
                   const std::filesystem::path& test_path) {
  std::vector<std::string> rows;
  read_adult_file(data_path, rows);
  read_adult_file(test_path, rows);
  Dataset d = preprocess_adult(rows);
  if (d.dim != kExpectedAdultDim) {
    std::cerr << "warning: adult encoding produced d=" << d.dim << " (expected "
              << kExpectedAdultDim << "); proceeding\n";
  }
  return d;
}

Dataset generate_synthetic(int n_samples, int dim, std::uint64_t seed,
                           double label_noise, std::vector<double>* separator_out) {
  if (n_samples < 1) throw ParameterError("generate_synthetic: n_samples must be >= 1");
  if (dim < 1) throw ParameterError("generate_synthetic: dim must be >= 1");
  if (label_noise < 0.0 || label_noise > 1.0) {
    throw ParameterError("generate_synthetic: label_noise must be in [0,1]");
  }

  std::normal_distribution<double> normal(0.0, 1.0);

  auto sep_rng = substream(seed, Stream::kSeparator);
  std::vector<double> separator(static_cast<std::size_t>(dim));
  double sep_norm_sq = 0.0;
  for (double& x : separator) {
    x = normal(sep_rng);
    sep_norm_sq += x * x;
  }
  double sep_norm = std::sqrt(sep_norm_sq);
  if (sep_norm > 0.0) {
    for (double& x : separator) x /= sep_norm;
  } else {
    separator[0] = 1.0;
  }

  auto feat_rng = substream(seed, Stream::kSynthetic);
  auto flip_rng = substream(seed, Stream::kLabelNoise);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Dataset out;
  out.dim = dim;
  out.samples.resize(static_cast<std::size_t>(n_samples));
  for (auto& s : out.samples) {
    s.features.resize(static_cast<std::size_t>(dim));
    double norm_sq = 0.0;
    for (double& x : s.features) {
      x = normal(feat_rng);
      norm_sq += x * x;
    }
    double norm = std::sqrt(norm_sq);
    if (norm > 1.0) {
      for (double& x : s.features) x /= norm;
    }
    double margin = std::inner_product(s.features.begin(), s.features.end(),
                                       separator.begin(), 0.0);
    s.label = margin >= 0.0 ? 1 : -1;
    if (label_noise > 0.0 && unit(flip_rng) < label_noise) s.label = -s.label;
  }

  if (separator_out != nullptr) *separator_out = std::move(separator);
  return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& all, std::uint64_t seed,
                                             double test_fraction) {
  if (test_fraction < 0.0 || test_fraction >= 1.0) {
    throw ParameterError("split_train_test: test_fraction must be in [0,1)");
  }
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  auto rng = substream(seed, Stream::kSplit);
  std::shuffle(order.begin(), order.end(), rng);

  const auto test_count =
      static_cast<std::size_t>(static_cast<double>(all.size()) * test_fraction + 0.5);
  Dataset train, test;
  train.dim = test.dim = all.dim;
  train.samples.reserve(all.size() - test_count);
  test.samples.reserve(test_count);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Sample& s = all.samples[order[i]];
    if (i < all.size() - test_count) {
      train.samples.push_back(s);
    } else {
      test.samples.push_back(s);
    }
  }
  return {std::move(train), std::move(test)};
}

std::vector<NodePartition> partition_even(const Dataset& data, const Graph& g,
                                          std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (data.size() < n) {
    throw PartitionError("cannot partition " + std::to_string(data.size()) +
                         " samples over " + std::to_string(n) + " nodes");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  auto rng = substream(seed, Stream::kShuffle);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t base = data.size() / n;
  const std::size_t extra = data.size() % n;
  std::vector<NodePartition> parts(n);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m_i = base + (i < extra ? 1 : 0);
    NodePartition& p = parts[i];
    p.node_id = static_cast<int>(i);
    p.dim = data.dim;
    p.features.reserve(m_i * static_cast<std::size_t>(data.dim));
    p.labels.reserve(m_i);
    for (std::size_t j = 0; j < m_i; ++j) {
      const Sample& s = data.samples[order[cursor++]];
      if (static_cast<int>(s.features.size()) != data.dim) {
        throw ShapeError("sample dimension mismatch while partitioning");
      }
      p.features.insert(p.features.end(), s.features.begin(), s.features.end());
      p.labels.push_back(s.label);
    }
  }
  return parts;
}

void write_cache(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open cache file for writing: " + path.string());
  }
  out << "d=" << data.dim << " n=" << data.size() << "\n";
  char buf[32];
  for (const auto& s : data.samples) {
    out << s.label;
    for (double x : s.features) {
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

Dataset read_cache(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open cache file: " + path.string());
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw ParseError("cache file " + path.string() + " is empty");
  }
  int dim = 0;
  std::size_t count = 0;
  if (std::sscanf(header.c_str(), "d=%d n=%zu", &dim, &count) != 2 || dim < 1) {
    throw ParseError("cache file " + path.string() + ": bad header '" + header + "'");
  }
  Dataset out;
  out.dim = dim;
  out.samples.reserve(count);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream ss(line);
    Sample s;
    if (!(ss >> s.label) || (s.label != 1 && s.label != -1)) {
      throw ParseError("cache file " + path.string() + ":" + std::to_string(line_no) +
                       ": bad label");
    }
    s.features.resize(static_cast<std::size_t>(dim));
    for (double& x : s.features) {
      if (!(ss >> x)) {
        throw ParseError("cache file " + path.string() + ":" + std::to_string(line_no) +
                         ": expected " + std::to_string(dim) + " features");
      }
    }
    out.samples.push_back(std::move(s));
  }
  if (out.size() != count) {
    throw ParseError("cache file " + path.string() + ": header says n=" +
                     std::to_string(count) + " but found " + std::to_string(out.size()));
  }
  return out;
}

}  // namespace padmm
