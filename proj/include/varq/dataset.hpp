// Copyright 2026 The varq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "varq/encoding.hpp"
#include "varq/errors.hpp"

namespace varq {

enum class Species { setosa, versicolor, virginica };

inline std::string_view species_name(Species s) {
  switch (s) {
    case Species::setosa:
      return "setosa";
    case Species::versicolor:
      return "versicolor";
    case Species::virginica:
      return "virginica";
  }
  return "?";
}

/// Case-insensitive, with or without the "Iris-" prefix.
inline std::optional<Species> parse_species(std::string_view text) {
  std::string s;
  for (char c : text) {
    s.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s.starts_with("iris-")) s.erase(0, 5);
  if (s == "setosa") return Species::setosa;
  if (s == "versicolor") return Species::versicolor;
  if (s == "virginica") return Species::virginica;
  return std::nullopt;
}

/// Parses "class0-vs-class1", e.g. "setosa-vs-versicolor".
inline std::pair<Species, Species> parse_task_name(std::string_view name) {
  const auto sep = name.find("-vs-");
  if (sep == std::string_view::npos) {
    throw TaskError("task must look like <species>-vs-<species>, got '" +
                    std::string(name) + "'");
  }
  const auto a = parse_species(name.substr(0, sep));
  const auto b = parse_species(name.substr(sep + 4));
  if (!a || !b) {
    throw TaskError("unknown species in task '" + std::string(name) + "'");
  }
  if (*a == *b) throw TaskError("task needs two distinct species");
  return {*a, *b};
}

/// Sepal length, sepal width, petal length, petal width (cm).
struct IrisRecord {
  std::array<double, 4> features{};
  Species species = Species::setosa;
};

/// Binary classification task; class0 samples carry label 0.
struct BinaryTask {
  Species class0 = Species::setosa;
  Species class1 = Species::versicolor;
  std::vector<FeatureVector> train;
  std::vector<FeatureVector> test;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

}  // namespace detail

/// Reads an Iris CSV: four numeric columns then the species. A first row
/// whose first field is not numeric is treated as a header.
inline std::vector<IrisRecord> load_iris(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open " + path.string());

  std::vector<IrisRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const auto fields = detail::split_csv(text);
    if (first) {
      first = false;
      if (!detail::parse_double(fields[0])) continue;
    }
    if (fields.size() != 5) {
      throw IngestionError("expected 5 columns, found " +
                               std::to_string(fields.size()),
                           line_no);
    }
    IrisRecord rec;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto v = detail::parse_double(fields[i]);
      if (!v || !std::isfinite(*v) || *v <= 0.0) {
        throw IngestionError("bad feature value '" + std::string(fields[i]) +
                                 "'",
                             line_no);
      }
      rec.features[i] = *v;
    }
    const auto species = parse_species(fields[4]);
    if (!species) {
      throw IngestionError("unknown species '" + std::string(fields[4]) + "'",
                           line_no);
    }
    rec.species = *species;
    records.push_back(rec);
  }
  if (records.empty()) throw IngestionError("no records in " + path.string());
  return records;
}

/// Stratified split: round(test_fraction * count) samples of each class go to
/// the test set after a shuffle seeded by `seed` (class0 first, then class1).
inline BinaryTask make_task(std::span<const IrisRecord> records,
                            Species class0, Species class1,
                            double test_fraction, std::uint64_t seed) {
  if (class0 == class1) throw TaskError("task needs two distinct species");
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw TaskError("test fraction must lie in [0, 1)");
  }
  std::vector<FeatureVector> members[2];
  for (const auto& r : records) {
    if (r.species != class0 && r.species != class1) continue;
    const ClassBit label =
        r.species == class0 ? ClassBit::zero : ClassBit::one;
    members[to_int(label)].push_back(
        FeatureVector{{r.features.begin(), r.features.end()}, label});
  }
  if (members[0].empty() || members[1].empty()) {
    throw TaskError("species " + std::string(species_name(class0)) + " or " +
                    std::string(species_name(class1)) +
                    " missing from the data");
  }
  if (members[0].size() != members[1].size()) {
    throw TaskError("species counts differ");
  }

  BinaryTask task{class0, class1, {}, {}};
  std::mt19937_64 rng(seed);
  for (auto& group : members) {
    std::shuffle(group.begin(), group.end(), rng);
    const auto held = static_cast<std::size_t>(
        std::lround(test_fraction * static_cast<double>(group.size())));
    task.test.insert(task.test.end(), group.begin(), group.begin() + held);
    task.train.insert(task.train.end(), group.begin() + held, group.end());
  }
  return task;
}

}  // namespace varq
