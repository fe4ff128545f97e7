// Copyright 2026 The pcmi Authors.
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

#include "pcmi/cli/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>

#include "pcmi/core/error.h"

namespace pcmi {
namespace {

std::string Path(const std::string& block, const std::string& key) {
  return block.empty() ? key : block + "." + key;
}

[[noreturn]] void Fail(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

double ParseDouble(const std::string& text, const std::string& where) {
  const std::string t = boost::algorithm::trim_copy(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    Fail("'" + where + "' expects a number, got '" + text + "'");
  }
  return value;
}

int64_t ParseInt(const std::string& text, const std::string& where) {
  const std::string t = boost::algorithm::trim_copy(text);
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    Fail("'" + where + "' expects an integer, got '" + text + "'");
  }
  return value;
}

std::vector<std::string> Split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    boost::algorithm::trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

Config::Config(boost::property_tree::ptree tree) : tree_(std::move(tree)) {}

Config Config::FromString(const std::string& text) {
  std::istringstream in(text);
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    Fail(std::string("malformed config: ") + e.what());
  }
  return Config(std::move(tree));
}

Config Config::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromString(buffer.str());
}

Config Config::FromEcho(const nlohmann::json& echo) {
  if (!echo.is_object()) Fail("config echo must be an object");
  boost::property_tree::ptree tree;
  for (const auto& [block, entries] : echo.items()) {
    if (!entries.is_object()) Fail("config echo block must be an object");
    for (const auto& [key, value] : entries.items()) {
      if (!value.is_string()) Fail("config echo values must be strings");
      tree.put(boost::property_tree::ptree::path_type(Path(block, key), '.'),
               value.get<std::string>());
    }
  }
  return Config(std::move(tree));
}

bool Config::Has(const std::string& block, const std::string& key) const {
  return tree_.get_optional<std::string>(
             boost::property_tree::ptree::path_type(Path(block, key), '.'))
      .has_value();
}

std::optional<std::string> Config::Raw(const std::string& block,
                                       const std::string& key) {
  const std::string path = Path(block, key);
  auto value = tree_.get_optional<std::string>(
      boost::property_tree::ptree::path_type(path, '.'));
  if (!value) return std::nullopt;
  consumed_.insert(path);
  return boost::algorithm::trim_copy(*value);
}

std::string Config::String(const std::string& block, const std::string& key,
                           std::optional<std::string> fallback) {
  if (auto raw = Raw(block, key)) return *raw;
  if (fallback) return *fallback;
  Fail("missing required key '" + Path(block, key) + "'");
}

double Config::Double(const std::string& block, const std::string& key,
                      std::optional<double> fallback) {
  if (auto raw = Raw(block, key)) return ParseDouble(*raw, Path(block, key));
  if (fallback) return *fallback;
  Fail("missing required key '" + Path(block, key) + "'");
}

int64_t Config::Int64(const std::string& block, const std::string& key,
                      std::optional<int64_t> fallback) {
  if (auto raw = Raw(block, key)) return ParseInt(*raw, Path(block, key));
  if (fallback) return *fallback;
  Fail("missing required key '" + Path(block, key) + "'");
}

int Config::Int(const std::string& block, const std::string& key,
                std::optional<int> fallback) {
  const int64_t value = Int64(block, key, fallback);
  if (value < INT32_MIN || value > INT32_MAX) {
    Fail("'" + Path(block, key) + "' is out of range");
  }
  return static_cast<int>(value);
}

bool Config::Bool(const std::string& block, const std::string& key,
                  std::optional<bool> fallback) {
  if (auto raw = Raw(block, key)) {
    if (*raw == "true" || *raw == "1" || *raw == "yes") return true;
    if (*raw == "false" || *raw == "0" || *raw == "no") return false;
    Fail("'" + Path(block, key) + "' expects true or false");
  }
  if (fallback) return *fallback;
  Fail("missing required key '" + Path(block, key) + "'");
}

std::vector<double> Config::DoubleList(const std::string& block,
                                       const std::string& key,
                                       std::optional<std::vector<double>> fallback) {
  if (auto raw = Raw(block, key)) {
    std::vector<double> values;
    for (const std::string& item : Split(*raw, ',')) {
      values.push_back(ParseDouble(item, Path(block, key)));
    }
    if (values.empty()) Fail("'" + Path(block, key) + "' must not be empty");
    return values;
  }
  if (fallback) return *fallback;
  Fail("missing required key '" + Path(block, key) + "'");
}

std::vector<int> Config::IntList(const std::string& block, const std::string& key,
                                 std::optional<std::vector<int>> fallback) {
  if (auto raw = Raw(block, key)) {
    std::vector<int> values;
    for (const std::string& item : Split(*raw, ',')) {
      values.push_back(static_cast<int>(ParseInt(item, Path(block, key))));
    }
    if (values.empty()) Fail("'" + Path(block, key) + "' must not be empty");
    return values;
  }
  if (fallback) return *fallback;
  Fail("missing required key '" + Path(block, key) + "'");
}

std::vector<std::vector<double>> Config::Tuples(const std::string& block,
                                                const std::string& key,
                                                size_t arity) {
  std::vector<std::vector<double>> tuples;
  auto raw = Raw(block, key);
  if (!raw) return tuples;
  for (const std::string& group : Split(*raw, ';')) {
    std::vector<double> tuple;
    for (const std::string& item : Split(group, ',')) {
      tuple.push_back(ParseDouble(item, Path(block, key)));
    }
    if (tuple.size() != arity) {
      Fail("'" + Path(block, key) + "' expects groups of " +
           std::to_string(arity) + " numbers");
    }
    tuples.push_back(std::move(tuple));
  }
  return tuples;
}

void Config::RequireAllConsumed() const {
  std::vector<std::string> unknown;
  for (const auto& [name, child] : tree_) {
    if (child.empty()) {
      if (!consumed_.count(name)) unknown.push_back(name);
      continue;
    }
    for (const auto& [key, leaf] : child) {
      const std::string path = name + "." + key;
      if (!consumed_.count(path)) unknown.push_back(path);
    }
  }
  if (!unknown.empty()) {
    std::string message = "unknown config key(s):";
    for (const std::string& key : unknown) message += " '" + key + "'";
    Fail(message);
  }
}

nlohmann::json Config::Echo() const {
  nlohmann::json echo = nlohmann::json::object();
  for (const auto& [name, child] : tree_) {
    if (child.empty()) {
      echo[""][name] = child.data();
    } else {
      for (const auto& [key, leaf] : child) echo[name][key] = leaf.data();
    }
  }
  return echo;
}

}  // namespace pcmi
