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

#ifndef PCMI_CLI_CONFIG_H_
#define PCMI_CLI_CONFIG_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

namespace pcmi {

// Experiment configuration in INI form: `key = value` lines, optionally
// grouped under `[block]` headers, with `#` or `;` comment lines. Values are
// read through typed accessors that record which keys were used; any key
// left unused after parsing is reported as an error.
class Config {
 public:
  static Config FromString(const std::string& text);
  static Config FromFile(const std::string& path);
  // Rebuilds a config from the echo stored in a report.
  static Config FromEcho(const nlohmann::json& echo);

  bool Has(const std::string& block, const std::string& key) const;

  // Accessors. `block` is empty for top-level keys. Missing keys without a
  // default raise Error(kConfig).
  std::string String(const std::string& block, const std::string& key,
                     std::optional<std::string> fallback = std::nullopt);
  double Double(const std::string& block, const std::string& key,
                std::optional<double> fallback = std::nullopt);
  int Int(const std::string& block, const std::string& key,
          std::optional<int> fallback = std::nullopt);
  int64_t Int64(const std::string& block, const std::string& key,
                std::optional<int64_t> fallback = std::nullopt);
  bool Bool(const std::string& block, const std::string& key,
            std::optional<bool> fallback = std::nullopt);
  // Comma-separated lists.
  std::vector<double> DoubleList(const std::string& block, const std::string& key,
                                 std::optional<std::vector<double>> fallback = std::nullopt);
  std::vector<int> IntList(const std::string& block, const std::string& key,
                           std::optional<std::vector<int>> fallback = std::nullopt);
  // Semicolon-separated groups of comma-separated numbers.
  std::vector<std::vector<double>> Tuples(const std::string& block,
                                          const std::string& key,
                                          size_t arity);

  // Throws Error(kConfig) naming every key that no accessor consumed.
  void RequireAllConsumed() const;

  // {block: {key: value}} with top-level keys under "".
  nlohmann::json Echo() const;

 private:
  explicit Config(boost::property_tree::ptree tree);

  std::optional<std::string> Raw(const std::string& block,
                                 const std::string& key);

  boost::property_tree::ptree tree_;
  std::set<std::string> consumed_;
};

}  // namespace pcmi

#endif  // PCMI_CLI_CONFIG_H_
