#pragma once

#include "salem/config.hpp"

#include <json.hpp>

#include <string>

namespace salem {

// Writes JSON and CSV artifacts under <output>/<command>/, each stamped with
// the config hash and the bump-profile hash.
class ReportWriter {
 public:
  ReportWriter(const RunConfig& cfg, const std::string& command);
  void json(const std::string& name, const nlohmann::ordered_json& body) const;
  void csv(const std::string& name, const std::string& body) const;
  const std::string& dir() const { return dir_; }
  const std::string& config_hash() const { return config_hash_; }
  const std::string& bump_hash() const { return bump_hash_; }

 private:
  const RunConfig* cfg_;
  std::string dir_;
  std::string config_hash_;
  std::string bump_hash_;
};

// Merges every report JSON under the output directory into summary.json and summary.csv.
nlohmann::ordered_json merge_reports(const std::string& output);

}  // namespace salem
