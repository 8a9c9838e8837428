#include "salem/report.hpp"
#include "salem/bump.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace salem {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

}  // namespace

ReportWriter::ReportWriter(const RunConfig& cfg, const std::string& command)
    : cfg_(&cfg),
      dir_((fs::path(cfg.output) / command).string()),
      config_hash_(cfg.hash()),
      bump_hash_(bumps(static_cast<int>(cfg.poly.size()) - 1).profile_hash()) {
  fs::create_directories(dir_);
}

void ReportWriter::json(const std::string& name, const ordered_json& body) const {
  ordered_json j;
  j["config_hash"] = config_hash_;
  j["bump_hash"] = bump_hash_;
  j["config"] = cfg_->to_json();
  j["report"] = body;
  write_file(fs::path(dir_) / (name + ".json"), j.dump(2) + "\n");
}

void ReportWriter::csv(const std::string& name, const std::string& body) const {
  std::ostringstream os;
  os << "# config_hash=" << config_hash_ << "\n# bump_hash=" << bump_hash_ << "\n" << body;
  write_file(fs::path(dir_) / (name + ".csv"), os.str());
}

ordered_json merge_reports(const std::string& output) {
  std::vector<fs::path> files;
  if (fs::exists(output))
    for (auto& e : fs::recursive_directory_iterator(output))
      if (e.is_regular_file() && e.path().extension() == ".json" && e.path().filename() != "summary.json")
        files.push_back(e.path());
  std::sort(files.begin(), files.end());
  ordered_json rows = ordered_json::array();
  std::ostringstream csv;
  csv << "file,id,pass\n";
  bool all = true;
  for (auto& f : files) {
    std::ifstream in(f);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception&) {
      continue;
    }
    if (!j.contains("report")) continue;
    const auto& r = j["report"];
    const std::string id = r.contains("lemma") ? r["lemma"].get<std::string>()
                           : r.contains("id")  ? r["id"].get<std::string>()
                                               : f.stem().string();
    const bool pass = r.contains("pass") && r["pass"].is_boolean() && r["pass"].get<bool>();
    all = all && pass;
    const std::string rel = fs::relative(f, output).string();
    rows.push_back({{"file", rel}, {"id", id}, {"pass", pass}});
    csv << rel << "," << id << "," << (pass ? 1 : 0) << "\n";
  }
  ordered_json summary = {{"reports", rows}, {"all_pass", all}};
  fs::create_directories(output);
  write_file(fs::path(output) / "summary.json", summary.dump(2) + "\n");
  write_file(fs::path(output) / "summary.csv", csv.str());
  return summary;
}

}  // namespace salem
