#include "riemhess/experiment/run_log.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "riemhess/errors.hpp"

namespace riemhess::experiment {

namespace {

using nlohmann::json;

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_number(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError(fmt::format("run log: bad number \"{}\"", s));
  }
  return v.get<double>();
}

// Equality that treats NaN as equal to NaN, for exact round-trip checks.
bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

double parse_csv_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError(fmt::format("trace csv: bad number \"{}\"", s));
  return v;
}

}  // namespace

bool same_record(const IterationRecord& a, const IterationRecord& b) {
  return a.iter == b.iter && same(a.cost, b.cost) && same(a.gradnorm, b.gradnorm) &&
         same(a.radius_or_step, b.radius_or_step) && a.inner_iters == b.inner_iters &&
         same(a.rho, b.rho) && same(a.ms, b.ms);
}

bool RunLog::operator==(const RunLog& o) const {
  return config == o.config && std::ranges::equal(records, o.records, same_record) && stop_reason == o.stop_reason &&
         same(final_cost, o.final_cost) && same(final_gradnorm, o.final_gradnorm) &&
         same(total_ms, o.total_ms);
}

json to_json(const RunLog& log) {
  json records = json::array();
  for (const IterationRecord& r : log.records) {
    records.push_back({{"iter", r.iter},
                       {"cost", number(r.cost)},
                       {"gradnorm", number(r.gradnorm)},
                       {"radius_or_step", number(r.radius_or_step)},
                       {"inner_iters", r.inner_iters},
                       {"rho", number(r.rho)},
                       {"ms", number(r.ms)}});
  }
  return {{"config", log.config},
          {"stop_reason", log.stop_reason},
          {"final_cost", number(log.final_cost)},
          {"final_gradnorm", number(log.final_gradnorm)},
          {"total_ms", number(log.total_ms)},
          {"records", records}};
}

RunLog run_log_from_json(const json& doc) {
  try {
    RunLog log;
    log.config = doc.at("config");
    log.stop_reason = doc.at("stop_reason").get<std::string>();
    log.final_cost = read_number(doc.at("final_cost"));
    log.final_gradnorm = read_number(doc.at("final_gradnorm"));
    log.total_ms = read_number(doc.at("total_ms"));
    for (const json& r : doc.at("records")) {
      log.records.push_back({r.at("iter").get<int>(), read_number(r.at("cost")),
                             read_number(r.at("gradnorm")), read_number(r.at("radius_or_step")),
                             r.at("inner_iters").get<int>(), read_number(r.at("rho")),
                             read_number(r.at("ms"))});
    }
    return log;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("run log: {}", e.what()));
  }
}

std::string to_csv(const std::vector<IterationRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const IterationRecord& r : records) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.iter, r.cost, r.gradnorm, r.radius_or_step,
                       r.inner_iters, r.rho, r.ms);
  }
  return out;
}

std::vector<IterationRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError("trace csv: missing or wrong header");
  }
  std::vector<IterationRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw ConfigError(fmt::format("trace csv: expected 7 columns in \"{}\"", line));
    out.push_back({std::stoi(cells[0]), parse_csv_double(cells[1]), parse_csv_double(cells[2]),
                   parse_csv_double(cells[3]), std::stoi(cells[4]), parse_csv_double(cells[5]),
                   parse_csv_double(cells[6])});
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write \"{}\"", tmp));
    out << text;
    if (!out) throw std::runtime_error(fmt::format("write to \"{}\" failed", tmp));
  }
  std::filesystem::rename(tmp, path);
}

void write_run(const std::string& dir, const RunLog& log) {
  std::filesystem::create_directories(dir);
  write_file_atomic((std::filesystem::path(dir) / "run.json").string(), to_json(log).dump(2) + "\n");
  write_file_atomic((std::filesystem::path(dir) / "trace.csv").string(), to_csv(log.records));
}

}  // namespace riemhess::experiment
