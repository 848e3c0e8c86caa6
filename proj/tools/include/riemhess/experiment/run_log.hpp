#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riemhess/solvers.hpp"

namespace riemhess::experiment {

inline constexpr const char* kCsvHeader = "iter,cost,gradnorm,radius_or_step,inner_iters,rho,ms";

struct RunLog {
  nlohmann::json config;  // the experiment document, echoed
  std::vector<IterationRecord> records;
  std::string stop_reason;
  double final_cost = 0.0;
  double final_gradnorm = 0.0;
  double total_ms = 0.0;

  bool operator==(const RunLog&) const;
};

/// Field-wise equality with NaN equal to NaN.
bool same_record(const IterationRecord& a, const IterationRecord& b);

/// Doubles are written in shortest round-trip form; non-finite values as
/// the strings "nan", "inf" and "-inf".
nlohmann::json to_json(const RunLog& log);
RunLog run_log_from_json(const nlohmann::json& doc);

std::string to_csv(const std::vector<IterationRecord>& records);
std::vector<IterationRecord> records_from_csv(const std::string& text);

/// Writes `text` to `path` through a temporary file and a rename, so a
/// reader never sees a partial file.
void write_file_atomic(const std::string& path, const std::string& text);

/// <dir>/run.json and <dir>/trace.csv.
void write_run(const std::string& dir, const RunLog& log);

}  // namespace riemhess::experiment
