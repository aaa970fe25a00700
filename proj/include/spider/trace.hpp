#pragma once

#include <limits>
#include <string>
#include <vector>

#include "spider/ledger.hpp"
#include "spider/problem.hpp"

namespace spider {

enum class RunStatus { Stopped, Exhausted, Completed, Failed };
enum class TraceEvent { Reset, Advance, Ncs, Stop };

const char* to_string(RunStatus s);
const char* to_string(TraceEvent e);

struct TraceRow {
  long k = 0;
  double f_value = std::numeric_limits<double>::quiet_NaN();
  double v_norm = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = std::numeric_limits<double>::quiet_NaN();  // NaN = referee off
  std::uint64_t sfo_cost = 0;
  std::uint64_t sfo_cost_paper = 0;
  std::uint64_t izo_cost = 0;
  TraceEvent event = TraceEvent::Advance;
};

/// Per-run record: one row per iteration plus a single terminal record.
struct RunTrace {
  std::vector<TraceRow> rows;
  RunStatus status = RunStatus::Failed;
  Vector x_out;
  CostLedger ledger;
  double wall_seconds = 0.0;
  long stop_k = -1;
  int attempts = 1;
  double final_grad_norm = std::numeric_limits<double>::quiet_NaN();

  /// FNV-1a digest of the output iterate bytes.
  std::string x_digest() const;
};

struct TraceOptions {
  bool record_f = true;        // charge-free f referee per row
  bool grad_referee = false;   // charge-free gradient-norm referee per row
  long stride = 1;             // baselines only: record every stride-th row
};

/// Fixed-schema CSV: k,f_value,v_norm,grad_norm,sfo_cost,izo_cost,event with
/// a trailing comment carrying the terminal record. Wall time is excluded so
/// identical runs byte-reproduce.
void write_trace_csv(const RunTrace& trace, const std::string& path, bool paper_convention);

std::string format_double(double v);

}  // namespace spider
