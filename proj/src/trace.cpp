#include "spider/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace spider {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Stopped: return "stopped";
    case RunStatus::Exhausted: return "exhausted";
    case RunStatus::Completed: return "completed";
    case RunStatus::Failed: return "failed";
  }
  return "unknown";
}

const char* to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::Reset: return "reset";
    case TraceEvent::Advance: return "advance";
    case TraceEvent::Ncs: return "ncs";
    case TraceEvent::Stop: return "stop";
  }
  return "unknown";
}

std::string RunTrace::x_digest() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix_byte = [&h](unsigned char b) {
    h ^= b;
    h *= 0x100000001b3ull;
  };
  for (Eigen::Index i = 0; i < x_out.size(); ++i) {
    const double v = x_out[i];
    const auto* bytes = reinterpret_cast<const unsigned char*>(&v);
    for (size_t b = 0; b < sizeof(double); ++b) mix_byte(bytes[b]);
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const RunTrace& trace, const std::string& path, bool paper_convention) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file for writing: " + path);
  out << "k,f_value,v_norm,grad_norm,sfo_cost,izo_cost,event\n";
  for (const TraceRow& r : trace.rows) {
    out << r.k << ',' << format_double(r.f_value) << ',' << format_double(r.v_norm) << ','
        << format_double(r.grad_norm) << ','
        << (paper_convention ? r.sfo_cost_paper : r.sfo_cost) << ',' << r.izo_cost << ','
        << to_string(r.event) << '\n';
  }
  out << "# terminal,status=" << to_string(trace.status) << ",x_digest=" << trace.x_digest()
      << ",sfo=" << trace.ledger.sfo << ",sfo_paper=" << trace.ledger.sfo_paper
      << ",izo=" << trace.ledger.izo << ",hvp=" << trace.ledger.hvp
      << ",final_grad=" << format_double(trace.final_grad_norm)
      << ",stop_k=" << trace.stop_k << ",attempts=" << trace.attempts << '\n';
}

}  // namespace spider
