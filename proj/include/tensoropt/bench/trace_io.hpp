#pragma once

#include "tensoropt/core/errors.hpp"
#include "tensoropt/optimizer/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace tensoropt::bench {

class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kTraceHeader =
    "k,f_gap,step_norm,n1,n2,n3,inner_iters,grad_calls,hess_calls,third_calls";

/// One parsed trace row; mirrors IterationRecord minus the condition report.
struct TraceRow {
  int k = 0;
  double f_gap = 0.0;
  double step_norm = 0.0;
  std::int64_t n[3] = {0, 0, 0};
  int inner_iters = 0;
  std::int64_t grad_calls = 0;
  std::int64_t hess_calls = 0;
  std::int64_t third_calls = 0;
};

inline std::string fmt_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trace_csv(const RunTrace& trace) {
  std::ostringstream os;
  os << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    os << r.k << ',' << fmt_g17(r.gap) << ',' << fmt_g17(r.step_norm) << ',' << r.n[0] << ',' << r.n[1] << ','
       << r.n[2] << ',' << r.inner_iters << ',' << r.calls.grad << ',' << r.calls.hess << ',' << r.calls.third
       << '\n';
  }
  return os.str();
}

inline std::vector<TraceRow> parse_trace_csv(const std::string& text, const std::string& source = "<trace>") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw IoError(source + ":1: unexpected header (want '" + std::string(kTraceHeader) + "')");
  }
  std::vector<TraceRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw IoError(source + ":" + std::to_string(lineno) + ": expected 10 columns");
    try {
      TraceRow r;
      r.k = std::stoi(f[0]);
      r.f_gap = std::stod(f[1]);
      r.step_norm = std::stod(f[2]);
      for (int i = 0; i < 3; ++i) r.n[i] = std::stoll(f[static_cast<std::size_t>(3 + i)]);
      r.inner_iters = std::stoi(f[6]);
      r.grad_calls = std::stoll(f[7]);
      r.hess_calls = std::stoll(f[8]);
      r.third_calls = std::stoll(f[9]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw IoError(source + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to a sibling temporary and renames it over `path`.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string() + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw IoError(tmp.string() + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError(path.string() + ": " + ec.message());
}

}  // namespace tensoropt::bench
