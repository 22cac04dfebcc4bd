#include "eit/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "eit/error.hpp"

namespace eit {
namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

double field(std::string_view text, int line) {
  text = strip(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const auto old_precision = out.precision(17);
  out << "t_us,re_rho_aa,re_rho_bb,re_rho_cc,re_rho_ab,im_rho_ab,re_rho_ac,im_rho_ac,re_rho_bc,im_rho_bc\n";
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const DensityMatrix& s = trajectory.states[i];
    out << trajectory.times[i] << ',' << s.aa() << ',' << s.bb() << ',' << s.cc() << ','
        << s.ab().real() << ',' << s.ab().imag() << ',' << s.ac().real() << ',' << s.ac().imag()
        << ',' << s.bc().real() << ',' << s.bc().imag() << '\n';
  }
  out.precision(old_precision);
}

void write_columns(std::ostream& out, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw Error(ErrorCode::Usage, "header/column count mismatch");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw Error(ErrorCode::Usage, "columns differ in length");
  }
  const auto old_precision = out.precision(17);
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << columns[j][i];
    out << '\n';
  }
  out.precision(old_precision);
}

Trace read_trace_csv(std::istream& in) {
  std::string raw;
  int line = 0;
  std::vector<double> t, v;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = strip(raw);
    if (text.empty()) continue;
    if (!header) {
      if (text != "t_us,transmission") {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line) + ": expected header 't_us,transmission'");
      }
      header = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": expected two columns");
    }
    t.push_back(field(text.substr(0, comma), line));
    v.push_back(field(text.substr(comma + 1), line));
  }
  if (!header) throw Error(ErrorCode::ParseError, "empty trace file");
  return Trace(std::move(t), std::move(v));
}

Trace read_trace_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open trace '" + path + "'");
  return read_trace_csv(in);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  write_columns(out, {"t_us", "transmission"}, {trace.times, trace.values});
}

}  // namespace eit
