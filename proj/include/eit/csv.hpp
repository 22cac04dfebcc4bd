#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eit/fit.hpp"
#include "eit/ode.hpp"

namespace eit {

/// `t_us,re_rho_aa,...,im_rho_bc`, 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// Header line then one row per index; all columns must share a length.
void write_columns(std::ostream& out, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns);

/// `t_us,transmission` header then numeric rows. Throws Error{ParseError}
/// naming the line, or Error{InvalidTrace} from the Trace invariants.
Trace read_trace_csv(std::istream& in);
Trace read_trace_csv_file(const std::string& path);

void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace eit
