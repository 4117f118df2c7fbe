#include "vsl/trace.hpp"

#include <filesystem>
#include <fstream>

#include "format.hpp"

namespace vsl {

using detail::format_double;

namespace {

void write_field_csv(const std::string& path, const std::vector<double>& times,
                     const std::vector<CellField>& rows, int n_cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "t";
  for (int i = 0; i < n_cells; ++i) out << ",z_" << i;
  out << "\n";
  for (size_t k = 0; k < times.size(); ++k) {
    out << format_double(times[k]);
    for (double v : rows[k]) out << "," << format_double(v);
    out << "\n";
  }
}

}  // namespace

void write_trace(const SimTrace& trace, const Grid& g, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_field_csv(dir + "/density.csv", trace.times, trace.rho, g.n_cells);
  write_field_csv(dir + "/speedlimit.csv", trace.times, trace.b, g.n_cells);

  const std::string path = dir + "/scalars.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "t,V,min_h,delta,qp_status,clamp_count\n";
  for (size_t k = 0; k < trace.times.size(); ++k) {
    out << format_double(trace.times[k]) << "," << format_double(trace.clf_values[k])
        << "," << format_double(trace.min_h[k]) << ","
        << format_double(trace.delta[k]) << "," << trace.qp_status[k] << ","
        << trace.clamp_count[k] << "\n";
  }
}

std::string summary_line(const SimTrace& trace) {
  const RunStats& st = trace.stats;
  std::string out = "summary: final_V=" + format_double(st.v_final) +
                    " min_h=" + format_double(st.min_h_over_run) +
                    " max_abs_delta=" + format_double(st.max_abs_delta);
  if (st.active_row_steps > 0) {
    out += " active_steps=" + std::to_string(st.active_row_steps) +
           " max_active_b_excess=" + format_double(st.max_b_excess_active);
  }
  if (st.fallback_steps > 0) {
    out += " fallback_steps=" + std::to_string(st.fallback_steps);
  }
  if (st.clamp_events_total > 0) {
    out += " clamp_events=" + std::to_string(st.clamp_events_total);
  }
  return out;
}

}  // namespace vsl
