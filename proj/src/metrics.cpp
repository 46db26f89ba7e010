#include "zeroset/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace zeroset {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_sig(double v, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

TableRow to_table_row(const SolveReport& report) {
  TableRow row;
  row.n = report.config.initial_chains;
  row.tol = report.config.tol;
  row.target = report.config.target_solutions;
  row.decrease = report.config.decrease_factor;
  row.gain = report.config.residual_gain;
  row.inject = report.config.inject_per_round;
  row.time_seconds = report.elapsed_seconds;
  row.ec = report.ec;
  if (report.coverage_stats) row.fill_distance = report.coverage_stats->fill_distance;
  return row;
}

std::string table_header() {
  return "label\tn\ttol\tN\tC\tk\tp\ttime_s\tec\tfill";
}

std::string table_line(const TableRow& row) {
  std::ostringstream out;
  out << row.label << '\t' << row.n << '\t' << format_sig(row.tol, 6) << '\t' << row.target
      << '\t' << format_sig(row.decrease, 6) << '\t' << format_sig(row.gain, 6) << '\t'
      << row.inject << '\t' << format_sig(row.time_seconds, 4) << '\t'
      << format_sig(row.ec, 6) << '\t'
      << (row.fill_distance ? format_sig(*row.fill_distance, 6) : std::string("-"));
  return out.str();
}

namespace {

std::string csv_points(const SolveReport& report) {
  std::ostringstream out;
  const int d = report.dimension;
  const std::size_t m = report.field_count;
  for (int i = 0; i < d; ++i) out << (i ? "," : "") << 'x' << (i + 1);
  for (std::size_t j = 0; j < m; ++j) out << ",res_" << (j + 1);
  out << ",agg,chain_id,steps\n";
  for (const Solution& s : report.solutions) {
    for (int i = 0; i < d; ++i) out << (i ? "," : "") << format_double(s.point[i]);
    for (std::size_t j = 0; j < m; ++j) out << ',' << format_double(s.residuals.per_field[j]);
    out << ',' << format_double(s.residuals.aggregated) << ',' << s.chain_id << ',' << s.steps
        << '\n';
  }
  return out.str();
}

const char* policy_name(AcceptancePolicy p) {
  return p == AcceptancePolicy::retry ? "retry" : "strict";
}

std::string json_points(const SolveReport& report) {
  std::ostringstream out;
  const SolverConfig& c = report.config;
  out << "{\n  \"metadata\": {\n";
  out << "    \"algorithm\": \"" << report.algorithm << "\",\n";
  out << "    \"dimension\": " << report.dimension << ",\n";
  out << "    \"fields\": " << report.field_count << ",\n";
  out << "    \"n\": " << c.initial_chains << ",\n";
  out << "    \"p\": " << c.inject_per_round << ",\n";
  out << "    \"C\": " << format_double(c.decrease_factor) << ",\n";
  out << "    \"k\": " << format_double(c.residual_gain) << ",\n";
  out << "    \"tol\": " << format_double(c.tol) << ",\n";
  out << "    \"N\": " << c.target_solutions << ",\n";
  out << "    \"R0\": " << format_double(c.initial_radius) << ",\n";
  out << "    \"seed\": " << c.seed << ",\n";
  out << "    \"policy\": \"" << policy_name(c.policy) << "\",\n";
  out << "    \"normalize\": " << (c.normalize ? "true" : "false") << ",\n";
  out << "    \"branching\": " << c.branching << ",\n";
  out << "    \"budget\": " << c.eval_budget << ",\n";
  out << "    \"budget_stopped\": " << (report.budget_stopped ? "true" : "false") << ",\n";
  out << "    \"solutions\": " << report.solutions.size() << ",\n";
  out << "    \"total_evaluations\": " << report.total_evals << ",\n";
  out << "    \"ec\": " << format_double(report.ec) << ",\n";
  out << "    \"time\": " << format_double(report.elapsed_seconds) << "\n";
  out << "  },\n  \"solutions\": [";
  bool first = true;
  for (const Solution& s : report.solutions) {
    out << (first ? "\n" : ",\n") << "    {\"point\": [";
    first = false;
    for (std::size_t i = 0; i < s.point.size(); ++i) {
      out << (i ? ", " : "") << format_double(s.point[i]);
    }
    out << "], \"residuals\": [";
    for (std::size_t j = 0; j < s.residuals.per_field.size(); ++j) {
      out << (j ? ", " : "") << format_double(s.residuals.per_field[j]);
    }
    out << "], \"agg\": " << format_double(s.residuals.aggregated) << ", \"chain_id\": "
        << s.chain_id << ", \"steps\": " << s.steps << '}';
  }
  out << (first ? "]\n}" : "\n  ]\n}") << '\n';
  return out.str();
}

}  // namespace

std::string export_points(const SolveReport& report, ExportFormat format) {
  return format == ExportFormat::csv ? csv_points(report) : json_points(report);
}

std::string export_trace_csv(const std::vector<TraceRecord>& traces, int dimension) {
  std::ostringstream out;
  out << "chain_id,step";
  for (int i = 0; i < dimension; ++i) out << ",x" << (i + 1);
  out << ",agg,R\n";
  for (const TraceRecord& r : traces) {
    out << r.chain_id << ',' << r.step;
    for (int i = 0; i < dimension; ++i) out << ',' << format_double(r.point[i]);
    out << ',' << format_double(r.aggregated) << ',' << format_double(r.radius) << '\n';
  }
  return out.str();
}

std::string export_genealogy_csv(const std::vector<GenealogyRow>& rows) {
  std::ostringstream out;
  out << "id,parent_id,generation,residual\n";
  for (const GenealogyRow& r : rows) {
    out << r.id << ',';
    if (r.parent_id) out << *r.parent_id;
    out << ',' << r.generation << ',' << format_double(r.residual) << '\n';
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace zeroset
