#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zeroset/solver.hpp"
#include "zeroset/tree_solver.hpp"

namespace zeroset {

// Doubles are serialized with 17 significant digits so that every exported
// value parses back to the identical bit pattern.
std::string format_double(double v);

// Shorter rendering for human-facing tables (6 significant digits).
std::string format_sig(double v, int significant);

// One line of the summary table: the configuration echo plus the computed
// cost and coverage metrics.
struct TableRow {
  std::string label;  // benchmark name, suite tag, or swept value
  int n = 0;          // chains started up front
  double tol = 0.0;
  int target = 0;     // requested solution count
  double decrease = 0.0;
  double gain = 0.0;
  int inject = 0;
  double time_seconds = 0.0;
  double ec = 0.0;
  std::optional<double> fill_distance;
};

TableRow to_table_row(const SolveReport& report);

// TAB-separated rendering; missing fill distances print as "-".
std::string table_header();
std::string table_line(const TableRow& row);

enum class ExportFormat { csv, json };

// Solution cloud serialization.  CSV schema:
//   x1,...,xd,res_1,...,res_m,agg,chain_id,steps
// JSON document: {"metadata": {...}, "solutions": [...]} where metadata
// echoes the configuration and the run metrics.
std::string export_points(const SolveReport& report, ExportFormat format);

// One row per accepted step: chain_id,step,x1,...,xd,agg,R
std::string export_trace_csv(const std::vector<TraceRecord>& traces, int dimension);

// Tree population snapshot: id,parent_id,generation,residual (roots leave
// parent_id empty).
std::string export_genealogy_csv(const std::vector<GenealogyRow>& rows);

// Writes content to path, throwing std::runtime_error on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace zeroset
