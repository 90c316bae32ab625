#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spacc/cv.hpp"
#include "spacc/types.hpp"

namespace spacc {

/// A ProbeMatrix together with the identifiers carried by its file form.
struct Dataset {
  ProbeMatrix matrix;
  std::vector<std::string> probe_ids;
  std::vector<std::string> subject_ids;
};

/// Shortest round-trip decimal form of v (std::to_chars); locale-free and
/// byte-stable, so identical numbers always serialize identically.
std::string format_double(double v);

/// Parses a full token as a double; throws io_error on junk.
double parse_double(const std::string& token, const std::string& context);

/// Tab-separated probe matrix:
///   row 1: "probe_id" then p probe identifiers
///   row 2: "position" then p integer basepair positions
///   rows 3+: subject identifier then p values, "NA" or empty = missing.
Dataset read_probe_matrix(const std::string& path);
void write_probe_matrix(const std::string& path, const Dataset& data);

/// Same layout as the input matrix but with the given fully observed
/// values (centroid or imputed exports).
void write_matrix_like(const std::string& path, const Dataset& layout,
                       const Matrix& values);

/// probe_id / position / region_label rows.
void write_regions(const std::string& path, const Dataset& layout,
                   const RegionAssignment& regions);

/// probe_id / label rows (ground-truth export).
void write_truth(const std::string& path,
                 const std::vector<std::string>& probe_ids,
                 const RegionAssignment& regions);

/// Reads any tab-separated label file whose last column is the label and
/// whose optional header starts with "probe_id". Labels are arbitrary
/// strings and are factorized in order of first appearance.
RegionAssignment read_labels(const std::string& path);

/// subject_id / y rows.
void write_response(const std::string& path,
                    const std::vector<std::string>& subject_ids,
                    const Vector& response);

/// CSV with header gamma,fold,mse; invalid cells hold NA.
void write_cv_table(const std::string& path, const CvTable& table);

/// CSV with header gamma,sparsity,avg_mse: per-gamma fold averages of the
/// fused-link share and the held-out error (plot-ready).
void write_sparsity_curve(const std::string& path, const CvTable& table);

/// CSV with header metric,value.
void write_metrics_report(
    const std::string& path,
    const std::vector<std::pair<std::string, double>>& rows);

/// "key = value" lines in the given order.
void write_key_values(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& rows);

std::string read_file(const std::string& path);

}  // namespace spacc
