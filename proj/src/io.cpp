#include "spacc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace spacc {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  return out;
}

std::int64_t parse_int64(const std::string& token, const std::string& context) {
  std::int64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw io_error(context + ": not an integer: '" + token + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(const std::string& token, const std::string& context) {
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw io_error(context + ": not a number: '" + token + "'");
  return v;
}

Dataset read_probe_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open: " + path);

  std::string line;
  if (!std::getline(in, line))
    throw io_error(path + ": empty file");
  const std::vector<std::string> header = split_tabs(strip_cr(line));
  if (header.size() < 2 || header[0] != "probe_id")
    throw io_error(path + ": first row must start with 'probe_id'");

  Dataset data;
  data.probe_ids.assign(header.begin() + 1, header.end());
  const Index p = static_cast<Index>(data.probe_ids.size());

  if (!std::getline(in, line))
    throw io_error(path + ": missing position row");
  const std::vector<std::string> pos_row = split_tabs(strip_cr(line));
  if (pos_row.size() != header.size() || pos_row[0] != "position")
    throw io_error(path + ": second row must start with 'position' and match the header width");
  data.matrix.positions.resize(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j)
    data.matrix.positions[static_cast<std::size_t>(j)] = parse_int64(
        pos_row[static_cast<std::size_t>(j + 1)], path + ": position row");

  std::vector<std::vector<std::string>> rows;
  int line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> tokens = split_tabs(line);
    if (tokens.size() != header.size())
      throw io_error(path + ": line " + std::to_string(line_no) + " has " +
                     std::to_string(tokens.size()) + " fields, expected " +
                     std::to_string(header.size()));
    rows.push_back(std::move(tokens));
  }
  if (rows.empty()) throw io_error(path + ": no subject rows");

  const Index n = static_cast<Index>(rows.size());
  data.matrix.values.resize(n, p);
  data.matrix.mask.resize(n, p);
  data.subject_ids.reserve(rows.size());
  for (Index i = 0; i < n; ++i) {
    const auto& tokens = rows[static_cast<std::size_t>(i)];
    data.subject_ids.push_back(tokens[0]);
    for (Index j = 0; j < p; ++j) {
      const std::string& tok = tokens[static_cast<std::size_t>(j + 1)];
      if (tok.empty() || tok == "NA") {
        data.matrix.mask(i, j) = false;
        data.matrix.values(i, j) = std::numeric_limits<double>::quiet_NaN();
      } else {
        data.matrix.mask(i, j) = true;
        data.matrix.values(i, j) =
            parse_double(tok, path + ": subject '" + tokens[0] + "'");
      }
    }
  }
  return data;
}

namespace {

void write_matrix_rows(std::ofstream& out, const Dataset& data,
                       const Matrix& values, const Mask* mask) {
  out << "probe_id";
  for (const std::string& id : data.probe_ids) out << '\t' << id;
  out << '\n';
  out << "position";
  for (std::int64_t pos : data.matrix.positions) out << '\t' << pos;
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    out << data.subject_ids[static_cast<std::size_t>(i)];
    for (Index j = 0; j < values.cols(); ++j) {
      out << '\t';
      if (mask && !(*mask)(i, j))
        out << "NA";
      else
        out << format_double(values(i, j));
    }
    out << '\n';
  }
}

}  // namespace

void write_probe_matrix(const std::string& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  write_matrix_rows(out, data, data.matrix.values, &data.matrix.mask);
}

void write_matrix_like(const std::string& path, const Dataset& layout,
                       const Matrix& values) {
  if (values.rows() != layout.matrix.n() || values.cols() != layout.matrix.p())
    throw validation_error("write_matrix_like: shape differs from layout");
  std::ofstream out = open_out(path);
  write_matrix_rows(out, layout, values, nullptr);
}

void write_regions(const std::string& path, const Dataset& layout,
                   const RegionAssignment& regions) {
  if (regions.p() != layout.matrix.p())
    throw validation_error("write_regions: label count differs from layout");
  std::ofstream out = open_out(path);
  out << "probe_id\tposition\tregion_label\n";
  for (Index j = 0; j < regions.p(); ++j)
    out << layout.probe_ids[static_cast<std::size_t>(j)] << '\t'
        << layout.matrix.positions[static_cast<std::size_t>(j)] << '\t'
        << regions.labels[static_cast<std::size_t>(j)] << '\n';
}

void write_truth(const std::string& path,
                 const std::vector<std::string>& probe_ids,
                 const RegionAssignment& regions) {
  if (static_cast<Index>(probe_ids.size()) != regions.p())
    throw validation_error("write_truth: label count differs from probe ids");
  std::ofstream out = open_out(path);
  out << "probe_id\ttrue_region_label\n";
  for (std::size_t j = 0; j < probe_ids.size(); ++j)
    out << probe_ids[j] << '\t' << regions.labels[j] << '\n';
}

RegionAssignment read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open: " + path);
  RegionAssignment out;
  std::vector<std::string> raw;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> tokens = split_tabs(line);
    if (first && tokens[0] == "probe_id") {
      first = false;
      continue;  // header
    }
    first = false;
    raw.push_back(tokens.back());
  }
  if (raw.empty()) throw io_error(path + ": no label rows");

  std::vector<std::string> seen;
  out.labels.reserve(raw.size());
  for (const std::string& label : raw) {
    int id = 0;
    for (; id < static_cast<int>(seen.size()); ++id)
      if (seen[static_cast<std::size_t>(id)] == label) break;
    if (id == static_cast<int>(seen.size())) seen.push_back(label);
    out.labels.push_back(id + 1);
  }
  return out;
}

void write_response(const std::string& path,
                    const std::vector<std::string>& subject_ids,
                    const Vector& response) {
  if (static_cast<Index>(subject_ids.size()) != response.size())
    throw validation_error("write_response: size mismatch");
  std::ofstream out = open_out(path);
  out << "subject_id\ty\n";
  for (Index i = 0; i < response.size(); ++i)
    out << subject_ids[static_cast<std::size_t>(i)] << '\t'
        << format_double(response[i]) << '\n';
}

void write_cv_table(const std::string& path, const CvTable& table) {
  std::ofstream out = open_out(path);
  out << "gamma,fold,mse\n";
  for (Index t = 0; t < table.gamma_grid.size(); ++t)
    for (Index k = 0; k < table.mse.rows(); ++k) {
      out << format_double(table.gamma_grid[t]) << ',' << (k + 1) << ',';
      if (table.valid(k, t))
        out << format_double(table.mse(k, t));
      else
        out << "NA";
      out << '\n';
    }
}

void write_sparsity_curve(const std::string& path, const CvTable& table) {
  std::ofstream out = open_out(path);
  out << "gamma,sparsity,avg_mse\n";
  for (Index t = 0; t < table.gamma_grid.size(); ++t) {
    double mse_sum = 0.0;
    double fused_sum = 0.0;
    int cnt = 0;
    for (Index k = 0; k < table.mse.rows(); ++k)
      if (table.valid(k, t)) {
        mse_sum += table.mse(k, t);
        fused_sum += table.fused_share(k, t);
        ++cnt;
      }
    out << format_double(table.gamma_grid[t]) << ',';
    if (cnt > 0)
      out << format_double(fused_sum / cnt) << ','
          << format_double(mse_sum / cnt);
    else
      out << "NA,NA";
    out << '\n';
  }
}

void write_metrics_report(
    const std::string& path,
    const std::vector<std::pair<std::string, double>>& rows) {
  std::ofstream out = open_out(path);
  out << "metric,value\n";
  for (const auto& [name, value] : rows)
    out << name << ',' << format_double(value) << '\n';
}

void write_key_values(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ofstream out = open_out(path);
  for (const auto& [key, value] : rows) out << key << " = " << value << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace spacc
