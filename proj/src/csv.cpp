#include "anchored/csv.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

#include "anchored/errors.hpp"

namespace anchored {

std::string format_double(double v) {
  char buf[40];
  // Shortest representation that round-trips: try increasing precision.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      fields.push_back(current);
      current.clear();
    } else if (ch != '\r') {
      current += ch;
    }
  }
  fields.push_back(current);
  return fields;
}

namespace {

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw input_error("trailing characters in number '" + s + "'");
    return v;
  } catch (const input_error&) {
    throw;
  } catch (const std::exception&) {
    throw input_error("cannot parse number '" + s + "'");
  }
}

}  // namespace

void write_points_csv(std::ostream& os, const SamplingSet& set) {
  const int d = set.box.dim();
  os << "block";
  for (int j = 1; j <= d; ++j) os << ",x" << j;
  os << "\n";
  for (std::size_t b = 0; b < set.blocks.size(); ++b) {
    const std::string label = "\"" + set.family.members[b].to_string() + "\"";
    for (const Point& p : set.blocks[b]) {
      os << label;
      for (double v : p) os << "," << format_double(v);
      os << "\n";
    }
  }
}

PointsCsv read_points_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw input_error("points csv: empty file");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "block") {
    throw input_error("points csv: header must start with 'block'");
  }
  PointsCsv out;
  out.dim = static_cast<int>(header.size()) - 1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != out.dim + 1) {
      throw input_error("points csv: row has wrong field count");
    }
    out.blocks.push_back(fields[0]);
    Point p;
    for (int j = 1; j <= out.dim; ++j) p.push_back(parse_double(fields[static_cast<std::size_t>(j)]));
    out.points.push_back(std::move(p));
  }
  return out;
}

SamplingSet sampling_set_from_csv(const PointsCsv& csv, const Anchor& anchor, const Box& box,
                                  int fill_resolution) {
  if (box.dim() != csv.dim) throw input_error("points csv: box dimension mismatch");
  std::vector<SubsetMask> members;
  std::map<std::uint64_t, std::vector<Point>> low_dim;
  for (std::size_t i = 0; i < csv.points.size(); ++i) {
    const SubsetMask u = parse_subset(csv.blocks[i], csv.dim);
    if (!low_dim.count(u.bits)) members.push_back(u);
    low_dim[u.bits].push_back(restrict_point(csv.points[i], u));
  }
  DownwardClosedFamily family = make_family(csv.dim, members);
  return assemble_sampling_set(family, low_dim, anchor, box, fill_resolution);
}

void write_model_csv(std::ostream& os, const std::vector<std::string>& blocks,
                     const std::vector<Point>& points, const std::vector<double>& alpha) {
  if (points.empty()) throw input_error("model csv: no points");
  const auto d = points[0].size();
  os << "index,block";
  for (std::size_t j = 1; j <= d; ++j) os << ",x" << j;
  os << ",alpha\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    os << i << ",\"" << blocks[i] << "\"";
    for (double v : points[i]) os << "," << format_double(v);
    os << "," << format_double(alpha[i]) << "\n";
  }
}

ModelCsv read_model_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw input_error("model csv: empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "index" || header[1] != "block" ||
      header.back() != "alpha") {
    throw input_error("model csv: expected header index,block,x1,...,alpha");
  }
  ModelCsv out;
  out.dim = static_cast<int>(header.size()) - 3;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) throw input_error("model csv: bad row");
    out.blocks.push_back(fields[1]);
    Point p;
    for (int j = 0; j < out.dim; ++j) p.push_back(parse_double(fields[static_cast<std::size_t>(j + 2)]));
    out.points.push_back(std::move(p));
    out.alpha.push_back(parse_double(fields.back()));
  }
  return out;
}

SamplesCsv read_samples_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw input_error("samples csv: empty file");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "x1") {
    throw input_error("samples csv: header must start with x1");
  }
  SamplesCsv out;
  int d = 0;
  for (const auto& h : header) {
    if (h.size() > 1 && h[0] == 'x') {
      ++d;
    }
  }
  out.dim = d;
  out.has_values = header.size() > static_cast<std::size_t>(d);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) throw input_error("samples csv: bad row");
    Point p;
    for (int j = 0; j < d; ++j) p.push_back(parse_double(fields[static_cast<std::size_t>(j)]));
    out.points.push_back(std::move(p));
    if (out.has_values) out.values.push_back(parse_double(fields[static_cast<std::size_t>(d)]));
  }
  return out;
}

void write_samples_csv(std::ostream& os, const std::vector<Point>& points,
                       const std::vector<double>& values, const std::string& value_column) {
  if (points.empty()) throw input_error("samples csv: no points");
  const auto d = points[0].size();
  for (std::size_t j = 1; j <= d; ++j) os << (j > 1 ? "," : "") << "x" << j;
  if (!values.empty()) os << "," << value_column;
  os << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      os << (j > 0 ? "," : "") << format_double(points[i][j]);
    }
    if (!values.empty()) os << "," << format_double(values[i]);
    os << "\n";
  }
}

}  // namespace anchored
