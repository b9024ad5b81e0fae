#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "anchored/geometry.hpp"
#include "anchored/index_sets.hpp"

namespace anchored {

/// Shortest-round-trip decimal form; identical doubles always print the same
/// bytes, which the CSV determinism contract relies on.
std::string format_double(double v);

struct PointsCsv {
  int dim = 0;
  std::vector<std::string> blocks;  // subset notation per row
  std::vector<Point> points;
};

/// Header "block,x1,...,xd".
void write_points_csv(std::ostream& os, const SamplingSet& set);
PointsCsv read_points_csv(std::istream& is);

/// Rebuilds a sampling set from a points CSV (blocks grouped by their subset
/// label, order of first appearance preserved).
SamplingSet sampling_set_from_csv(const PointsCsv& csv, const Anchor& anchor, const Box& box,
                                  int fill_resolution = 256);

struct ModelCsv {
  int dim = 0;
  std::vector<std::string> blocks;
  std::vector<Point> points;
  std::vector<double> alpha;
};

/// Header "index,block,x1,...,xd,alpha".
void write_model_csv(std::ostream& os, const std::vector<std::string>& blocks,
                     const std::vector<Point>& points, const std::vector<double>& alpha);
ModelCsv read_model_csv(std::istream& is);

/// Header "x1,...,xd[,value-column]"; returns points and (optionally) the
/// trailing value column.
struct SamplesCsv {
  int dim = 0;
  std::vector<Point> points;
  std::vector<double> values;
  bool has_values = false;
};
SamplesCsv read_samples_csv(std::istream& is);
void write_samples_csv(std::ostream& os, const std::vector<Point>& points,
                       const std::vector<double>& values, const std::string& value_column);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace anchored
