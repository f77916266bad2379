#pragma once

#include <iosfwd>
#include <vector>

#include "gfnet/geometry.hpp"

namespace gfnet {

struct FieldPoint {
  Point2 x;
  double value = 0.0;
};

/// Reads the first three numeric columns of a whitespace table. Blank lines,
/// `#` comments and `key=value` summary lines are skipped. Throws
/// Error(parse_failure) on a malformed row and Error(empty_sample_set) when no
/// row remains.
std::vector<FieldPoint> read_field_table(std::istream& in);

/// `x1,x2,value` with a header row.
void write_field_csv(std::ostream& out, const std::vector<FieldPoint>& field);

/// Colour map of the field, one square per point on the lattice spacing
/// inferred from the data.
void write_field_svg(std::ostream& out, const std::vector<FieldPoint>& field);

/// Regular n x n lattice over `box`, keeping points inside `domain` (closed).
std::vector<Point2> lattice_points(const Domain& domain, int n);

}  // namespace gfnet
