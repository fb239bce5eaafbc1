#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mtf/bem/kernel.hpp"

namespace mtf::bem {

struct Element {
  int n0 = 0;
  int n1 = 0;
  int curve = 0;
};

/// Closed polylines with P1 connectivity. The unit normal of an element
/// running n0 -> n1 with direction d is orientation[curve] * (d_y, -d_x): for a
/// counter-clockwise curve and orientation +1 it points away from the region
/// the curve encloses.
struct BoundaryMesh {
  std::vector<Point2> nodes;
  std::vector<Element> elements;
  std::vector<int> orientation;  // +1 / -1 per curve

  /// Throws InvalidArgument unless every curve is a single cycle of
  /// non-degenerate elements and every node belongs to exactly one curve.
  void validate() const;

  int curve_count() const { return static_cast<int>(orientation.size()); }
  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }

  double length(int e) const;
  Point2 direction(int e) const;
  Point2 normal(int e) const;
  double total_length() const;
  /// Shoelace area of one curve, positive for counter-clockwise traversal.
  double signed_area(int curve) const;
  double max_element_length() const;

  /// Same geometry with every orientation flag flipped.
  BoundaryMesh flipped() const;
};

BoundaryMesh make_circle(int n_elems, double radius = 1.0, Point2 center = {0.0, 0.0});
BoundaryMesh make_square(int n_per_side, double side = 1.0, Point2 center = {0.0, 0.0});

enum class PresetShape { Circles, Squares };

/// Two disjoint closed curves: Gamma_1 (inner, bounds Omega_1) and Gamma_2
/// (outer, Omega_2 is its unbounded exterior). Omega_0 lies between them.
struct ThreeDomainPreset {
  PresetShape shape = PresetShape::Circles;
  double inner_size = 0.5;  // radius, or half side for squares
  double outer_size = 1.0;
  int n_inner = 96;
  int n_outer = 96;
};

std::pair<BoundaryMesh, BoundaryMesh> make_three_domain(const ThreeDomainPreset& preset);

/// Smallest node-to-node distance between two meshes.
double min_distance(const BoundaryMesh& m1, const BoundaryMesh& m2);

/// Plain-text format:
///   nodes <N>            then N lines "x y"
///   elements <M>         then M lines "i j curve"
///   orientation <C>      then one line with C flags (optional, default +1)
/// Lines starting with '#' are ignored.
void write_mesh(std::ostream& os, const BoundaryMesh& mesh);
BoundaryMesh read_mesh(std::istream& is);
void save_mesh(const std::string& path, const BoundaryMesh& mesh);
BoundaryMesh load_mesh(const std::string& path);

}  // namespace mtf::bem
