#include "mtf/bem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "mtf/errors.hpp"

namespace mtf::bem {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw InvalidArgument("bem2d", msg); }

}  // namespace

void BoundaryMesh::validate() const {
  const int nn = node_count();
  if (orientation.empty()) fail("mesh has no curves");
  for (int o : orientation) {
    if (o != 1 && o != -1) fail("orientation flags must be +1 or -1");
  }
  std::vector<int> out_edge(nn, -1), in_edge(nn, -1), node_curve(nn, -1);
  for (int e = 0; e < element_count(); ++e) {
    const Element& el = elements[e];
    if (el.n0 < 0 || el.n0 >= nn || el.n1 < 0 || el.n1 >= nn) fail("element node index out of range");
    if (el.curve < 0 || el.curve >= curve_count()) fail("element curve id out of range");
    if (!(length(e) > 0.0)) fail("degenerate element " + std::to_string(e));
    if (out_edge[el.n0] >= 0 || in_edge[el.n1] >= 0) fail("curve is not a simple cycle at element " + std::to_string(e));
    out_edge[el.n0] = e;
    in_edge[el.n1] = e;
    for (int v : {el.n0, el.n1}) {
      if (node_curve[v] >= 0 && node_curve[v] != el.curve) fail("node shared between curves");
      node_curve[v] = el.curve;
    }
  }
  for (int v = 0; v < nn; ++v) {
    if (out_edge[v] < 0 || in_edge[v] < 0) fail("curve is not closed at node " + std::to_string(v));
  }
  // each curve must be one cycle
  std::vector<int> count(curve_count(), 0);
  for (const Element& el : elements) ++count[el.curve];
  for (int c = 0; c < curve_count(); ++c) {
    int start = -1;
    for (int e = 0; e < element_count(); ++e) {
      if (elements[e].curve == c) {
        start = e;
        break;
      }
    }
    if (start < 0) fail("curve " + std::to_string(c) + " has no elements");
    if (count[c] < 3) fail("curve " + std::to_string(c) + " needs at least 3 elements");
    int steps = 0;
    int e = start;
    do {
      e = out_edge[elements[e].n1];
      ++steps;
    } while (e != start && steps <= count[c]);
    if (steps != count[c]) fail("curve " + std::to_string(c) + " splits into several cycles");
  }
}

double BoundaryMesh::length(int e) const {
  const Point2& p = nodes[elements[e].n0];
  const Point2& q = nodes[elements[e].n1];
  return std::hypot(q[0] - p[0], q[1] - p[1]);
}

Point2 BoundaryMesh::direction(int e) const {
  const Point2& p = nodes[elements[e].n0];
  const Point2& q = nodes[elements[e].n1];
  const double L = length(e);
  return {(q[0] - p[0]) / L, (q[1] - p[1]) / L};
}

Point2 BoundaryMesh::normal(int e) const {
  const Point2 d = direction(e);
  const double s = orientation[elements[e].curve];
  return {s * d[1], -s * d[0]};
}

double BoundaryMesh::total_length() const {
  double L = 0.0;
  for (int e = 0; e < element_count(); ++e) L += length(e);
  return L;
}

double BoundaryMesh::signed_area(int curve) const {
  double A = 0.0;
  for (const Element& el : elements) {
    if (el.curve != curve) continue;
    const Point2& p = nodes[el.n0];
    const Point2& q = nodes[el.n1];
    A += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * A;
}

double BoundaryMesh::max_element_length() const {
  double h = 0.0;
  for (int e = 0; e < element_count(); ++e) h = std::max(h, length(e));
  return h;
}

BoundaryMesh BoundaryMesh::flipped() const {
  BoundaryMesh m = *this;
  for (int& o : m.orientation) o = -o;
  return m;
}

BoundaryMesh make_circle(int n, double radius, Point2 center) {
  if (n < 3) fail("circle needs at least 3 elements");
  if (!(radius > 0.0)) fail("circle radius must be positive");
  BoundaryMesh m;
  m.orientation = {1};
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    m.nodes.push_back({center[0] + radius * std::cos(t), center[1] + radius * std::sin(t)});
    m.elements.push_back({k, (k + 1) % n, 0});
  }
  return m;
}

BoundaryMesh make_square(int n_per_side, double side, Point2 center) {
  if (n_per_side < 1) fail("square needs at least 1 element per side");
  if (!(side > 0.0)) fail("square side must be positive");
  const double h = side / 2.0;
  const Point2 corners[4] = {{center[0] - h, center[1] - h},
                             {center[0] + h, center[1] - h},
                             {center[0] + h, center[1] + h},
                             {center[0] - h, center[1] + h}};
  BoundaryMesh m;
  m.orientation = {1};
  const int n = 4 * n_per_side;
  for (int s = 0; s < 4; ++s) {
    const Point2& p = corners[s];
    const Point2& q = corners[(s + 1) % 4];
    for (int k = 0; k < n_per_side; ++k) {
      const double t = static_cast<double>(k) / n_per_side;
      m.nodes.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
    }
  }
  for (int k = 0; k < n; ++k) m.elements.push_back({k, (k + 1) % n, 0});
  return m;
}

std::pair<BoundaryMesh, BoundaryMesh> make_three_domain(const ThreeDomainPreset& p) {
  if (!(p.inner_size > 0.0 && p.outer_size > p.inner_size)) {
    fail("three-domain preset needs 0 < inner size < outer size");
  }
  if (p.shape == PresetShape::Circles) {
    return {make_circle(p.n_inner, p.inner_size), make_circle(p.n_outer, p.outer_size)};
  }
  if (p.n_inner % 4 != 0 || p.n_outer % 4 != 0) {
    fail("square preset needs element counts divisible by 4");
  }
  return {make_square(p.n_inner / 4, 2.0 * p.inner_size),
          make_square(p.n_outer / 4, 2.0 * p.outer_size)};
}

double min_distance(const BoundaryMesh& m1, const BoundaryMesh& m2) {
  double d = std::numeric_limits<double>::infinity();
  for (const Point2& p : m1.nodes) {
    for (const Point2& q : m2.nodes) d = std::min(d, std::hypot(p[0] - q[0], p[1] - q[1]));
  }
  return d;
}

void write_mesh(std::ostream& os, const BoundaryMesh& m) {
  os << "# boundary mesh: nodes (x y), elements (i j curve), orientation per curve\n";
  os << std::setprecision(17);
  os << "nodes " << m.node_count() << "\n";
  for (const Point2& p : m.nodes) os << p[0] << " " << p[1] << "\n";
  os << "elements " << m.element_count() << "\n";
  for (const Element& e : m.elements) os << e.n0 << " " << e.n1 << " " << e.curve << "\n";
  os << "orientation " << m.curve_count() << "\n";
  for (int c = 0; c < m.curve_count(); ++c) os << (c ? " " : "") << m.orientation[c];
  os << "\n";
}

BoundaryMesh read_mesh(std::istream& is) {
  BoundaryMesh m;
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };
  bool have_orientation = false;
  while (next_line()) {
    std::istringstream hs(line);
    std::string key;
    long count = -1;
    hs >> key >> count;
    if (count < 0) fail("mesh file: malformed section header '" + line + "'");
    if (key == "nodes") {
      for (long k = 0; k < count; ++k) {
        if (!next_line()) fail("mesh file: truncated node list");
        std::istringstream ls(line);
        Point2 p;
        if (!(ls >> p[0] >> p[1])) fail("mesh file: bad node line '" + line + "'");
        m.nodes.push_back(p);
      }
    } else if (key == "elements") {
      for (long k = 0; k < count; ++k) {
        if (!next_line()) fail("mesh file: truncated element list");
        std::istringstream ls(line);
        Element e;
        if (!(ls >> e.n0 >> e.n1 >> e.curve)) fail("mesh file: bad element line '" + line + "'");
        m.elements.push_back(e);
      }
    } else if (key == "orientation") {
      if (count > 0) {
        if (!next_line()) fail("mesh file: missing orientation flags");
        std::istringstream ls(line);
        for (long k = 0; k < count; ++k) {
          int o = 0;
          if (!(ls >> o)) fail("mesh file: bad orientation line");
          m.orientation.push_back(o);
        }
      }
      have_orientation = true;
    } else {
      fail("mesh file: unknown section '" + key + "'");
    }
  }
  if (!have_orientation) {
    int curves = 0;
    for (const Element& e : m.elements) curves = std::max(curves, e.curve + 1);
    m.orientation.assign(curves, 1);
  }
  m.validate();
  return m;
}

void save_mesh(const std::string& path, const BoundaryMesh& mesh) {
  std::ofstream os(path);
  if (!os) fail("cannot open '" + path + "' for writing");
  write_mesh(os, mesh);
}

BoundaryMesh load_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail("cannot open mesh file '" + path + "'");
  return read_mesh(is);
}

}  // namespace mtf::bem
