#include "rbmp/hexgrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbmp {

namespace {

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

void ZoneGeometry::validate() const {
  if (!(volume > 0.0)) throw std::domain_error("ZoneGeometry: volume must be positive");
  if (!(normalized_center_distance >= 0.0 && normalized_center_distance <= 1.0)) {
    throw std::domain_error("ZoneGeometry: normalized centre distance must lie in [0, 1]");
  }
  if (shape == ZoneShape::hexagon && center.size() != 2) {
    throw std::domain_error("ZoneGeometry: hexagonal zones need a 2-D centre");
  }
}

double hex_circumradius(double area) {
  if (!(area > 0.0)) throw std::domain_error("hex_circumradius: area must be positive");
  return std::sqrt(2.0 * area / (3.0 * std::sqrt(3.0)));
}

bool hex_contains(const std::vector<double>& center, double circumradius, double x, double y) {
  const double dx = std::fabs(x - center[0]);
  const double dy = std::fabs(y - center[1]);
  const double half_height = std::sqrt(3.0) / 2.0 * circumradius;
  return dy <= half_height && std::sqrt(3.0) * dx + dy <= std::sqrt(3.0) * circumradius;
}

void assign_normalized_distances(std::vector<ZoneGeometry>& zones) {
  if (zones.empty()) return;
  const std::size_t dim = zones.front().center.size();
  std::vector<double> centroid(dim, 0.0);
  for (const auto& z : zones) {
    for (std::size_t i = 0; i < dim; ++i) centroid[i] += z.center[i] / zones.size();
  }
  double max_pair = 0.0;
  for (const auto& a : zones) {
    for (const auto& b : zones) max_pair = std::max(max_pair, euclid(a.center, b.center));
  }
  for (auto& z : zones) {
    z.normalized_center_distance = max_pair > 0.0 ? euclid(z.center, centroid) / max_pair : 0.0;
  }
}

ZoneGrid make_hex_grid(int cols, int rows, double zone_area) {
  if (cols < 1 || rows < 1) throw std::domain_error("make_hex_grid: need at least one row and column");
  const double a = hex_circumradius(zone_area);
  const double step_y = std::sqrt(3.0) * a;
  ZoneGrid grid;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      ZoneGeometry z;
      z.zone_id = r * cols + c + 1;
      z.center = {1.5 * a * c, step_y * (r + 0.5 * (c % 2))};
      z.volume = zone_area;
      z.shape = ZoneShape::hexagon;
      grid.zones.push_back(std::move(z));
    }
  }
  assign_normalized_distances(grid.zones);
  for (const auto& z : grid.zones) {
    auto& nbrs = grid.adjacency[z.zone_id];
    for (const auto& w : grid.zones) {
      if (w.zone_id == z.zone_id) continue;
      if (std::fabs(euclid(z.center, w.center) - step_y) < 1e-9 * step_y) nbrs.push_back(w.zone_id);
    }
  }
  return grid;
}

}  // namespace rbmp
