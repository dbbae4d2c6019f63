#pragma once

#include <map>
#include <vector>

namespace rbmp {

enum class ZoneShape { hexagon, ball };

struct ZoneGeometry {
  int zone_id = 0;
  std::vector<double> center;
  double volume = 1.0;
  /// Distance from the zone centre to the region centre over the largest
  /// zone-to-zone centre distance.
  double normalized_center_distance = 0.0;
  ZoneShape shape = ZoneShape::hexagon;

  void validate() const;
};

using Adjacency = std::map<int, std::vector<int>>;

struct ZoneGrid {
  std::vector<ZoneGeometry> zones;
  Adjacency adjacency;
};

/// Circumradius of a regular hexagon with the given area.
double hex_circumradius(double area);

/// Point-in-hexagon test for a flat-top hexagon (vertices on the x axis).
bool hex_contains(const std::vector<double>& center, double circumradius, double x, double y);

/// Flat-top hexagons in an offset layout: `cols` columns of `rows` cells, odd
/// columns shifted up by half a cell. Zone ids run 1.. row-major from the
/// bottom-left cell; zones are adjacent when they share an edge.
ZoneGrid make_hex_grid(int cols, int rows, double zone_area = 1.0);

/// Fill normalized_center_distance from the zone centres.
void assign_normalized_distances(std::vector<ZoneGeometry>& zones);

}  // namespace rbmp
