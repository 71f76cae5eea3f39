// Copyright 2026 The PIE Explorer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIE_GEOMETRY_HPP_
#define PIE_GEOMETRY_HPP_

#include <span>
#include <vector>

#include <Eigen/Core>

namespace pie
{

using Point2 = Eigen::Vector2d;

/// Simple polygon, vertices in counterclockwise order.
struct Polygon
{
  std::vector<Point2> vertices;

  bool operator==(const Polygon & other) const = default;
};

/// Axis-aligned rectangle [min, max].
struct Bounds
{
  Point2 min{0.0, 0.0};
  Point2 max{0.0, 0.0};

  double width() const { return max.x() - min.x(); }
  double height() const { return max.y() - min.y(); }
  bool contains(const Point2 & p, double margin = 0.0) const;

  bool operator==(const Bounds & other) const = default;
};

Polygon make_rectangle(const Point2 & min, const Point2 & max);

double signed_area(const Polygon & poly);
Point2 centroid(const Polygon & poly);
bool is_convex(const Polygon & poly);
bool is_simple(const Polygon & poly);

/// Inside-or-on-boundary test (boundary counts as inside).
bool contains(const Polygon & poly, const Point2 & p);

double point_segment_distance(const Point2 & p, const Point2 & a, const Point2 & b);

/// True when closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(const Point2 & a, const Point2 & b, const Point2 & c, const Point2 & d);

double segment_segment_distance(
  const Point2 & a, const Point2 & b, const Point2 & c, const Point2 & d);

/// Distance from a point to a polygon; 0 when the point is inside.
double distance_to_polygon(const Polygon & poly, const Point2 & p);

/// Distance from segment [a,b] to a polygon; 0 when they touch or overlap.
double segment_polygon_distance(const Polygon & poly, const Point2 & a, const Point2 & b);

/// True when segment [a,b] touches the polygon (crosses an edge or lies inside).
bool segment_hits_polygon(const Polygon & poly, const Point2 & a, const Point2 & b);

/// Segment stays at least `clearance` away from every obstacle.
bool segment_is_clear(
  std::span<const Polygon> obstacles, const Point2 & a, const Point2 & b, double clearance);

bool point_is_clear(std::span<const Polygon> obstacles, const Point2 & p, double clearance);

}  // namespace pie

#endif  // PIE_GEOMETRY_HPP_
