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

#include "pie/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pie
{
namespace
{

double cross(const Point2 & o, const Point2 & a, const Point2 & b)
{
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

int orientation(const Point2 & o, const Point2 & a, const Point2 & b)
{
  const double c = cross(o, a, b);
  const double scale = std::max({1.0, (a - o).norm(), (b - o).norm()});
  const double eps = 1e-12 * scale * scale;
  if (c > eps) {
    return 1;
  }
  if (c < -eps) {
    return -1;
  }
  return 0;
}

bool on_segment(const Point2 & p, const Point2 & a, const Point2 & b)
{
  return std::min(a.x(), b.x()) - 1e-12 <= p.x() && p.x() <= std::max(a.x(), b.x()) + 1e-12 &&
         std::min(a.y(), b.y()) - 1e-12 <= p.y() && p.y() <= std::max(a.y(), b.y()) + 1e-12;
}

}  // namespace

bool Bounds::contains(const Point2 & p, double margin) const
{
  return p.x() >= min.x() + margin && p.x() <= max.x() - margin && p.y() >= min.y() + margin &&
         p.y() <= max.y() - margin;
}

Polygon make_rectangle(const Point2 & min, const Point2 & max)
{
  return Polygon{{min, {max.x(), min.y()}, max, {min.x(), max.y()}}};
}

double signed_area(const Polygon & poly)
{
  const auto & v = poly.vertices;
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto & p = v[i];
    const auto & q = v[(i + 1) % v.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Point2 centroid(const Polygon & poly)
{
  const auto & v = poly.vertices;
  const double a = signed_area(poly);
  if (std::abs(a) < 1e-15) {
    Point2 mean = Point2::Zero();
    for (const auto & p : v) {
      mean += p;
    }
    return v.empty() ? mean : Point2(mean / static_cast<double>(v.size()));
  }
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto & p = v[i];
    const auto & q = v[(i + 1) % v.size()];
    const double f = p.x() * q.y() - q.x() * p.y();
    cx += (p.x() + q.x()) * f;
    cy += (p.y() + q.y()) * f;
  }
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

bool is_convex(const Polygon & poly)
{
  const auto & v = poly.vertices;
  if (v.size() < 3) {
    return false;
  }
  int sign = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int o = orientation(v[i], v[(i + 1) % v.size()], v[(i + 2) % v.size()]);
    if (o == 0) {
      continue;
    }
    if (sign == 0) {
      sign = o;
    } else if (o != sign) {
      return false;
    }
  }
  return sign != 0;
}

bool is_simple(const Polygon & poly)
{
  const auto & v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // adjacent edges share a vertex by construction
      if (j == i + 1 || (i == 0 && j == n - 1)) {
        continue;
      }
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

bool contains(const Polygon & poly, const Point2 & p)
{
  const auto & v = poly.vertices;
  const std::size_t n = v.size();
  if (n < 3) {
    return false;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (point_segment_distance(p, v[j], v[i]) <= 1e-12) {
      return true;
    }
    const bool crosses = (v[i].y() > p.y()) != (v[j].y() > p.y());
    if (crosses) {
      const double x_at =
        v[j].x() + (p.y() - v[j].y()) * (v[i].x() - v[j].x()) / (v[i].y() - v[j].y());
      if (p.x() < x_at) {
        inside = !inside;
      }
    }
  }
  return inside;
}

double point_segment_distance(const Point2 & p, const Point2 & a, const Point2 & b)
{
  const Point2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) {
    return (p - a).norm();
  }
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool segments_intersect(const Point2 & a, const Point2 & b, const Point2 & c, const Point2 & d)
{
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) {
    return true;
  }
  return (o1 == 0 && on_segment(c, a, b)) || (o2 == 0 && on_segment(d, a, b)) ||
         (o3 == 0 && on_segment(a, c, d)) || (o4 == 0 && on_segment(b, c, d));
}

double segment_segment_distance(
  const Point2 & a, const Point2 & b, const Point2 & c, const Point2 & d)
{
  if (segments_intersect(a, b, c, d)) {
    return 0.0;
  }
  return std::min(
    {point_segment_distance(a, c, d), point_segment_distance(b, c, d),
     point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

double distance_to_polygon(const Polygon & poly, const Point2 & p)
{
  if (contains(poly, p)) {
    return 0.0;
  }
  const auto & v = poly.vertices;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    best = std::min(best, point_segment_distance(p, v[i], v[(i + 1) % v.size()]));
  }
  return best;
}

double segment_polygon_distance(const Polygon & poly, const Point2 & a, const Point2 & b)
{
  if (contains(poly, a) || contains(poly, b)) {
    return 0.0;
  }
  const auto & v = poly.vertices;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    best = std::min(best, segment_segment_distance(a, b, v[i], v[(i + 1) % v.size()]));
    if (best == 0.0) {
      break;
    }
  }
  return best;
}

bool segment_hits_polygon(const Polygon & poly, const Point2 & a, const Point2 & b)
{
  if (contains(poly, a) || contains(poly, b)) {
    return true;
  }
  const auto & v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (segments_intersect(a, b, v[i], v[(i + 1) % v.size()])) {
      return true;
    }
  }
  return false;
}

bool segment_is_clear(
  std::span<const Polygon> obstacles, const Point2 & a, const Point2 & b, double clearance)
{
  for (const auto & obs : obstacles) {
    if (clearance <= 0.0) {
      if (segment_hits_polygon(obs, a, b)) {
        return false;
      }
    } else if (segment_polygon_distance(obs, a, b) < clearance) {
      return false;
    }
  }
  return true;
}

bool point_is_clear(std::span<const Polygon> obstacles, const Point2 & p, double clearance)
{
  for (const auto & obs : obstacles) {
    const double d = distance_to_polygon(obs, p);
    if (d == 0.0 || d < clearance) {
      return false;
    }
  }
  return true;
}

}  // namespace pie
