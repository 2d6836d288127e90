#pragma once

#include <cmath>
#include <stdexcept>

namespace epidemica {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Shortest displacement from a to b on the wrap-around square [0,L)^2,
// component-wise in (-L/2, L/2].
inline Vec2 toroidal_delta(const Vec2& a, const Vec2& b, double box_length) {
  double dx = b.x - a.x;
  double dy = b.y - a.y;
  if (dx > 0.5 * box_length) dx -= box_length;
  if (dx < -0.5 * box_length) dx += box_length;
  if (dy > 0.5 * box_length) dy -= box_length;
  if (dy < -0.5 * box_length) dy += box_length;
  return {dx, dy};
}

// Minimum distance over periodic images. Symmetric, bounded by L*sqrt(2)/2.
inline double toroidal_distance(const Vec2& p, const Vec2& q, double box_length) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(q.x) ||
      !std::isfinite(q.y) || !std::isfinite(box_length)) {
    throw std::invalid_argument("toroidal_distance: non-finite input");
  }
  const Vec2 d = toroidal_delta(p, q, box_length);
  return std::hypot(d.x, d.y);
}

inline double wrap_coordinate(double x, double box_length) {
  double w = std::fmod(x, box_length);
  if (w < 0.0) w += box_length;
  return w;
}

}  // namespace epidemica
