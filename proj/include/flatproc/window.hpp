#pragma once

#include <string>
#include <vector>

#include "flatproc/core.hpp"

namespace flatproc {

// Closed ball or axis-parallel box centred at the origin, dilated by `scale`.
class WindowDescriptor {
 public:
  enum class Shape { Ball, Box };

  static WindowDescriptor ball(int n, double radius, double scale = 1.0);
  static WindowDescriptor box(std::vector<double> sides, double scale = 1.0);
  static WindowDescriptor unit_cube(int n, double scale = 1.0);
  // "ball:<radius>" or "box:<s1>,<s2>,..." or "cube".
  static WindowDescriptor parse(const std::string& text, int n, double scale = 1.0);

  int n() const { return n_; }
  Shape shape() const { return shape_; }
  double radius() const { return radius_ * scale_; }
  std::vector<double> sides() const;
  double scale() const { return scale_; }
  WindowDescriptor with_scale(double scale) const;

  bool contains(const Vector& x) const;
  double volume() const;
  double circumradius() const;
  // Length of the intersection of the window with the line p + t*u (u unit).
  double chord_length(const Vector& p, const Vector& u) const;
  std::string describe() const;

 private:
  int n_ = 0;
  Shape shape_ = Shape::Ball;
  double radius_ = 1.0;
  std::vector<double> sides_;
  double scale_ = 1.0;
};

}  // namespace flatproc
