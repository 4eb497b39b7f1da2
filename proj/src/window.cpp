#include "flatproc/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "flatproc/special.hpp"

namespace flatproc {

WindowDescriptor WindowDescriptor::ball(int n, double radius, double scale) {
  if (n <= 0 || !(radius > 0.0) || !(scale > 0.0)) throw Error("ball window needs positive size");
  WindowDescriptor w;
  w.n_ = n;
  w.shape_ = Shape::Ball;
  w.radius_ = radius;
  w.scale_ = scale;
  return w;
}

WindowDescriptor WindowDescriptor::box(std::vector<double> sides, double scale) {
  if (sides.empty() || !(scale > 0.0)) throw Error("box window needs positive size");
  for (double s : sides)
    if (!(s > 0.0)) throw Error("box window needs positive side lengths");
  WindowDescriptor w;
  w.n_ = static_cast<int>(sides.size());
  w.shape_ = Shape::Box;
  w.sides_ = std::move(sides);
  w.scale_ = scale;
  return w;
}

WindowDescriptor WindowDescriptor::unit_cube(int n, double scale) {
  return box(std::vector<double>(static_cast<std::size_t>(n), 1.0), scale);
}

WindowDescriptor WindowDescriptor::parse(const std::string& text, int n, double scale) {
  if (text == "cube") return unit_cube(n, scale);
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "ball") return ball(n, rest.empty() ? 1.0 : std::stod(rest), scale);
  if (kind == "box") {
    std::vector<double> sides;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) sides.push_back(std::stod(item));
    if (static_cast<int>(sides.size()) != n) throw Error("box window needs one side per dimension");
    return box(std::move(sides), scale);
  }
  throw Error("unknown window descriptor: " + text);
}

std::vector<double> WindowDescriptor::sides() const {
  std::vector<double> out = sides_;
  for (double& s : out) s *= scale_;
  return out;
}

WindowDescriptor WindowDescriptor::with_scale(double scale) const {
  WindowDescriptor w = *this;
  w.scale_ = scale;
  return w;
}

bool WindowDescriptor::contains(const Vector& x) const {
  if (shape_ == Shape::Ball) return x.norm() <= radius();
  for (int i = 0; i < n_; ++i) {
    if (std::abs(x(i)) > 0.5 * sides_[i] * scale_) return false;
  }
  return true;
}

double WindowDescriptor::volume() const {
  if (shape_ == Shape::Ball) return kappa(n_) * std::pow(radius(), n_);
  double v = 1.0;
  for (double s : sides_) v *= s * scale_;
  return v;
}

double WindowDescriptor::circumradius() const {
  if (shape_ == Shape::Ball) return radius();
  double s = 0.0;
  for (double side : sides_) s += 0.25 * side * side;
  return std::sqrt(s) * scale_;
}

double WindowDescriptor::chord_length(const Vector& p, const Vector& u) const {
  if (shape_ == Shape::Ball) {
    const double b = p.dot(u);
    const double disc = b * b - (p.squaredNorm() - radius() * radius());
    return disc > 0.0 ? 2.0 * std::sqrt(disc) : 0.0;
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i) {
    const double half = 0.5 * sides_[i] * scale_;
    if (std::abs(u(i)) < 1e-300) {
      if (std::abs(p(i)) > half) return 0.0;
      continue;
    }
    double t0 = (-half - p(i)) / u(i);
    double t1 = (half - p(i)) / u(i);
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
  }
  return std::max(0.0, hi - lo);
}

std::string WindowDescriptor::describe() const {
  std::ostringstream os;
  if (shape_ == Shape::Ball) {
    os << "ball:" << radius_;
  } else {
    os << "box:";
    for (std::size_t i = 0; i < sides_.size(); ++i) os << (i ? "," : "") << sides_[i];
  }
  if (scale_ != 1.0) os << "@" << scale_;
  return os.str();
}

}  // namespace flatproc
