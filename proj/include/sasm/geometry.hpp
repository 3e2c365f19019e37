#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace sasm {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

using Point2d = Point2<double>;

/// Axis-aligned box in center/size form, normalized image coordinates.
template <typename Scalar>
struct Box2D {
  Scalar cx{0};
  Scalar cy{0};
  Scalar w{1};
  Scalar h{1};

  Scalar left() const { return cx - w / Scalar(2); }
  Scalar top() const { return cy - h / Scalar(2); }
  Scalar right() const { return cx + w / Scalar(2); }
  Scalar bottom() const { return cy + h / Scalar(2); }
  Scalar area() const { return w * h; }

  bool valid() const {
    return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(w) &&
           std::isfinite(h) && w > Scalar(0) && h > Scalar(0);
  }

  static Box2D fromCorners(Scalar x1, Scalar y1, Scalar x2, Scalar y2) {
    return {(x1 + x2) / Scalar(2), (y1 + y2) / Scalar(2), x2 - x1, y2 - y1};
  }

  template <typename Other>
  Box2D<Other> cast() const {
    return {Other(cx), Other(cy), Other(w), Other(h)};
  }

  bool operator==(const Box2D &) const = default;
};

using Box2d = Box2D<double>;
using Box2f = Box2D<float>;

template <typename Scalar>
void checkBox(const Box2D<Scalar> &b) {
  if (!b.valid())
    throw std::invalid_argument("box must have finite fields and w, h > 0");
}

template <typename Scalar>
inline Point2<Scalar> center(const Box2D<Scalar> &b) {
  return Point2<Scalar>(b.cx, b.cy);
}

template <typename Derived1, typename Derived2>
inline typename Derived1::Scalar
euclideanDistance(const Eigen::MatrixBase<Derived1> &a,
                  const Eigen::MatrixBase<Derived2> &b) {
  return (a - b).norm();
}

/// Intersection over union. Corner form is derived per call; the expression
/// order is symmetric in (a, b) so iou(a, b) == iou(b, a) bit for bit.
template <typename Scalar>
Scalar iou(const Box2D<Scalar> &a, const Box2D<Scalar> &b) {
  const Scalar ix = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const Scalar iy = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (ix <= Scalar(0) || iy <= Scalar(0))
    return Scalar(0);
  const Scalar inter = ix * iy;
  const Scalar uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, Scalar(0), Scalar(1));
}

/// Largest IoU of boxes[idx] against every other box; 0 for a singleton.
template <typename Scalar>
Scalar maxIouVsOthers(std::size_t idx, std::span<const Box2D<Scalar>> boxes) {
  if (idx >= boxes.size())
    throw std::out_of_range("maxIouVsOthers: index " + std::to_string(idx) +
                            " out of range for " +
                            std::to_string(boxes.size()) + " boxes");
  Scalar best(0);
  for (std::size_t j = 0; j < boxes.size(); ++j)
    if (j != idx)
      best = std::max(best, iou(boxes[idx], boxes[j]));
  return best;
}

/// Index of the box overlapping boxes[idx] the most, or -1 when none overlaps.
template <typename Scalar>
long argmaxIouVsOthers(std::size_t idx, std::span<const Box2D<Scalar>> boxes) {
  long arg = -1;
  Scalar best(0);
  for (std::size_t j = 0; j < boxes.size(); ++j) {
    if (j == idx)
      continue;
    const Scalar v = iou(boxes[idx], boxes[j]);
    if (v > best) {
      best = v;
      arg = static_cast<long>(j);
    }
  }
  return arg;
}

} // namespace sasm
