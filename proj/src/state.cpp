#include "imcf/state.hpp"

#include <cmath>
#include <string>

#include "imcf/errors.hpp"

namespace imcf {

std::size_t Grid::size() const {
  const auto p = static_cast<std::size_t>(points_per_axis);
  return n == 1 ? p : p * p;
}

std::size_t Grid::index(int i0, int i1) const {
  const auto p = static_cast<std::size_t>(points_per_axis);
  if (n == 1) return static_cast<std::size_t>(wrap(i0));
  return static_cast<std::size_t>(wrap(i0)) * p + static_cast<std::size_t>(wrap(i1));
}

std::array<int, 2> Grid::coords(std::size_t flat) const {
  if (n == 1) return {static_cast<int>(flat), 0};
  const auto p = static_cast<std::size_t>(points_per_axis);
  return {static_cast<int>(flat / p), static_cast<int>(flat % p)};
}

Vec2 Grid::position(std::size_t flat) const {
  const auto c = coords(flat);
  const double h = spacing();
  return {c[0] * h, n == 2 ? c[1] * h : 0.0};
}

void Grid::validate() const {
  if (n != 1 && n != 2) throw InvalidConfig("grid dimension must be 1 or 2, got " + std::to_string(n));
  if (points_per_axis < 8)
    throw InvalidConfig("grid needs at least 8 points per axis, got " + std::to_string(points_per_axis));
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidConfig("grid length must be positive and finite");
}

bool operator==(const Grid& a, const Grid& b) {
  return a.n == b.n && a.points_per_axis == b.points_per_axis && a.length == b.length;
}

void GraphState::require_positive() const {
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (!(y[k] > 0.0) || !std::isfinite(y[k])) throw NonPositiveHeight({k, 0}, y[k]);
  }
}

}  // namespace imcf
