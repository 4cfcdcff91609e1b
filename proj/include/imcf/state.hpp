/// @file state.hpp
/// @brief Periodic grid and the graph height function evolved by the flow.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace imcf {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Uniform periodic grid on the torus [0, L)^n, n in {1, 2}.
struct Grid {
  int n = 1;
  int points_per_axis = 64;
  double length = 1.0;

  double spacing() const { return length / points_per_axis; }
  std::size_t size() const;

  /// Flat index of (i0, i1) with row-major order; i1 ignored when n == 1.
  std::size_t index(int i0, int i1 = 0) const;
  /// Per-axis integer coordinates of a flat index.
  std::array<int, 2> coords(std::size_t flat) const;
  /// Physical coordinates x_d = i_d * h.
  Vec2 position(std::size_t flat) const;

  /// Throws InvalidConfig on n not in {1,2}, points < 8 or non-positive length.
  void validate() const;

  int wrap(int i) const {
    const int p = points_per_axis;
    return ((i % p) + p) % p;
  }
};

bool operator==(const Grid& a, const Grid& b);

/// Height y(x, t) > 0 of the graph x -> (x, y(x)) over {y = 0} at time t.
struct GraphState {
  Grid grid;
  double t = 0.0;
  std::vector<double> y;

  /// Throws NonPositiveHeight on the first entry that is <= 0 or not finite.
  void require_positive() const;
};

/// Samples f(x) on every grid point.
template <class F>
GraphState sample_state(const Grid& grid, double t, F&& f) {
  GraphState s{grid, t, std::vector<double>(grid.size())};
  for (std::size_t k = 0; k < s.y.size(); ++k) s.y[k] = f(grid.position(k));
  return s;
}

}  // namespace imcf
