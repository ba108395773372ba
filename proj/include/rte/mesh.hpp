#pragma once

#include <cstddef>

namespace rte {

/// Uniform, cell-centered, periodic grid in one or two dimensions.
///
/// Cells are numbered x-fastest: cell(i, j) = i + nx * j.
class SpatialMesh {
 public:
  static SpatialMesh line(double x_min, double x_max, int nx);
  static SpatialMesh plane(double x_min, double x_max, int nx, double y_min, double y_max, int ny);

  int dimension() const noexcept { return dimension_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_min() const noexcept { return y_min_; }
  double y_max() const noexcept { return y_max_; }

  std::size_t cells() const noexcept {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  }
  /// dx in 1D, dx*dy in 2D.
  double cell_volume() const noexcept { return dimension_ == 1 ? dx_ : dx_ * dy_; }
  /// Domain length (1D) or area (2D).
  double measure() const noexcept { return cell_volume() * static_cast<double>(cells()); }

  double x_center(int i) const noexcept { return x_min_ + (i + 0.5) * dx_; }
  double y_center(int j) const noexcept { return y_min_ + (j + 0.5) * dy_; }

  int wrap_x(int i) const noexcept { return ((i % nx_) + nx_) % nx_; }
  int wrap_y(int j) const noexcept { return ((j % ny_) + ny_) % ny_; }
  /// Periodic cell index.
  std::size_t cell(int i, int j = 0) const noexcept {
    return static_cast<std::size_t>(wrap_x(i)) +
           static_cast<std::size_t>(nx_) * static_cast<std::size_t>(wrap_y(j));
  }

  bool same_grid(const SpatialMesh& other) const noexcept;

 private:
  int dimension_ = 1;
  int nx_ = 1;
  int ny_ = 1;
  double x_min_ = 0.0, x_max_ = 1.0, y_min_ = 0.0, y_max_ = 1.0;
  double dx_ = 1.0, dy_ = 1.0;
};

}  // namespace rte
