#include "rte/mesh.hpp"

#include <string>

#include "rte/errors.hpp"

namespace rte {

namespace {

void check_axis(double lo, double hi, int n, const char* axis) {
  if (!(hi > lo)) {
    throw InvalidArgumentError(std::string("mesh: empty ") + axis + " interval");
  }
  if (n < 1) {
    throw InvalidArgumentError(std::string("mesh: ") + axis + " cell count must be positive");
  }
}

}  // namespace

SpatialMesh SpatialMesh::line(double x_min, double x_max, int nx) {
  check_axis(x_min, x_max, nx, "x");
  SpatialMesh m;
  m.dimension_ = 1;
  m.nx_ = nx;
  m.ny_ = 1;
  m.x_min_ = x_min;
  m.x_max_ = x_max;
  m.dx_ = (x_max - x_min) / nx;
  return m;
}

SpatialMesh SpatialMesh::plane(double x_min, double x_max, int nx, double y_min, double y_max,
                               int ny) {
  check_axis(x_min, x_max, nx, "x");
  check_axis(y_min, y_max, ny, "y");
  SpatialMesh m;
  m.dimension_ = 2;
  m.nx_ = nx;
  m.ny_ = ny;
  m.x_min_ = x_min;
  m.x_max_ = x_max;
  m.y_min_ = y_min;
  m.y_max_ = y_max;
  m.dx_ = (x_max - x_min) / nx;
  m.dy_ = (y_max - y_min) / ny;
  return m;
}

bool SpatialMesh::same_grid(const SpatialMesh& other) const noexcept {
  return dimension_ == other.dimension_ && nx_ == other.nx_ && ny_ == other.ny_ &&
         x_min_ == other.x_min_ && x_max_ == other.x_max_ && y_min_ == other.y_min_ &&
         y_max_ == other.y_max_;
}

}  // namespace rte
