#include "setevo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace setevo {

GridSpec::GridSpec(Vec2 origin, double side, int cells)
    : origin_(origin), side_(side), cells_(cells) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw GridError("grid side must be positive and finite");
  }
  if (cells < 2) {
    throw GridError("grid needs at least 2 cells per axis");
  }
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) {
    throw GridError("grid origin must be finite");
  }
}

GridSpec GridSpec::from_axes(Vec2 origin, Vec2 side, int cells_x, int cells_y) {
  if (cells_x != cells_y) {
    throw GridError("rectangular grids are not supported: cells per axis differ");
  }
  if (side.x != side.y) {
    throw GridError("rectangular grids are not supported: side lengths differ");
  }
  return GridSpec(origin, side.x, cells_x);
}

GridSpec GridSpec::standard(int cells) { return GridSpec({-3.0, -3.0}, 6.0, cells); }

BinaryField::BinaryField(GridSpec grid, std::uint8_t fill)
    : grid_(grid), values_(grid.size(), fill ? 1 : 0) {}

BinaryField::BinaryField(GridSpec grid, std::vector<std::uint8_t> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridError("binary field size does not match grid");
  }
  for (auto v : values_) {
    if (v > 1) throw GridError("binary field values must be 0 or 1");
  }
}

std::size_t BinaryField::count() const {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), 1));
}

bool BinaryField::subset_of(const BinaryField& other) const {
  require_same_grid(grid_, other.grid_, "subset_of");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] > other.values_[k]) return false;
  }
  return true;
}

BinaryField BinaryField::complement() const {
  BinaryField out(grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] = 1 - values_[k];
  return out;
}

BinaryField BinaryField::operator&(const BinaryField& other) const {
  require_same_grid(grid_, other.grid_, "intersection");
  BinaryField out(grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] = values_[k] & other.values_[k];
  return out;
}

BinaryField BinaryField::operator|(const BinaryField& other) const {
  require_same_grid(grid_, other.grid_, "union");
  BinaryField out(grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] = values_[k] | other.values_[k];
  return out;
}

BinaryField BinaryField::operator-(const BinaryField& other) const {
  require_same_grid(grid_, other.grid_, "difference");
  BinaryField out(grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) {
    out.values_[k] = values_[k] & static_cast<std::uint8_t>(1 - other.values_[k]);
  }
  return out;
}

std::size_t BinaryField::symmetric_difference_count(const BinaryField& other) const {
  require_same_grid(grid_, other.grid_, "symmetric difference");
  std::size_t n = 0;
  for (std::size_t k = 0; k < values_.size(); ++k) n += values_[k] != other.values_[k];
  return n;
}

RelaxedField::RelaxedField(GridSpec grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {}

RelaxedField::RelaxedField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridError("relaxed field size does not match grid");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw GridError("relaxed field values must lie in [0, 1]");
  }
}

RelaxedField RelaxedField::from_binary(const BinaryField& z) {
  std::vector<double> v(z.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = z[k];
  return RelaxedField(z.grid(), std::move(v));
}

const char* to_string(PerimeterScheme scheme) {
  return scheme == PerimeterScheme::anisotropic ? "anisotropic" : "isotropic";
}

PerimeterScheme perimeter_scheme_from_string(const std::string& name) {
  if (name == "anisotropic" || name == "anisotropic-l1") return PerimeterScheme::anisotropic;
  if (name == "isotropic" || name == "isotropic-l2") return PerimeterScheme::isotropic;
  throw std::invalid_argument("unknown perimeter scheme '" + name + "'");
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw GridError(std::string(what) + ": grid mismatch");
}

namespace {

template <typename T>
double tv_impl(const T* u, int nx, int ny, double h, PerimeterScheme scheme) {
  double sum = 0.0;
  for (int j = 0; j < ny; ++j) {
    const T* row = u + static_cast<std::size_t>(j) * nx;
    const T* up = j + 1 < ny ? row + nx : nullptr;
    for (int i = 0; i < nx; ++i) {
      const double c = static_cast<double>(row[i]);
      const double dx = i + 1 < nx ? static_cast<double>(row[i + 1]) - c : 0.0;
      const double dy = up ? static_cast<double>(up[i]) - c : 0.0;
      if (scheme == PerimeterScheme::anisotropic) {
        sum += std::abs(dx) + std::abs(dy);
      } else if (dx != 0.0 || dy != 0.0) {
        sum += std::sqrt(dx * dx + dy * dy);
      }
    }
  }
  return h * sum;
}

}  // namespace

double total_variation(std::span<const double> values, int nx, int ny, double h,
                       PerimeterScheme scheme) {
  if (values.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw GridError("total_variation: size mismatch");
  }
  return tv_impl(values.data(), nx, ny, h, scheme);
}

double total_variation(const RelaxedField& u, PerimeterScheme scheme) {
  const auto& g = u.grid();
  return tv_impl(u.values().data(), g.nx(), g.ny(), g.h(), scheme);
}

double perimeter_estimate(const BinaryField& z, PerimeterScheme scheme) {
  const auto& g = z.grid();
  return tv_impl(z.values().data(), g.nx(), g.ny(), g.h(), scheme);
}

double volume(const BinaryField& z) {
  return static_cast<double>(z.count()) * z.grid().cell_area();
}

double ball_intersection_volume(const BinaryField& z, Vec2 center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  const auto& g = z.grid();
  const double h = g.h();
  const int i0 = std::max(0, static_cast<int>(std::floor((center.x - radius - g.origin().x) / h)) - 1);
  const int i1 = std::min(g.nx() - 1, static_cast<int>(std::ceil((center.x + radius - g.origin().x) / h)) + 1);
  const int j0 = std::max(0, static_cast<int>(std::floor((center.y - radius - g.origin().y) / h)) - 1);
  const int j1 = std::min(g.ny() - 1, static_cast<int>(std::ceil((center.y + radius - g.origin().y) / h)) + 1);
  const double r2 = radius * radius;
  std::size_t n = 0;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      if (!z.at(i, j)) continue;
      const Vec2 c = g.center(i, j);
      const double dx = c.x - center.x;
      const double dy = c.y - center.y;
      if (dx * dx + dy * dy <= r2) ++n;
    }
  }
  return static_cast<double>(n) * g.cell_area();
}

Components connected_components(const BinaryField& z) {
  const auto& g = z.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  Components out;
  out.labels.assign(z.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < z.size(); ++start) {
    if (!z[start] || out.labels[start] != 0) continue;
    const int label = ++out.count;
    out.labels[start] = label;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      const int i = static_cast<int>(k % nx);
      const int j = static_cast<int>(k / nx);
      auto visit = [&](int ii, int jj) {
        if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) return;
        const std::size_t q = g.index(ii, jj);
        if (z[q] && out.labels[q] == 0) {
          out.labels[q] = label;
          stack.push_back(q);
        }
      };
      visit(i - 1, j);
      visit(i + 1, j);
      visit(i, j - 1);
      visit(i, j + 1);
    }
  }
  return out;
}

}  // namespace setevo
