#pragma once

// Uniform square-cell grids over a square domain, binary and relaxed fields
// on them, and the discrete perimeter / volume estimators.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <stdexcept>
#include <vector>

namespace setevo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Square domain [origin, origin + side]^2 split into cells x cells square
/// cells of size h = side / cells. Cell (i, j) has center
/// origin + ((i + 1/2) h, (j + 1/2) h); storage is row-major with j = 0 the
/// bottom row.
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(Vec2 origin, double side, int cells);

  /// Accepts per-axis sides and cell counts so that configuration input can be
  /// validated; anything other than a square domain with square cells throws.
  static GridSpec from_axes(Vec2 origin, Vec2 side, int cells_x, int cells_y);

  /// (-3, 3)^2 with the given resolution.
  static GridSpec standard(int cells = 256);

  [[nodiscard]] Vec2 origin() const { return origin_; }
  [[nodiscard]] double side() const { return side_; }
  [[nodiscard]] int cells() const { return cells_; }
  [[nodiscard]] int nx() const { return cells_; }
  [[nodiscard]] int ny() const { return cells_; }
  [[nodiscard]] double h() const { return side_ / cells_; }
  [[nodiscard]] double cell_area() const { return h() * h(); }
  [[nodiscard]] double area() const { return side_ * side_; }
  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(cells_) * static_cast<std::size_t>(cells_);
  }
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(cells_) +
           static_cast<std::size_t>(i);
  }
  [[nodiscard]] Vec2 center(int i, int j) const {
    return {origin_.x + (i + 0.5) * h(), origin_.y + (j + 0.5) * h()};
  }
  [[nodiscard]] Vec2 center(std::size_t idx) const {
    return center(static_cast<int>(idx % cells_), static_cast<int>(idx / cells_));
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  Vec2 origin_{-3.0, -3.0};
  double side_ = 6.0;
  int cells_ = 256;
};

/// Characteristic function of a set Z on a grid; every value is 0 or 1.
class BinaryField {
 public:
  BinaryField() = default;
  explicit BinaryField(GridSpec grid, std::uint8_t fill = 0);
  BinaryField(GridSpec grid, std::vector<std::uint8_t> values);

  static BinaryField full(const GridSpec& grid) { return BinaryField(grid, 1); }
  static BinaryField empty(const GridSpec& grid) { return BinaryField(grid, 0); }

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] std::span<const std::uint8_t> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  [[nodiscard]] std::uint8_t operator[](std::size_t idx) const { return values_[idx]; }
  [[nodiscard]] std::uint8_t at(int i, int j) const { return values_[grid_.index(i, j)]; }
  void set(std::size_t idx, bool on) { values_[idx] = on ? 1 : 0; }
  void set(int i, int j, bool on) { set(grid_.index(i, j), on); }

  [[nodiscard]] std::size_t count() const;
  [[nodiscard]] bool none() const { return count() == 0; }

  /// Cellwise z <= other.
  [[nodiscard]] bool subset_of(const BinaryField& other) const;
  [[nodiscard]] BinaryField complement() const;
  [[nodiscard]] BinaryField operator&(const BinaryField& other) const;
  [[nodiscard]] BinaryField operator|(const BinaryField& other) const;
  /// Set difference this \ other.
  [[nodiscard]] BinaryField operator-(const BinaryField& other) const;
  [[nodiscard]] std::size_t symmetric_difference_count(const BinaryField& other) const;

  friend bool operator==(const BinaryField&, const BinaryField&) = default;

 private:
  GridSpec grid_;
  std::vector<std::uint8_t> values_;
};

/// A [0, 1]-valued field, the convex relaxation of a BinaryField.
class RelaxedField {
 public:
  RelaxedField() = default;
  explicit RelaxedField(GridSpec grid, double fill = 0.0);
  RelaxedField(GridSpec grid, std::vector<double> values);
  static RelaxedField from_binary(const BinaryField& z);

  [[nodiscard]] const GridSpec& grid() const { return grid_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t idx) const { return values_[idx]; }
  [[nodiscard]] double at(int i, int j) const { return values_[grid_.index(i, j)]; }

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

enum class PerimeterScheme { anisotropic, isotropic };

const char* to_string(PerimeterScheme scheme);
PerimeterScheme perimeter_scheme_from_string(const std::string& name);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

/// Discrete total variation h * sum |D u| with forward differences; the last
/// column / row has no forward neighbour and contributes nothing, so the box
/// boundary never counts (perimeter relative to the domain).
double total_variation(std::span<const double> values, int nx, int ny, double h,
                       PerimeterScheme scheme);
double total_variation(const RelaxedField& u, PerimeterScheme scheme);

double perimeter_estimate(const BinaryField& z, PerimeterScheme scheme);

/// h^2 * number of ones.
double volume(const BinaryField& z);

/// h^2 * number of one-cells whose center lies in the closed ball.
double ball_intersection_volume(const BinaryField& z, Vec2 center, double radius);

struct Components {
  int count = 0;
  /// 0 for background, 1..count for components, numbered by first cell in
  /// scan order.
  std::vector<int> labels;
};

/// 4-neighbour connected components of the ones.
Components connected_components(const BinaryField& z);

}  // namespace setevo
