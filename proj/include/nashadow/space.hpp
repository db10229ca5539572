#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace nashadow {

// A point is a flat coordinate vector. Circle and interval spaces use one
// real coordinate, finite spaces one integer-valued coordinate (the state
// index), and products concatenate the coordinates of their factors.
using Point = std::vector<double>;

enum class SpaceKind { Circle, Interval, Finite, Product };

/// Per-coordinate kind of a (possibly product) space, factors flattened.
enum class CoordKind { Circle, Interval, Finite };

class StateSpace {
public:
    /// The circle R/Z with the arc metric min(|a-b|, 1-|a-b|).
    static StateSpace circle(std::string label = "circle");
    /// [0,1] with |a-b|.
    static StateSpace interval(std::string label = "interval");
    /// n points with an explicit symmetric distance matrix (row-major, n*n).
    /// Throws InvalidArgument unless the matrix is a metric.
    static StateSpace finite(std::vector<std::vector<double>> distances,
                             std::string label = "finite");
    /// n points, every pair at distance 1.
    static StateSpace discrete(std::size_t n, std::string label = "discrete");
    /// Finite space of points on a line, d(i,j) = |p_i - p_j|.
    static StateSpace line_points(const std::vector<double>& positions,
                                  std::string label = "line");
    /// X x Y with the max metric.
    static StateSpace product(const StateSpace& first, const StateSpace& second);

    SpaceKind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }

    std::size_t dimension() const noexcept { return coords_.size(); }
    const std::vector<CoordKind>& coordinate_kinds() const noexcept { return coords_; }

    double distance(const Point& a, const Point& b) const;
    bool contains(const Point& p, double tol = 1e-12) const;
    /// Reduces circle coordinates to [0,1); other coordinates untouched.
    Point canonical(Point p) const;
    double diameter() const;

    /// True for finite spaces and products of finite spaces.
    bool is_finite() const noexcept;
    /// True when no coordinate is finite.
    bool is_continuous() const noexcept;
    std::size_t cardinality() const;
    Point point_at(std::size_t index) const;
    std::size_t index_of(const Point& p) const;
    /// Smallest positive distance (finite spaces only).
    double min_positive_distance() const;

    const StateSpace& first() const;
    const StateSpace& second() const;

    /// Moves coordinate `coord` by `offset`: wraps on the circle, clamps on
    /// the interval. Finite coordinates cannot be shifted.
    Point shift(const Point& p, std::size_t coord, double offset) const;

    bool operator==(const StateSpace& other) const;
    bool operator!=(const StateSpace& other) const { return !(*this == other); }

private:
    StateSpace() = default;

    SpaceKind kind_ = SpaceKind::Circle;
    std::string label_;
    std::vector<CoordKind> coords_;
    std::shared_ptr<const std::vector<double>> matrix_;  // finite: n*n
    std::size_t n_ = 0;                                  // finite cardinality
    std::shared_ptr<const StateSpace> first_;
    std::shared_ptr<const StateSpace> second_;
};

/// Arc distance on R/Z after reduction to [0,1).
double circle_distance(double a, double b) noexcept;
/// Reduces to [0,1).
double wrap_unit(double x) noexcept;
/// Signed shortest displacement from a to b on the circle, in [-1/2, 1/2).
double circle_signed_delta(double a, double b) noexcept;

}  // namespace nashadow
