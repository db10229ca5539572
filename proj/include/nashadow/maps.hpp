#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nashadow/space.hpp"

namespace nashadow {

/// One time step f_n: X_n -> X_{n+1} of a nonautonomous family.
class StepMap {
public:
    virtual ~StepMap() = default;

    virtual Point apply(const Point& x) const = 0;

    /// All preimages of w, in branch-id order (ascending representative,
    /// lexicographic for products).
    virtual std::vector<Point> preimages(const Point& w) const = 0;

    /// The local inverse through the preimage z of w, evaluated at y.
    /// Only expanding maps provide this; the default throws NotExpanding.
    virtual Point inverse_branch(const Point& w, const Point& z, const Point& y) const;

    /// Lipschitz constant of every inverse branch, when the map is expanding.
    virtual std::optional<double> contraction_rate() const { return std::nullopt; }

    /// Radius of the balls on which inverse branches are defined.
    virtual std::optional<double> branch_radius() const { return std::nullopt; }

    virtual bool is_isometry() const { return false; }

    virtual std::string describe() const = 0;
};

using StepMapPtr = std::shared_ptr<const StepMap>;

/// Circle endomorphism given by a monotone piecewise-linear lift
/// L: [0,1] -> R with L(1) = L(0) + degree.
class CircleLiftMap final : public StepMap {
public:
    /// `knots` are (x, L(x)) pairs with x strictly increasing from 0 to 1 and
    /// L strictly increasing.
    CircleLiftMap(std::vector<std::pair<double, double>> knots, double branch_radius,
                  std::string name);

    /// x -> degree * x + shift (mod 1).
    static StepMapPtr linear(int degree, double shift = 0.0, double branch_radius = 0.25);
    /// x -> x + angle (mod 1).
    static StepMapPtr rotation(double angle);
    /// Degree-2 map with slope 1/rate on [0,1/2) and 4 - 1/rate on [1/2,1);
    /// every inverse branch is rate-Lipschitz. Needs rate in [1/2, 1).
    static StepMapPtr two_slope(double rate, double branch_radius = 0.25);

    Point apply(const Point& x) const override;
    std::vector<Point> preimages(const Point& w) const override;
    Point inverse_branch(const Point& w, const Point& z, const Point& y) const override;
    std::optional<double> contraction_rate() const override;
    std::optional<double> branch_radius() const override;
    bool is_isometry() const override;
    std::string describe() const override { return name_; }

    int degree() const noexcept { return degree_; }
    double lift(double x) const;          // x in [0,1]
    double lift_inverse(double t) const;  // any real t, periodic extension

private:
    std::vector<std::pair<double, double>> knots_;
    int degree_ = 1;
    double min_slope_ = 1.0;
    double max_slope_ = 1.0;
    double branch_radius_ = 0.25;
    std::string name_;
};

/// Continuous onto maps of [0,1]: identity and the full tent.
class IntervalMap final : public StepMap {
public:
    enum class Kind { Identity, Tent };
    explicit IntervalMap(Kind kind) : kind_(kind) {}

    Point apply(const Point& x) const override;
    std::vector<Point> preimages(const Point& w) const override;
    bool is_isometry() const override { return kind_ == Kind::Identity; }
    std::string describe() const override;

private:
    Kind kind_;
};

/// A transition table between finite spaces.
class FiniteMap final : public StepMap {
public:
    FiniteMap(std::vector<std::size_t> table, const StateSpace& domain,
              const StateSpace& codomain, std::string name = "table");

    Point apply(const Point& x) const override;
    std::vector<Point> preimages(const Point& w) const override;
    bool is_isometry() const override { return isometry_; }
    std::string describe() const override { return name_; }

    const std::vector<std::size_t>& table() const noexcept { return table_; }
    bool is_onto() const noexcept { return onto_; }

private:
    std::vector<std::size_t> table_;
    std::size_t codomain_size_;
    bool onto_ = false;
    bool isometry_ = false;
    std::string name_;
};

/// (f x g)(x, y) = (f(x), g(y)).
class ProductMap final : public StepMap {
public:
    ProductMap(StepMapPtr first, StepMapPtr second, std::size_t first_dimension);

    Point apply(const Point& x) const override;
    std::vector<Point> preimages(const Point& w) const override;
    Point inverse_branch(const Point& w, const Point& z, const Point& y) const override;
    std::optional<double> contraction_rate() const override;
    std::optional<double> branch_radius() const override;
    bool is_isometry() const override;
    std::string describe() const override;

private:
    std::pair<Point, Point> split(const Point& p) const;

    StepMapPtr first_;
    StepMapPtr second_;
    std::size_t k_;
};

}  // namespace nashadow
