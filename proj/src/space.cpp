#include "nashadow/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nashadow/errors.hpp"

namespace nashadow {

double wrap_unit(double x) noexcept {
    double r = x - std::floor(x);
    // floor can round x - floor(x) up to exactly 1 for tiny negative x
    return r >= 1.0 ? 0.0 : r;
}

double circle_distance(double a, double b) noexcept {
    const double d = std::fabs(wrap_unit(a) - wrap_unit(b));
    return std::min(d, 1.0 - d);
}

double circle_signed_delta(double a, double b) noexcept {
    double d = wrap_unit(b) - wrap_unit(a);
    if (d >= 0.5) d -= 1.0;
    if (d < -0.5) d += 1.0;
    return d;
}

StateSpace StateSpace::circle(std::string label) {
    StateSpace s;
    s.kind_ = SpaceKind::Circle;
    s.label_ = std::move(label);
    s.coords_ = {CoordKind::Circle};
    return s;
}

StateSpace StateSpace::interval(std::string label) {
    StateSpace s;
    s.kind_ = SpaceKind::Interval;
    s.label_ = std::move(label);
    s.coords_ = {CoordKind::Interval};
    return s;
}

StateSpace StateSpace::finite(std::vector<std::vector<double>> distances, std::string label) {
    const std::size_t n = distances.size();
    if (n == 0) fail(ErrorCode::InvalidArgument, "finite space needs at least one point");
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (distances[i].size() != n)
            fail(ErrorCode::InvalidArgument, "distance matrix must be square");
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = distances[i][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i * n + i] != 0.0) fail(ErrorCode::InvalidArgument, "nonzero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            if (m[i * n + j] != m[j * n + i])
                fail(ErrorCode::InvalidArgument, "distance matrix not symmetric");
            if (i != j && !(m[i * n + j] > 0.0))
                fail(ErrorCode::InvalidArgument, "distinct points at distance zero");
            for (std::size_t k = 0; k < n; ++k) {
                if (m[i * n + k] > m[i * n + j] + m[j * n + k] + 1e-12)
                    fail(ErrorCode::InvalidArgument, "triangle inequality violated");
            }
        }
    }
    StateSpace s;
    s.kind_ = SpaceKind::Finite;
    s.label_ = std::move(label);
    s.coords_ = {CoordKind::Finite};
    s.n_ = n;
    s.matrix_ = std::make_shared<const std::vector<double>>(std::move(m));
    return s;
}

StateSpace StateSpace::discrete(std::size_t n, std::string label) {
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    return finite(std::move(d), std::move(label));
}

StateSpace StateSpace::line_points(const std::vector<double>& positions, std::string label) {
    const std::size_t n = positions.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = std::fabs(positions[i] - positions[j]);
    return finite(std::move(d), std::move(label));
}

StateSpace StateSpace::product(const StateSpace& first, const StateSpace& second) {
    StateSpace s;
    s.kind_ = SpaceKind::Product;
    s.label_ = first.label_ + "x" + second.label_;
    s.coords_ = first.coords_;
    s.coords_.insert(s.coords_.end(), second.coords_.begin(), second.coords_.end());
    s.first_ = std::make_shared<const StateSpace>(first);
    s.second_ = std::make_shared<const StateSpace>(second);
    return s;
}

namespace {

Point slice(const Point& p, std::size_t from, std::size_t count) {
    return Point(p.begin() + static_cast<std::ptrdiff_t>(from),
                 p.begin() + static_cast<std::ptrdiff_t>(from + count));
}

}  // namespace

double StateSpace::distance(const Point& a, const Point& b) const {
    if (a.size() != dimension() || b.size() != dimension())
        fail(ErrorCode::PointOutsideSpace, "coordinate count mismatch in " + label_);
    switch (kind_) {
        case SpaceKind::Circle: return circle_distance(a[0], b[0]);
        case SpaceKind::Interval: return std::fabs(a[0] - b[0]);
        case SpaceKind::Finite: {
            const auto i = static_cast<std::size_t>(a[0]);
            const auto j = static_cast<std::size_t>(b[0]);
            if (i >= n_ || j >= n_) fail(ErrorCode::PointOutsideSpace, "state index out of range");
            return (*matrix_)[i * n_ + j];
        }
        case SpaceKind::Product: {
            const std::size_t k = first_->dimension();
            const std::size_t r = second_->dimension();
            return std::max(first_->distance(slice(a, 0, k), slice(b, 0, k)),
                            second_->distance(slice(a, k, r), slice(b, k, r)));
        }
    }
    return 0.0;
}

bool StateSpace::contains(const Point& p, double tol) const {
    if (p.size() != dimension()) return false;
    switch (kind_) {
        case SpaceKind::Circle: return std::isfinite(p[0]);
        case SpaceKind::Interval: return p[0] >= -tol && p[0] <= 1.0 + tol;
        case SpaceKind::Finite:
            return p[0] >= 0.0 && p[0] == std::floor(p[0]) && p[0] < static_cast<double>(n_);
        case SpaceKind::Product: {
            const std::size_t k = first_->dimension();
            return first_->contains(slice(p, 0, k), tol) &&
                   second_->contains(slice(p, k, p.size() - k), tol);
        }
    }
    return false;
}

Point StateSpace::canonical(Point p) const {
    for (std::size_t i = 0; i < p.size() && i < coords_.size(); ++i)
        if (coords_[i] == CoordKind::Circle) p[i] = wrap_unit(p[i]);
    return p;
}

double StateSpace::diameter() const {
    switch (kind_) {
        case SpaceKind::Circle: return 0.5;
        case SpaceKind::Interval: return 1.0;
        case SpaceKind::Finite: return *std::max_element(matrix_->begin(), matrix_->end());
        case SpaceKind::Product: return std::max(first_->diameter(), second_->diameter());
    }
    return 0.0;
}

bool StateSpace::is_finite() const noexcept {
    return std::all_of(coords_.begin(), coords_.end(),
                       [](CoordKind c) { return c == CoordKind::Finite; });
}

bool StateSpace::is_continuous() const noexcept {
    return std::none_of(coords_.begin(), coords_.end(),
                        [](CoordKind c) { return c == CoordKind::Finite; });
}

std::size_t StateSpace::cardinality() const {
    if (!is_finite()) fail(ErrorCode::InvalidArgument, label_ + " is not finite");
    if (kind_ == SpaceKind::Finite) return n_;
    return first_->cardinality() * second_->cardinality();
}

Point StateSpace::point_at(std::size_t index) const {
    if (index >= cardinality()) fail(ErrorCode::PointOutsideSpace, "state index out of range");
    if (kind_ == SpaceKind::Finite) return {static_cast<double>(index)};
    const std::size_t m = second_->cardinality();
    Point p = first_->point_at(index / m);
    Point q = second_->point_at(index % m);
    p.insert(p.end(), q.begin(), q.end());
    return p;
}

std::size_t StateSpace::index_of(const Point& p) const {
    if (!is_finite() || !contains(p)) fail(ErrorCode::PointOutsideSpace, "not a state of " + label_);
    if (kind_ == SpaceKind::Finite) return static_cast<std::size_t>(p[0]);
    const std::size_t k = first_->dimension();
    return first_->index_of(slice(p, 0, k)) * second_->cardinality() +
           second_->index_of(slice(p, k, p.size() - k));
}

double StateSpace::min_positive_distance() const {
    if (kind_ == SpaceKind::Finite) {
        double best = std::numeric_limits<double>::infinity();
        for (double v : *matrix_)
            if (v > 0.0) best = std::min(best, v);
        return best;
    }
    if (kind_ == SpaceKind::Product)
        return std::min(first_->min_positive_distance(), second_->min_positive_distance());
    fail(ErrorCode::InvalidArgument, label_ + " is not finite");
}

const StateSpace& StateSpace::first() const {
    if (!first_) fail(ErrorCode::InvalidArgument, "not a product space");
    return *first_;
}

const StateSpace& StateSpace::second() const {
    if (!second_) fail(ErrorCode::InvalidArgument, "not a product space");
    return *second_;
}

Point StateSpace::shift(const Point& p, std::size_t coord, double offset) const {
    Point q = p;
    switch (coords_.at(coord)) {
        case CoordKind::Circle: q[coord] = wrap_unit(q[coord] + offset); break;
        case CoordKind::Interval: q[coord] = std::clamp(q[coord] + offset, 0.0, 1.0); break;
        case CoordKind::Finite:
            fail(ErrorCode::InvalidArgument, "finite coordinates cannot be shifted");
    }
    return q;
}

bool StateSpace::operator==(const StateSpace& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case SpaceKind::Circle:
        case SpaceKind::Interval: return true;
        case SpaceKind::Finite: return n_ == other.n_ && *matrix_ == *other.matrix_;
        case SpaceKind::Product: return *first_ == *other.first_ && *second_ == *other.second_;
    }
    return false;
}

}  // namespace nashadow
