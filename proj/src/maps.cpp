#include "nashadow/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nashadow/errors.hpp"

namespace nashadow {

Point StepMap::inverse_branch(const Point&, const Point&, const Point&) const {
    fail(ErrorCode::NotExpanding, describe() + " has no inverse branches");
}

// ---------------------------------------------------------------- circle

CircleLiftMap::CircleLiftMap(std::vector<std::pair<double, double>> knots, double branch_radius,
                             std::string name)
    : knots_(std::move(knots)), branch_radius_(branch_radius), name_(std::move(name)) {
    if (knots_.size() < 2 || knots_.front().first != 0.0 || knots_.back().first != 1.0)
        fail(ErrorCode::InvalidArgument, "lift knots must span [0,1]");
    const double rise = knots_.back().second - knots_.front().second;
    degree_ = static_cast<int>(std::lround(rise));
    if (degree_ < 1 || std::fabs(rise - degree_) > 1e-12)
        fail(ErrorCode::InvalidArgument, "lift must rise by a positive integer degree");
    min_slope_ = std::numeric_limits<double>::infinity();
    max_slope_ = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        const double dx = knots_[i].first - knots_[i - 1].first;
        const double dy = knots_[i].second - knots_[i - 1].second;
        if (!(dx > 0.0) || !(dy > 0.0)) fail(ErrorCode::InvalidArgument, "lift must be increasing");
        min_slope_ = std::min(min_slope_, dy / dx);
        max_slope_ = std::max(max_slope_, dy / dx);
    }
}

StepMapPtr CircleLiftMap::linear(int degree, double shift, double branch_radius) {
    std::string name = degree == 1 ? "rotation" : "linear(" + std::to_string(degree) + ")";
    return std::make_shared<CircleLiftMap>(
        std::vector<std::pair<double, double>>{{0.0, shift}, {1.0, shift + degree}},
        branch_radius, std::move(name));
}

StepMapPtr CircleLiftMap::rotation(double angle) {
    return std::make_shared<CircleLiftMap>(
        std::vector<std::pair<double, double>>{{0.0, angle}, {1.0, angle + 1.0}}, 0.25,
        "rotation");
}

StepMapPtr CircleLiftMap::two_slope(double rate, double branch_radius) {
    if (!(rate >= 0.5 && rate < 1.0))
        fail(ErrorCode::InvalidArgument, "two_slope needs rate in [1/2, 1)");
    const double a = 1.0 / rate;
    return std::make_shared<CircleLiftMap>(
        std::vector<std::pair<double, double>>{{0.0, 0.0}, {0.5, a / 2.0}, {1.0, 2.0}},
        branch_radius, "two_slope");
}

double CircleLiftMap::lift(double x) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                               [](double v, const auto& k) { return v < k.first; });
    if (it == knots_.begin()) it = std::next(it);
    if (it == knots_.end()) it = std::prev(it);
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *std::prev(it);
    if (x1 - x0 == 1.0 && y0 == 0.0) return (y1 - y0) * x;  // keeps k*x exact
    return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
}

double CircleLiftMap::lift_inverse(double t) const {
    const double base = knots_.front().second;
    const double k = std::floor((t - base) / degree_);
    const double r = t - k * degree_;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), r,
                               [](double v, const auto& kn) { return v < kn.second; });
    if (it == knots_.begin()) it = std::next(it);
    if (it == knots_.end()) it = std::prev(it);
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *std::prev(it);
    double x;
    if (x1 - x0 == 1.0 && y0 == 0.0)
        x = r / (y1 - y0);
    else
        x = x0 + (x1 - x0) * ((r - y0) / (y1 - y0));
    return x + k;
}

Point CircleLiftMap::apply(const Point& x) const { return {wrap_unit(lift(wrap_unit(x.at(0))))}; }

std::vector<Point> CircleLiftMap::preimages(const Point& w) const {
    const double target = wrap_unit(w.at(0));
    const double lo = knots_.front().second;
    std::vector<Point> out;
    // candidate lift values target + j lying in [lo, lo + degree)
    const double j0 = std::ceil(lo - target);
    for (int j = 0; j < degree_ + 1; ++j) {
        const double t = target + j0 + j;
        if (t < lo || t >= lo + degree_) continue;
        out.push_back({wrap_unit(lift_inverse(t))});
    }
    std::sort(out.begin(), out.end());
    return out;
}

Point CircleLiftMap::inverse_branch(const Point& w, const Point& z, const Point& y) const {
    if (!contraction_rate()) fail(ErrorCode::NotExpanding, name_ + " is not expanding");
    const double dwy = circle_distance(w.at(0), y.at(0));
    if (dwy >= branch_radius_)
        fail(ErrorCode::PointOutsideBranchDomain,
             "d(w,y) = " + std::to_string(dwy) + " >= " + std::to_string(branch_radius_));
    const double tz = lift(wrap_unit(z.at(0)));
    return {wrap_unit(lift_inverse(tz + circle_signed_delta(w[0], y[0])))};
}

std::optional<double> CircleLiftMap::contraction_rate() const {
    if (min_slope_ > 1.0) return 1.0 / min_slope_;
    return std::nullopt;
}

std::optional<double> CircleLiftMap::branch_radius() const {
    if (contraction_rate()) return branch_radius_;
    return std::nullopt;
}

bool CircleLiftMap::is_isometry() const { return degree_ == 1 && knots_.size() == 2; }

// ---------------------------------------------------------------- interval

Point IntervalMap::apply(const Point& x) const {
    const double v = x.at(0);
    if (kind_ == Kind::Identity) return {v};
    return {v < 0.5 ? 2.0 * v : 2.0 * (1.0 - v)};
}

std::vector<Point> IntervalMap::preimages(const Point& w) const {
    const double v = w.at(0);
    if (kind_ == Kind::Identity) return {{v}};
    if (v == 1.0) return {{0.5}};
    return {{v / 2.0}, {1.0 - v / 2.0}};
}

std::string IntervalMap::describe() const {
    return kind_ == Kind::Identity ? "interval_identity" : "tent";
}

// ---------------------------------------------------------------- finite

FiniteMap::FiniteMap(std::vector<std::size_t> table, const StateSpace& domain,
                     const StateSpace& codomain, std::string name)
    : table_(std::move(table)), codomain_size_(codomain.cardinality()), name_(std::move(name)) {
    if (table_.size() != domain.cardinality())
        fail(ErrorCode::InvalidArgument, "table size does not match domain");
    std::vector<bool> hit(codomain_size_, false);
    for (std::size_t t : table_) {
        if (t >= codomain_size_) fail(ErrorCode::InvalidArgument, "table target out of range");
        hit[t] = true;
    }
    onto_ = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    isometry_ = true;
    for (std::size_t i = 0; i < table_.size() && isometry_; ++i)
        for (std::size_t j = 0; j < table_.size(); ++j)
            if (codomain.distance(codomain.point_at(table_[i]), codomain.point_at(table_[j])) !=
                domain.distance(domain.point_at(i), domain.point_at(j))) {
                isometry_ = false;
                break;
            }
}

Point FiniteMap::apply(const Point& x) const {
    const auto i = static_cast<std::size_t>(x.at(0));
    if (i >= table_.size()) fail(ErrorCode::PointOutsideSpace, "state out of range");
    return {static_cast<double>(table_[i])};
}

std::vector<Point> FiniteMap::preimages(const Point& w) const {
    std::vector<Point> out;
    const auto target = static_cast<std::size_t>(w.at(0));
    for (std::size_t i = 0; i < table_.size(); ++i)
        if (table_[i] == target) out.push_back({static_cast<double>(i)});
    return out;
}

// ---------------------------------------------------------------- product

ProductMap::ProductMap(StepMapPtr first, StepMapPtr second, std::size_t first_dimension)
    : first_(std::move(first)), second_(std::move(second)), k_(first_dimension) {}

std::pair<Point, Point> ProductMap::split(const Point& p) const {
    return {Point(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k_)),
            Point(p.begin() + static_cast<std::ptrdiff_t>(k_), p.end())};
}

namespace {
Point join(Point a, const Point& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}
}  // namespace

Point ProductMap::apply(const Point& x) const {
    auto [a, b] = split(x);
    return join(first_->apply(a), second_->apply(b));
}

std::vector<Point> ProductMap::preimages(const Point& w) const {
    auto [a, b] = split(w);
    std::vector<Point> out;
    const auto pa = first_->preimages(a);
    const auto pb = second_->preimages(b);
    for (const auto& u : pa)
        for (const auto& v : pb) out.push_back(join(u, v));
    return out;
}

Point ProductMap::inverse_branch(const Point& w, const Point& z, const Point& y) const {
    auto [w1, w2] = split(w);
    auto [z1, z2] = split(z);
    auto [y1, y2] = split(y);
    return join(first_->inverse_branch(w1, z1, y1), second_->inverse_branch(w2, z2, y2));
}

std::optional<double> ProductMap::contraction_rate() const {
    const auto a = first_->contraction_rate();
    const auto b = second_->contraction_rate();
    if (!a || !b) return std::nullopt;
    return std::max(*a, *b);
}

std::optional<double> ProductMap::branch_radius() const {
    const auto a = first_->branch_radius();
    const auto b = second_->branch_radius();
    if (!a || !b) return std::nullopt;
    return std::min(*a, *b);
}

bool ProductMap::is_isometry() const { return first_->is_isometry() && second_->is_isometry(); }

std::string ProductMap::describe() const {
    return first_->describe() + "x" + second_->describe();
}

}  // namespace nashadow
