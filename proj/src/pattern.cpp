#include "palmlab/pattern.hpp"

#include "palmlab/error.hpp"
#include "palmlab/format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace palmlab {

namespace {

std::ptrdiff_t first_after_origin(std::span<const double> points, double origin)
{
    // Relative times are monotone in position, so a partition on the
    // relative value is well defined even under rounding.
    const auto it = std::partition_point(points.begin(), points.end(),
                                         [origin](double t) { return t - origin <= 0.0; });
    return it - points.begin();
}

}  // namespace

PatternView::PatternView(std::span<const double> points, Window window, double origin)
    : points_(points), window_(window), origin_(origin), first_after_(first_after_origin(points, origin))
{
}

PatternView PatternView::shifted(double y) const
{
    return PatternView(points_, window_, origin_ + y);
}

std::optional<PatternView> PatternView::at_event(int n) const
{
    const auto pos = position_of(n);
    if (!pos)
        return std::nullopt;
    return at_position(*pos);
}

PatternView PatternView::at_position(std::size_t position) const
{
    return PatternView(points_, window_, points_[position],
                       static_cast<std::ptrdiff_t>(position) + 1);
}

std::optional<std::size_t> PatternView::position_of(int n) const
{
    const std::ptrdiff_t pos = first_after_ + n - 1;
    if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(points_.size()))
        return std::nullopt;
    return static_cast<std::size_t>(pos);
}

std::optional<double> PatternView::T(int n) const
{
    const auto pos = position_of(n);
    if (!pos)
        return std::nullopt;
    return points_[*pos] - origin_;
}

std::optional<double> PatternView::alpha(int n) const
{
    const auto a = position_of(n);
    const auto b = position_of(n + 1);
    if (!a || !b)
        return std::nullopt;
    return points_[*b] - points_[*a];
}

std::pair<std::size_t, std::size_t> PatternView::positions_in(double a, double b) const
{
    const double o = origin_;
    const auto first = std::partition_point(points_.begin(), points_.end(),
                                            [o, a](double t) { return t - o <= a; });
    const auto last = std::partition_point(first, points_.end(),
                                           [o, b](double t) { return t - o <= b; });
    return {static_cast<std::size_t>(first - points_.begin()),
            static_cast<std::size_t>(last - points_.begin())};
}

std::optional<std::size_t> PatternView::count(double a, double b) const
{
    if (a < lo() || b > hi() || a > b)
        return std::nullopt;
    const auto [first, last] = positions_in(a, b);
    return last - first;
}

std::optional<std::size_t> PatternView::count_closed_open(double a, double b) const
{
    if (a < lo() || b > hi() || a > b)
        return std::nullopt;
    const double o = origin_;
    const auto first = std::partition_point(points_.begin(), points_.end(),
                                            [o, a](double t) { return t - o < a; });
    const auto last = std::partition_point(first, points_.end(),
                                           [o, b](double t) { return t - o < b; });
    return static_cast<std::size_t>(last - first);
}

PointPattern::PointPattern(std::vector<double> points, Window window)
    : points_(std::move(points)), window_(window)
{
    if (!(std::isfinite(window_.lo) && std::isfinite(window_.hi)) || window_.lo > window_.hi)
        throw Error(ErrorCode::InvalidPattern, "window must be a finite interval with lo <= hi");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double t = points_[i];
        if (!std::isfinite(t) || !window_.contains(t))
            throw Error(ErrorCode::InvalidPattern,
                        "point " + format_double(t) + " outside window");
        if (i > 0 && !(t - points_[i - 1] >= min_gap))
            throw Error(ErrorCode::InvalidPattern,
                        "points must be strictly increasing with spacing >= 1e-12 (at position " +
                            std::to_string(i) + ")");
    }
}

PointPattern make_pattern_unchecked(std::vector<double> points, Window window)
{
    return PointPattern(std::move(points), window, PointPattern::Unchecked{});
}

std::pair<std::size_t, std::size_t> PointPattern::locate_indices() const
{
    const auto first = static_cast<std::size_t>(first_after_origin(points_, 0.0));
    if (first == 0 || first == points_.size())
        throw Error(ErrorCode::NoStraddle, "pattern has no point on one side of the origin");
    return {first - 1, first};
}

double PointPattern::T(int n) const
{
    const auto t = view().T(n);
    if (!t)
        throw Error(ErrorCode::IndexOutOfPattern, "T_" + std::to_string(n) + " is not inside the window");
    return *t;
}

double PointPattern::interval(int n) const
{
    const auto a = view().alpha(n);
    if (!a)
        throw Error(ErrorCode::IndexOutOfPattern,
                    "alpha_" + std::to_string(n) + " needs T_" + std::to_string(n) + " and T_" +
                        std::to_string(n + 1));
    return *a;
}

PointPattern PointPattern::shift_time(double y) const
{
    if (y == 0.0)
        return *this;
    std::vector<double> moved(points_.size());
    std::transform(points_.begin(), points_.end(), moved.begin(), [y](double t) { return t - y; });
    return PointPattern(std::move(moved), Window{window_.lo - y, window_.hi - y}, Unchecked{});
}

PointPattern PointPattern::shift_event(int n) const
{
    return shift_time(T(n));
}

std::size_t PointPattern::count(double a, double b) const
{
    if (a > b)
        throw Error(ErrorCode::InvalidArgument, "count requires a <= b");
    const auto n = view().count(a, b);
    if (!n)
        throw Error(ErrorCode::OutsideWindow, "(" + format_double(a) + ", " + format_double(b) +
                                                  "] is not inside the window");
    return *n;
}

PointPattern PointPattern::clip(Window sub) const
{
    const Window w{std::max(sub.lo, window_.lo), std::min(sub.hi, window_.hi)};
    if (w.lo > w.hi)
        throw Error(ErrorCode::OutsideWindow, "clip window does not meet the pattern window");
    const auto first = std::lower_bound(points_.begin(), points_.end(), w.lo);
    const auto last = std::upper_bound(first, points_.end(), w.hi);
    return PointPattern(std::vector<double>(first, last), w, Unchecked{});
}

void write_patterns(std::ostream& os, std::span<const PointPattern> patterns,
                    std::span<const double> weights)
{
    std::optional<Window> current;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const auto& p = patterns[i];
        if (!current || !(*current == p.window())) {
            os << "# window " << format_double(p.window().lo) << ' ' << format_double(p.window().hi)
               << '\n';
            current = p.window();
        }
        if (!weights.empty())
            os << "# weight " << format_double(weights[i]) << '\n';
        bool first = true;
        for (double t : p.points()) {
            if (!first)
                os << ',';
            os << format_double(t);
            first = false;
        }
        os << '\n';
    }
}

PatternFile read_patterns(std::istream& is)
{
    PatternFile out;
    std::optional<Window> window;
    std::optional<double> weight;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.rfind("# window", 0) == 0) {
            std::istringstream header(line.substr(8));
            std::string lo, hi;
            if (!(header >> lo >> hi))
                throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad window header");
            window = Window{parse_double(lo), parse_double(hi)};
            continue;
        }
        if (line.rfind("# weight", 0) == 0) {
            weight = parse_double(line.substr(8));
            continue;
        }
        if (!line.empty() && line.front() == '#')
            continue;
        if (!window)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": pattern before window header");
        std::vector<double> points;
        std::string_view rest(line);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            points.push_back(parse_double(rest.substr(0, comma)));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        out.patterns.emplace_back(std::move(points), *window);
        out.weights.push_back(weight.value_or(1.0));
        weight.reset();
    }
    return out;
}

}  // namespace palmlab
