#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace palmlab {

/// Minimum spacing between consecutive points; closer pairs are rejected
/// at construction so every pattern is simple.
inline constexpr double min_gap = 1e-12;

/// Closed observation interval [lo, hi] standing in for the real line.
struct Window {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }
    bool contains(double t) const noexcept { return lo <= t && t <= hi; }
    friend bool operator==(const Window&, const Window&) = default;
};

/// The n-th occurrence T_n of a pattern together with its index.
struct IndexedPoint {
    int index = 0;
    double time = 0.0;
};

/// Non-owning view of a pattern as seen from a moved origin.
///
/// Times are reported relative to the origin, and indices follow the
/// convention ... < T_{-1} < T_0 <= 0 < T_1 < T_2 < ... in those relative
/// coordinates. Every accessor returns nullopt instead of extrapolating
/// when the requested point or interval lies outside the stored window.
class PatternView {
public:
    PatternView(std::span<const double> points, Window window, double origin = 0.0);

    /// View of θ_y φ: the origin moves forward by y.
    PatternView shifted(double y) const;

    /// View of η_n φ: the origin moves onto T_n.
    std::optional<PatternView> at_event(int n) const;

    /// View centred on the stored point at `position`, so that T_0 = 0.
    PatternView at_position(std::size_t position) const;

    std::optional<double> T(int n) const;
    std::optional<double> alpha(int n) const;

    /// N(a, b] in relative coordinates; nullopt when (a, b] leaves the window.
    std::optional<std::size_t> count(double a, double b) const;

    /// N[a, b) in relative coordinates; nullopt when [a, b) leaves the window.
    std::optional<std::size_t> count_closed_open(double a, double b) const;

    /// Position in the underlying storage of T_n, or nullopt.
    std::optional<std::size_t> position_of(int n) const;

    /// Index n of the stored point at `position` relative to this origin.
    int index_of_position(std::size_t position) const noexcept
    {
        return static_cast<int>(static_cast<std::ptrdiff_t>(position) - first_after_) + 1;
    }

    /// Positions of the stored points with relative time in (a, b].
    std::pair<std::size_t, std::size_t> positions_in(double a, double b) const;

    double relative(std::size_t position) const noexcept { return points_[position] - origin_; }
    double lo() const noexcept { return window_.lo - origin_; }
    double hi() const noexcept { return window_.hi - origin_; }
    double origin() const noexcept { return origin_; }
    std::span<const double> points() const noexcept { return points_; }
    Window absolute_window() const noexcept { return window_; }

private:
    PatternView(std::span<const double> points, Window window, double origin,
                std::ptrdiff_t first_after)
        : points_(points), window_(window), origin_(origin), first_after_(first_after)
    {
    }

    std::span<const double> points_;
    Window window_;
    double origin_;
    std::ptrdiff_t first_after_;  // storage position of T_1
};

/// Finite, sorted, simple realization of a point process on a window.
/// Immutable after construction.
class PointPattern {
public:
    PointPattern() = default;

    /// Validates ordering, simpleness and window membership; throws
    /// Error{InvalidPattern} otherwise.
    PointPattern(std::vector<double> points, Window window);

    std::span<const double> points() const noexcept { return points_; }
    Window window() const noexcept { return window_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    PatternView view() const noexcept { return PatternView(points_, window_); }

    /// Storage positions of T_0 and T_1; throws NoStraddle.
    std::pair<std::size_t, std::size_t> locate_indices() const;

    /// T_n; throws IndexOutOfPattern when T_n is not stored.
    double T(int n) const;
    IndexedPoint indexed(int n) const { return {n, T(n)}; }

    /// α_n = T_{n+1} - T_n; throws IndexOutOfPattern.
    double interval(int n) const;

    /// θ_y: every point and the window move by -y.
    PointPattern shift_time(double y) const;

    /// η_n = θ_{T_n}; throws IndexOutOfPattern.
    PointPattern shift_event(int n) const;

    /// N(a, b]; throws OutsideWindow when (a, b] is not inside the window.
    std::size_t count(double a, double b) const;

    /// Restriction to a sub-window.
    PointPattern clip(Window sub) const;

    friend bool operator==(const PointPattern&, const PointPattern&) = default;

private:
    struct Unchecked {};
    PointPattern(std::vector<double> points, Window window, Unchecked)
        : points_(std::move(points)), window_(window)
    {
    }

    std::vector<double> points_;
    Window window_{};

    friend PointPattern make_pattern_unchecked(std::vector<double>, Window);
};

/// Skips validation; used by samplers that construct sorted output.
PointPattern make_pattern_unchecked(std::vector<double> points, Window window);

/// Text form: a `# window lo hi` header (repeated whenever the window
/// changes), optional `# weight w` lines, then one comma-separated line of
/// ascending timestamps per pattern. Timestamps print in shortest
/// round-trip form.
void write_patterns(std::ostream& os, std::span<const PointPattern> patterns,
                    std::span<const double> weights = {});

struct PatternFile {
    std::vector<PointPattern> patterns;
    std::vector<double> weights;  // one per pattern, 1 when absent
};

PatternFile read_patterns(std::istream& is);

}  // namespace palmlab
