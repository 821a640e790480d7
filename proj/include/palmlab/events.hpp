#pragma once

#include "palmlab/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace palmlab {

/// Three-valued result of evaluating an eventuality. Indeterminate means
/// the pattern does not contain the points the predicate needs; estimators
/// count it as a rejected replication, never as false.
enum class Outcome : unsigned char { False, True, Indeterminate };

enum class Comparison { Greater, GreaterEqual, Less, LessEqual, Equal };

std::string_view to_string(Comparison cmp) noexcept;

inline constexpr double unbounded = std::numeric_limits<double>::infinity();

/// A measurable set of patterns realized as a local boolean functional.
///
/// The predicate reads only points within `radius()` of the origin of the
/// view it is given. Index-based atoms (gap lengths, T_n) have no a-priori
/// radius; they carry a horizon, supplied per run through `bounded`, and
/// report Indeterminate when a needed point lies beyond it.
class Eventuality {
public:
    Outcome evaluate(const PatternView& at) const;
    Outcome operator()(const PatternView& at) const { return evaluate(at); }

    double radius() const noexcept;
    const std::string& label() const noexcept { return label_; }

    /// Offsets s such that y -> A(θ_y φ) is constant between consecutive
    /// values of T_j - s. Used for exact time integrals.
    const std::vector<double>& breakpoint_offsets() const noexcept { return offsets_; }

    /// Copy whose index-based atoms use horizon min(current, horizon).
    Eventuality bounded(double horizon) const;

    struct Node;

private:
    explicit Eventuality(std::shared_ptr<const Node> root);

    std::shared_ptr<const Node> root_;
    std::string label_;
    std::vector<double> offsets_;

    friend Eventuality make_eventuality(std::shared_ptr<const Node>);
    friend Eventuality ev_not(const Eventuality&);
    friend Eventuality ev_and(const Eventuality&, const Eventuality&);
    friend Eventuality ev_or(const Eventuality&, const Eventuality&);
};

Eventuality ev_true();
Eventuality ev_false();

/// [α_n cmp c].
Eventuality ev_interval(int n, Comparison cmp, double c, double horizon = unbounded);
/// [α_n > c].
Eventuality ev_interval_gt(int n, double c, double horizon = unbounded);
/// [T_n cmp t].
Eventuality ev_point(int n, Comparison cmp, double t, double horizon = unbounded);
/// [T_1 <= t].
Eventuality ev_first_point_le(double t, double horizon = unbounded);
/// [N(a, b] cmp k].
Eventuality ev_count(double a, double b, Comparison cmp, int k);
/// [N(a, b] = k].
Eventuality ev_count_eq(double a, double b, int k);

Eventuality ev_not(const Eventuality& e);
Eventuality ev_and(const Eventuality& e, const Eventuality& f);
Eventuality ev_or(const Eventuality& e, const Eventuality& f);

/// The distinguished eventuality of the non-EAMS lattice model: [α_0 = 1].
Eventuality ev_example44();

/// Parses the textual eventuality language:
///
///     expr  := conj ('|' conj)*
///     conj  := unary ('&' unary)*
///     unary := '!' unary | '(' expr ')' | atom
///     atom  := 'true' | 'false'
///            | 'alpha(' int ')' cmp number
///            | 'T' int cmp number | 'T(' int ')' cmp number
///            | 'count(' number ',' number ']' cmp int
///     cmp   := '>' | '>=' | '<' | '<=' | '=='
///
/// Whitespace is ignored. `label()` prints the canonical form, which parses
/// back to an identical label.
Eventuality parse_eventuality(std::string_view text, double horizon = unbounded);

/// Splits a `;`-separated list and parses each entry.
std::vector<Eventuality> parse_eventuality_list(std::string_view text, double horizon = unbounded);

/// N_A(a, b]: occurrences T_n in (a, b] with A(η_n φ) true. Throws
/// InsufficientContext when the window does not cover [T_n - r, T_n + r]
/// for a counted point or A is indeterminate there; OutsideWindow when
/// (a, b] leaves the window.
std::size_t count_marked(const PointPattern& p, double a, double b, const Eventuality& A);

/// ∫_{y0}^{y1} f(θ_y φ) dy for a functional f that is constant between the
/// breakpoints T_j - s, s in `offsets`. f returns nullopt when it cannot be
/// evaluated; the integral is then nullopt as well.
template <class F>
std::optional<double> integrate_shifts(const PatternView& view, double y0, double y1,
                                       std::span<const double> offsets, F&& f)
{
    if (!(y1 > y0))
        return 0.0;
    std::vector<double> cuts{y0, y1};
    for (double s : offsets) {
        // Breakpoints come from points in (y0 + s, y1 + s); those must be visible.
        if (y0 + s < view.lo() || y1 + s > view.hi())
            return std::nullopt;
        const auto [first, last] = view.positions_in(y0 + s, y1 + s);
        for (std::size_t i = first; i < last; ++i) {
            const double cut = view.relative(i) - s;
            if (cut > y0 && cut < y1)
                cuts.push_back(cut);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double width = cuts[i + 1] - cuts[i];
        if (!(width > 0.0))
            continue;
        const std::optional<double> value = f(view.shifted(0.5 * (cuts[i] + cuts[i + 1])));
        if (!value)
            return std::nullopt;
        total += *value * width;
    }
    return total;
}

/// ∫_{y0}^{y1} 1_A(θ_y φ) dy, or nullopt when A is indeterminate somewhere.
std::optional<double> occupation_time(const PatternView& view, const Eventuality& A, double y0,
                                      double y1);

}  // namespace palmlab
