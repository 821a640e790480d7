#include "palmlab/events.hpp"

#include "palmlab/error.hpp"
#include "palmlab/format.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <variant>

namespace palmlab {

namespace {

struct Const {
    bool value;
};
struct Interval {
    int n;
    Comparison cmp;
    double threshold;
    double horizon;
};
struct Point {
    int n;
    Comparison cmp;
    double threshold;
    double horizon;
};
struct Count {
    double a;
    double b;
    Comparison cmp;
    int k;
};
struct Not {
    std::shared_ptr<const Eventuality::Node> child;
};
struct And {
    std::shared_ptr<const Eventuality::Node> lhs, rhs;
};
struct Or {
    std::shared_ptr<const Eventuality::Node> lhs, rhs;
};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool compare(double lhs, Comparison cmp, double rhs) noexcept
{
    switch (cmp) {
    case Comparison::Greater: return lhs > rhs;
    case Comparison::GreaterEqual: return lhs >= rhs;
    case Comparison::Less: return lhs < rhs;
    case Comparison::LessEqual: return lhs <= rhs;
    case Comparison::Equal: return lhs == rhs;
    }
    return false;
}

Outcome from_bool(bool b) noexcept { return b ? Outcome::True : Outcome::False; }


}  // namespace

struct Eventuality::Node {
    std::variant<Const, Interval, Point, Count, Not, And, Or> expr;
};

namespace {

using NodePtr = std::shared_ptr<const Eventuality::Node>;

Outcome eval(const Eventuality::Node& node, const PatternView& at)
{
    return std::visit(
        overloaded{
            [](const Const& c) { return from_bool(c.value); },
            [&at](const Interval& e) {
                const auto lo = at.T(e.n);
                const auto hi = at.T(e.n + 1);
                if (!lo || !hi || std::abs(*lo) > e.horizon || std::abs(*hi) > e.horizon)
                    return Outcome::Indeterminate;
                return from_bool(compare(*hi - *lo, e.cmp, e.threshold));
            },
            [&at](const Point& e) {
                const auto t = at.T(e.n);
                if (!t || std::abs(*t) > e.horizon)
                    return Outcome::Indeterminate;
                return from_bool(compare(*t, e.cmp, e.threshold));
            },
            [&at](const Count& e) {
                const auto n = at.count(e.a, e.b);
                if (!n)
                    return Outcome::Indeterminate;
                return from_bool(compare(static_cast<double>(*n), e.cmp, e.k));
            },
            [&at](const Not& e) {
                const Outcome v = eval(*e.child, at);
                if (v == Outcome::Indeterminate)
                    return v;
                return from_bool(v == Outcome::False);
            },
            // Indeterminate operands make the whole expression indeterminate,
            // so rejection never depends on the value of another operand.
            [&at](const And& e) {
                const Outcome l = eval(*e.lhs, at);
                const Outcome r = eval(*e.rhs, at);
                if (l == Outcome::Indeterminate || r == Outcome::Indeterminate)
                    return Outcome::Indeterminate;
                return from_bool(l == Outcome::True && r == Outcome::True);
            },
            [&at](const Or& e) {
                const Outcome l = eval(*e.lhs, at);
                const Outcome r = eval(*e.rhs, at);
                if (l == Outcome::Indeterminate || r == Outcome::Indeterminate)
                    return Outcome::Indeterminate;
                return from_bool(l == Outcome::True || r == Outcome::True);
            },
        },
        node.expr);
}

double radius_of(const Eventuality::Node& node)
{
    return std::visit(overloaded{
                          [](const Const&) { return 0.0; },
                          [](const Interval& e) { return e.horizon; },
                          [](const Point& e) { return e.horizon; },
                          [](const Count& e) { return std::max(std::abs(e.a), std::abs(e.b)); },
                          [](const Not& e) { return radius_of(*e.child); },
                          [](const And& e) { return std::max(radius_of(*e.lhs), radius_of(*e.rhs)); },
                          [](const Or& e) { return std::max(radius_of(*e.lhs), radius_of(*e.rhs)); },
                      },
                      node.expr);
}

void collect_offsets(const Eventuality::Node& node, std::vector<double>& out)
{
    std::visit(overloaded{
                   [](const Const&) {},
                   [&out](const Interval&) { out.push_back(0.0); },
                   [&out](const Point& e) {
                       out.push_back(0.0);
                       out.push_back(e.threshold);
                   },
                   [&out](const Count& e) {
                       out.push_back(e.a);
                       out.push_back(e.b);
                   },
                   [&out](const Not& e) { collect_offsets(*e.child, out); },
                   [&out](const And& e) {
                       collect_offsets(*e.lhs, out);
                       collect_offsets(*e.rhs, out);
                   },
                   [&out](const Or& e) {
                       collect_offsets(*e.lhs, out);
                       collect_offsets(*e.rhs, out);
                   },
               },
               node.expr);
}

enum class Precedence { Or = 0, And = 1, Unary = 2 };

std::string print(const Eventuality::Node& node, Precedence context)
{
    auto wrap = [context](std::string s, Precedence own) {
        return own < context ? "(" + s + ")" : s;
    };
    return std::visit(
        overloaded{
            [](const Const& c) { return std::string(c.value ? "true" : "false"); },
            [](const Interval& e) {
                return "alpha(" + std::to_string(e.n) + ")" + std::string(to_string(e.cmp)) +
                       format_double(e.threshold);
            },
            [](const Point& e) {
                const std::string index = e.n >= 0 ? std::to_string(e.n) : "(" + std::to_string(e.n) + ")";
                return "T" + index + std::string(to_string(e.cmp)) + format_double(e.threshold);
            },
            [](const Count& e) {
                return "count(" + format_double(e.a) + "," + format_double(e.b) + "]" +
                       std::string(to_string(e.cmp)) + std::to_string(e.k);
            },
            [](const Not& e) { return "!" + print(*e.child, Precedence::Unary); },
            [&wrap](const And& e) {
                return wrap(print(*e.lhs, Precedence::And) + "&" + print(*e.rhs, Precedence::Unary),
                            Precedence::And);
            },
            [&wrap](const Or& e) {
                return wrap(print(*e.lhs, Precedence::Or) + "|" + print(*e.rhs, Precedence::And),
                            Precedence::Or);
            },
        },
        node.expr);
}

NodePtr rebind(const NodePtr& node, double horizon)
{
    return std::visit(
        overloaded{
            [&node](const Const&) { return node; },
            [horizon](const Interval& e) {
                Interval b = e;
                b.horizon = std::min(e.horizon, horizon);
                return std::make_shared<const Eventuality::Node>(Eventuality::Node{b});
            },
            [horizon](const Point& e) {
                Point b = e;
                b.horizon = std::min(e.horizon, horizon);
                return std::make_shared<const Eventuality::Node>(Eventuality::Node{b});
            },
            [&node](const Count&) { return node; },
            [horizon](const Not& e) {
                return std::make_shared<const Eventuality::Node>(Eventuality::Node{Not{rebind(e.child, horizon)}});
            },
            [horizon](const And& e) {
                return std::make_shared<const Eventuality::Node>(
                    Eventuality::Node{And{rebind(e.lhs, horizon), rebind(e.rhs, horizon)}});
            },
            [horizon](const Or& e) {
                return std::make_shared<const Eventuality::Node>(
                    Eventuality::Node{Or{rebind(e.lhs, horizon), rebind(e.rhs, horizon)}});
            },
        },
        node->expr);
}

template <class T>
NodePtr make_node(T expr)
{
    return std::make_shared<const Eventuality::Node>(Eventuality::Node{std::move(expr)});
}

}  // namespace

Eventuality make_eventuality(std::shared_ptr<const Eventuality::Node> root)
{
    return Eventuality(std::move(root));
}

Eventuality::Eventuality(std::shared_ptr<const Node> root) : root_(std::move(root))
{
    label_ = print(*root_, Precedence::Or);
    collect_offsets(*root_, offsets_);
    std::sort(offsets_.begin(), offsets_.end());
    offsets_.erase(std::unique(offsets_.begin(), offsets_.end()), offsets_.end());
}

Outcome Eventuality::evaluate(const PatternView& at) const
{
    return eval(*root_, at);
}

double Eventuality::radius() const noexcept
{
    return radius_of(*root_);
}

Eventuality Eventuality::bounded(double horizon) const
{
    return Eventuality(rebind(root_, horizon));
}

std::string_view to_string(Comparison cmp) noexcept
{
    switch (cmp) {
    case Comparison::Greater: return ">";
    case Comparison::GreaterEqual: return ">=";
    case Comparison::Less: return "<";
    case Comparison::LessEqual: return "<=";
    case Comparison::Equal: return "==";
    }
    return "?";
}

Eventuality ev_true() { return make_eventuality(make_node(Const{true})); }
Eventuality ev_false() { return make_eventuality(make_node(Const{false})); }

Eventuality ev_interval(int n, Comparison cmp, double c, double horizon)
{
    if (!(c >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "interval threshold must be >= 0");
    return make_eventuality(make_node(Interval{n, cmp, c, horizon}));
}

Eventuality ev_interval_gt(int n, double c, double horizon)
{
    return ev_interval(n, Comparison::Greater, c, horizon);
}

Eventuality ev_point(int n, Comparison cmp, double t, double horizon)
{
    return make_eventuality(make_node(Point{n, cmp, t, horizon}));
}

Eventuality ev_first_point_le(double t, double horizon)
{
    if (!(t > 0.0))
        throw Error(ErrorCode::InvalidArgument, "T1 threshold must be > 0");
    return ev_point(1, Comparison::LessEqual, t, horizon);
}

Eventuality ev_count(double a, double b, Comparison cmp, int k)
{
    if (!(a < b))
        throw Error(ErrorCode::InvalidArgument, "count interval needs a < b");
    if (k < 0)
        throw Error(ErrorCode::InvalidArgument, "count threshold must be >= 0");
    return make_eventuality(make_node(Count{a, b, cmp, k}));
}

Eventuality ev_count_eq(double a, double b, int k)
{
    return ev_count(a, b, Comparison::Equal, k);
}

Eventuality ev_not(const Eventuality& e)
{
    return make_eventuality(make_node(Not{e.root_}));
}

Eventuality ev_and(const Eventuality& e, const Eventuality& f)
{
    return make_eventuality(make_node(And{e.root_, f.root_}));
}

Eventuality ev_or(const Eventuality& e, const Eventuality& f)
{
    return make_eventuality(make_node(Or{e.root_, f.root_}));
}

Eventuality ev_example44()
{
    return ev_interval(0, Comparison::Equal, 1.0);
}

namespace {

class Parser {
public:
    Parser(std::string_view text, double horizon) : text_(text), horizon_(horizon) {}

    NodePtr parse()
    {
        NodePtr root = expr();
        skip();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorCode::ParseError,
                    what + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
    }

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(std::string_view token)
    {
        skip();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token)
    {
        if (!accept(token))
            fail("expected '" + std::string(token) + "'");
    }

    NodePtr expr()
    {
        NodePtr lhs = conj();
        while (accept("|"))
            lhs = make_node(Or{lhs, conj()});
        return lhs;
    }

    NodePtr conj()
    {
        NodePtr lhs = unary();
        while (accept("&"))
            lhs = make_node(And{lhs, unary()});
        return lhs;
    }

    NodePtr unary()
    {
        if (accept("!"))
            return make_node(Not{unary()});
        if (accept("(")) {
            NodePtr inner = expr();
            expect(")");
            return inner;
        }
        return atom();
    }

    Comparison comparison()
    {
        if (accept(">="))
            return Comparison::GreaterEqual;
        if (accept("<="))
            return Comparison::LessEqual;
        if (accept("=="))
            return Comparison::Equal;
        if (accept(">"))
            return Comparison::Greater;
        if (accept("<"))
            return Comparison::Less;
        fail("expected comparison operator");
    }

    double number()
    {
        skip();
        double v = 0.0;
        const char* begin = text_.data() + pos_;
        const auto res = std::from_chars(begin, text_.data() + text_.size(), v);
        if (res.ec != std::errc() || !std::isfinite(v))
            fail("expected number");
        pos_ += static_cast<std::size_t>(res.ptr - begin);
        return v;
    }

    int integer()
    {
        skip();
        int v = 0;
        const char* begin = text_.data() + pos_;
        const auto res = std::from_chars(begin, text_.data() + text_.size(), v);
        if (res.ec != std::errc())
            fail("expected integer");
        pos_ += static_cast<std::size_t>(res.ptr - begin);
        return v;
    }

    NodePtr atom()
    {
        if (accept("true"))
            return make_node(Const{true});
        if (accept("false"))
            return make_node(Const{false});
        if (accept("alpha")) {
            expect("(");
            const int n = integer();
            expect(")");
            const Comparison cmp = comparison();
            const double c = number();
            if (c < 0.0)
                fail("interval threshold must be >= 0");
            return make_node(Interval{n, cmp, c, horizon_});
        }
        if (accept("count")) {
            expect("(");
            const double a = number();
            expect(",");
            const double b = number();
            expect("]");
            if (!(a < b))
                fail("count interval needs a < b");
            const Comparison cmp = comparison();
            const int k = integer();
            if (k < 0)
                fail("count threshold must be >= 0");
            return make_node(Count{a, b, cmp, k});
        }
        if (accept("T")) {
            int n = 0;
            if (accept("(")) {
                n = integer();
                expect(")");
            } else {
                n = integer();
            }
            const Comparison cmp = comparison();
            return make_node(Point{n, cmp, number(), horizon_});
        }
        fail("expected eventuality");
    }

    std::string_view text_;
    double horizon_;
    std::size_t pos_ = 0;
};

}  // namespace

Eventuality parse_eventuality(std::string_view text, double horizon)
{
    return make_eventuality(Parser(text, horizon).parse());
}

std::vector<Eventuality> parse_eventuality_list(std::string_view text, double horizon)
{
    std::vector<Eventuality> out;
    while (!text.empty()) {
        const auto semi = text.find(';');
        const std::string_view item = text.substr(0, semi);
        if (item.find_first_not_of(" \t\r\n") != std::string_view::npos)
            out.push_back(parse_eventuality(item, horizon));
        if (semi == std::string_view::npos)
            break;
        text.remove_prefix(semi + 1);
    }
    return out;
}

std::size_t count_marked(const PointPattern& p, double a, double b, const Eventuality& A)
{
    const std::size_t total = p.count(a, b);
    const PatternView view = p.view();
    const auto [first, last] = view.positions_in(a, b);
    const double r = A.radius();
    std::size_t marked = 0;
    for (std::size_t i = first; i < last; ++i) {
        const double t = view.relative(i);
        if (t - r < view.lo() || t + r > view.hi())
            throw Error(ErrorCode::InsufficientContext,
                        "window does not cover radius " + format_double(r) + " around " + format_double(t));
        const Outcome o = A.evaluate(view.at_position(i));
        if (o == Outcome::Indeterminate)
            throw Error(ErrorCode::InsufficientContext, A.label() + " is indeterminate at " + format_double(t));
        marked += o == Outcome::True;
    }
    (void)total;
    return marked;
}

std::optional<double> occupation_time(const PatternView& view, const Eventuality& A, double y0,
                                      double y1)
{
    return integrate_shifts(view, y0, y1, A.breakpoint_offsets(),
                            [&A](const PatternView& at) -> std::optional<double> {
                                const Outcome o = A.evaluate(at);
                                if (o == Outcome::Indeterminate)
                                    return std::nullopt;
                                return o == Outcome::True ? 1.0 : 0.0;
                            });
}

}  // namespace palmlab
