#include "qnc/measurable_fn.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qnc/errors.hpp"

namespace qnc {

TailRule TailRule::constant(ExtValue v)
{
    TailRule r;
    r.coeff = std::move(v);
    return r;
}

TailRule TailRule::geometric(ExtValue coeff, Rational ratio)
{
    if (sgn(ratio) <= 0)
        throw input_error("geometric tail rule needs a positive ratio");
    TailRule r;
    r.coeff = std::move(coeff);
    r.ratio = std::move(ratio);
    r.normalize();
    return r;
}

ExtValue TailRule::rule_value(Index n) const
{
    if (is_constant())
        return coeff;
    return ExtValue(Rational(coeff.finite() * rational_pow(ratio, n)));
}

ExtValue TailRule::value(Index n) const
{
    if (auto it = exceptions.find(n); it != exceptions.end())
        return it->second;
    return rule_value(n);
}

void TailRule::normalize()
{
    if (coeff.is_zero() || coeff.is_infinite())
        ratio = 1;
    for (auto it = exceptions.begin(); it != exceptions.end();) {
        if (it->second == rule_value(it->first))
            it = exceptions.erase(it);
        else
            ++it;
    }
}

MeasurableFn::MeasurableFn(std::vector<ExtValue> explicit_values, std::vector<TailRule> tails)
    : values_(std::move(explicit_values)), tails_(std::move(tails))
{
    for (auto& t : tails_)
        t.normalize();
}

MeasurableFn MeasurableFn::constant(const MeasureSpace& space, const ExtValue& v)
{
    return MeasurableFn(std::vector<ExtValue>(space.explicit_count(), v),
                        std::vector<TailRule>(space.family_count(), TailRule::constant(v)));
}

MeasurableFn MeasurableFn::indicator(const MeasureSpace& space, const AtomSet& set)
{
    std::vector<ExtValue> values(space.explicit_count());
    for (std::size_t i : set.explicit_atoms)
        values.at(i) = 1;
    std::vector<TailRule> tails(space.family_count());
    for (const auto& [f, from] : set.tails) {
        TailRule& t = tails.at(f);
        t.coeff = 1;
        for (Index n = space.family(f).start; n < from; ++n)
            t.exceptions[n] = 0;
    }
    for (const auto& [f, n] : set.members)
        tails.at(f).exceptions[n] = 1;
    return MeasurableFn(std::move(values), std::move(tails));
}

ExtValue MeasurableFn::operator()(const AtomId& x) const
{
    if (x.member)
        return tails_.at(x.slot).value(x.n);
    return values_.at(x.slot);
}

namespace {

void require_same_shape(const MeasurableFn& f, const MeasurableFn& g)
{
    if (f.explicit_values().size() != g.explicit_values().size() || f.tails().size() != g.tails().size())
        throw input_error("functions are defined on different spaces");
}

std::set<Index> exception_keys(const TailRule& a, const TailRule& b)
{
    std::set<Index> keys;
    for (const auto& [n, v] : a.exceptions)
        keys.insert(n);
    for (const auto& [n, v] : b.exceptions)
        keys.insert(n);
    return keys;
}

template <typename Op>
std::vector<ExtValue> zip_explicit(const MeasurableFn& f, const MeasurableFn& g, Op op)
{
    std::vector<ExtValue> out;
    out.reserve(f.explicit_values().size());
    for (std::size_t i = 0; i < f.explicit_values().size(); ++i)
        out.push_back(op(i, f.explicit_values()[i], g.explicit_values()[i]));
    return out;
}

// Combine two tails: the rule part by `rule_op`, exceptions pointwise by `point_op`.
template <typename RuleOp, typename PointOp>
TailRule zip_tail(const TailRule& a, const TailRule& b, RuleOp rule_op, PointOp point_op)
{
    TailRule out = rule_op(a, b);
    for (Index n : exception_keys(a, b))
        out.exceptions[n] = point_op(a.value(n), b.value(n));
    out.normalize();
    return out;
}

// n >= start with coeff * ratio^n == v, for a non-constant rule.
std::optional<Index> solve_geometric(const TailRule& rule, Index start, const ExtValue& v)
{
    if (!v.is_positive() || v.is_infinite())
        return std::nullopt;
    const Rational target = v.finite() / rule.coeff.finite();
    Rational p = rational_pow(rule.ratio, start);
    Index n = start;
    if (rule.ratio > 1) {
        while (p < target) {
            p *= rule.ratio;
            ++n;
        }
    } else {
        while (p > target) {
            p *= rule.ratio;
            ++n;
        }
    }
    if (p == target)
        return n;
    return std::nullopt;
}

// First index >= start that is not an exception of any of the given keys.
Index first_free_index(Index start, const std::set<Index>& keys)
{
    Index n = start;
    while (keys.count(n))
        ++n;
    return n;
}

} // namespace

MeasurableFn product(const MeasurableFn& f, const MeasurableFn& g)
{
    require_same_shape(f, g);
    std::vector<TailRule> tails;
    tails.reserve(f.tails().size());
    for (std::size_t j = 0; j < f.tails().size(); ++j) {
        tails.push_back(zip_tail(
            f.tail(j), g.tail(j),
            [](const TailRule& a, const TailRule& b) {
                TailRule r;
                r.coeff = a.coeff * b.coeff;
                r.ratio = a.ratio * b.ratio;
                return r;
            },
            [](const ExtValue& x, const ExtValue& y) { return x * y; }));
    }
    return MeasurableFn(zip_explicit(f, g, [](std::size_t, const ExtValue& x, const ExtValue& y) { return x * y; }),
                        std::move(tails));
}

MeasurableFn scale(const MeasurableFn& f, const ExtValue& c)
{
    std::vector<ExtValue> values;
    values.reserve(f.explicit_values().size());
    for (const auto& v : f.explicit_values())
        values.push_back(v * c);
    std::vector<TailRule> tails = f.tails();
    for (auto& t : tails) {
        t.coeff = t.coeff * c;
        for (auto& [n, v] : t.exceptions)
            v = v * c;
        t.normalize();
    }
    return MeasurableFn(std::move(values), std::move(tails));
}

MeasurableFn power(const MeasurableFn& f, unsigned n)
{
    std::vector<ExtValue> values;
    values.reserve(f.explicit_values().size());
    for (const auto& v : f.explicit_values())
        values.push_back(v.pow(n));
    std::vector<TailRule> tails = f.tails();
    for (auto& t : tails) {
        t.coeff = t.coeff.pow(n);
        t.ratio = rational_pow(t.ratio, n);
        for (auto& [idx, v] : t.exceptions)
            v = v.pow(n);
        t.normalize();
    }
    return MeasurableFn(std::move(values), std::move(tails));
}

MeasurableFn sum(const MeasurableFn& f, const MeasurableFn& g)
{
    require_same_shape(f, g);
    std::vector<TailRule> tails;
    for (std::size_t j = 0; j < f.tails().size(); ++j) {
        tails.push_back(zip_tail(
            f.tail(j), g.tail(j),
            [](const TailRule& a, const TailRule& b) {
                if (a.coeff.is_zero() || b.coeff.is_infinite())
                    return TailRule::geometric(b.coeff, b.ratio);
                if (b.coeff.is_zero() || a.coeff.is_infinite())
                    return TailRule::geometric(a.coeff, a.ratio);
                if (a.ratio != b.ratio)
                    throw representation_error("sum of geometric tails with different ratios");
                return TailRule::geometric(a.coeff + b.coeff, a.ratio);
            },
            [](const ExtValue& x, const ExtValue& y) { return x + y; }));
    }
    return MeasurableFn(zip_explicit(f, g, [](std::size_t, const ExtValue& x, const ExtValue& y) { return x + y; }),
                        std::move(tails));
}

MeasurableFn quotient(const MeasurableFn& f, const MeasurableFn& g, const MeasureSpace& space)
{
    require_same_shape(f, g);
    auto values = zip_explicit(f, g, [&space](std::size_t i, const ExtValue& x, const ExtValue& y) {
        if (sgn(space.atom(i).weight) == 0)
            return ExtValue();
        return x / y;
    });
    std::vector<TailRule> tails;
    for (std::size_t j = 0; j < f.tails().size(); ++j) {
        tails.push_back(zip_tail(
            f.tail(j), g.tail(j),
            [](const TailRule& a, const TailRule& b) {
                TailRule r;
                r.coeff = a.coeff / b.coeff;
                if (r.coeff.is_positive() && r.coeff.is_finite())
                    r.ratio = a.ratio / b.ratio;
                return r;
            },
            [](const ExtValue& x, const ExtValue& y) { return x / y; }));
    }
    return MeasurableFn(std::move(values), std::move(tails));
}

MeasurableFn compose(const MeasurableFn& f, const MeasureSpace& space, const Transformation& phi)
{
    if (f.explicit_values().size() != space.explicit_count() || f.tails().size() != space.family_count())
        throw input_error("function and space do not match");
    std::vector<ExtValue> values;
    values.reserve(space.explicit_count());
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        values.push_back(f.explicit_values()[phi.apply_explicit(i)]);
    std::vector<TailRule> tails;
    tails.reserve(space.family_count());
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const Index start = space.family(j).start;
        const TailRule& src = f.tail(j);
        if (const auto* fan = std::get_if<FanInRule>(&phi.rule(j))) {
            tails.push_back(TailRule::constant(f.explicit_values()[fan->target]));
            continue;
        }
        const auto& shift = std::get<ShiftRule>(phi.rule(j));
        TailRule t;
        t.coeff = src.coeff;
        t.ratio = src.ratio;
        if (!src.is_constant())
            t.coeff = ExtValue(Rational(src.coeff.finite() * rational_pow(src.ratio, -shift.k)));
        for (const auto& [n, v] : src.exceptions)
            t.exceptions[n + shift.k] = v;
        for (std::size_t b = 0; b < shift.into.size(); ++b)
            t.exceptions[start + static_cast<Index>(b)] = f.explicit_values()[shift.into[b]];
        t.normalize();
        tails.push_back(std::move(t));
    }
    return MeasurableFn(std::move(values), std::move(tails));
}

MeasurableFn map_values(const MeasurableFn& f, const MeasureSpace& space, const ValueTable& table, const ExtValue& otherwise)
{
    auto g = [&](const ExtValue& v) {
        for (const auto& [key, image] : table)
            if (key == v)
                return image;
        return otherwise;
    };
    std::vector<ExtValue> values;
    values.reserve(f.explicit_values().size());
    for (const auto& v : f.explicit_values())
        values.push_back(g(v));
    std::vector<TailRule> tails;
    for (std::size_t j = 0; j < f.tails().size(); ++j) {
        const TailRule& src = f.tail(j);
        TailRule t;
        if (src.is_constant()) {
            t.coeff = g(src.coeff);
        } else {
            // A strictly monotone sequence meets each table key at most once.
            t.coeff = otherwise;
            for (const auto& [key, image] : table) {
                auto n = solve_geometric(src, space.family(j).start, key);
                if (n && !src.exceptions.count(*n))
                    t.exceptions[*n] = image;
            }
        }
        for (const auto& [n, v] : src.exceptions)
            t.exceptions[n] = g(v);
        t.normalize();
        tails.push_back(std::move(t));
    }
    return MeasurableFn(std::move(values), std::move(tails));
}

MeasurableFn indicator_of_value(const MeasurableFn& f, const MeasureSpace& space, const ExtValue& v)
{
    return map_values(f, space, {{v, ExtValue(1)}}, ExtValue(0));
}

std::vector<ExtValue> attained_values(const MeasurableFn& f, const MeasureSpace& space)
{
    std::set<ExtValue> seen;
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        if (sgn(space.atom(i).weight) > 0)
            seen.insert(f.explicit_values()[i]);
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const TailRule& t = f.tail(j);
        if (!t.is_constant())
            throw representation_error("function takes infinitely many values on family '" + space.family(j).id + "'");
        seen.insert(t.coeff);
        for (const auto& [n, v] : t.exceptions)
            seen.insert(v);
    }
    return {seen.begin(), seen.end()};
}

ExtValue essential_sup(const MeasurableFn& f, const MeasureSpace& space)
{
    ExtValue best;
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        if (sgn(space.atom(i).weight) > 0)
            best = std::max(best, f.explicit_values()[i]);
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const TailRule& t = f.tail(j);
        for (const auto& [n, v] : t.exceptions)
            best = std::max(best, v);
        if (!t.is_constant() && t.ratio > 1)
            return ExtValue::infinity();
        std::set<Index> keys;
        for (const auto& [n, v] : t.exceptions)
            keys.insert(n);
        // Constant or decreasing: the first free index carries the rule's maximum.
        best = std::max(best, t.rule_value(first_free_index(space.family(j).start, keys)));
    }
    return best;
}

namespace {

template <typename Pred>
std::optional<AtomId> find_where(const MeasurableFn& f, const MeasureSpace& space, Pred pred)
{
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        if (sgn(space.atom(i).weight) > 0 && pred(f.explicit_values()[i]))
            return AtomId::explicit_atom(i);
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const TailRule& t = f.tail(j);
        for (const auto& [n, v] : t.exceptions)
            if (pred(v))
                return AtomId::family_member(j, n);
        // The rule's zero/infinite status does not depend on n.
        std::set<Index> keys;
        for (const auto& [n, v] : t.exceptions)
            keys.insert(n);
        Index n = first_free_index(space.family(j).start, keys);
        if (pred(t.rule_value(n)))
            return AtomId::family_member(j, n);
    }
    return std::nullopt;
}

} // namespace

std::optional<AtomId> find_infinite(const MeasurableFn& f, const MeasureSpace& space)
{
    return find_where(f, space, [](const ExtValue& v) { return v.is_infinite(); });
}

std::optional<AtomId> find_zero(const MeasurableFn& f, const MeasureSpace& space)
{
    return find_where(f, space, [](const ExtValue& v) { return v.is_zero(); });
}

AeComparison ae_equal(const MeasurableFn& f, const MeasurableFn& g, const MeasureSpace& space)
{
    require_same_shape(f, g);
    if (f.explicit_values().size() != space.explicit_count() || f.tails().size() != space.family_count())
        throw input_error("cannot decide a.e. equality: functions and space do not match");
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        if (sgn(space.atom(i).weight) > 0 && f.explicit_values()[i] != g.explicit_values()[i])
            return {false, AtomId::explicit_atom(i)};
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const TailRule& a = f.tail(j);
        const TailRule& b = g.tail(j);
        const auto keys = exception_keys(a, b);
        for (Index n : keys)
            if (a.value(n) != b.value(n))
                return {false, AtomId::family_member(j, n)};
        if (a.coeff == b.coeff && a.ratio == b.ratio)
            continue;
        // Distinct canonical geometric rules agree at no more than one index.
        Index n = first_free_index(space.family(j).start, keys);
        for (int attempt = 0; attempt < 2; ++attempt) {
            if (a.rule_value(n) != b.rule_value(n))
                return {false, AtomId::family_member(j, n)};
            n = first_free_index(n + 1, keys);
        }
        throw consistency_error("geometric rules agree at two free indices but differ symbolically");
    }
    return {};
}

namespace {

ExtValue tail_integral(const TailRule& t, const TailFamily& fam, Index from)
{
    from = std::max(from, fam.start);
    ExtValue total;
    Rational excluded(0);
    for (const auto& [n, v] : t.exceptions) {
        if (n < from)
            continue;
        total += v * ExtValue(fam.weight(n));
        if (!t.is_constant() || t.coeff.is_finite())
            excluded += t.rule_value(n).finite() * fam.weight(n);
    }
    if (t.coeff.is_zero())
        return total;
    if (t.coeff.is_infinite())
        return ExtValue::infinity();
    const Rational coeff = t.coeff.finite() * fam.alpha;
    const Rational ratio = t.ratio * fam.ratio;
    ExtValue rule_part = geometric_tail_sum(coeff, ratio, from);
    if (rule_part.is_infinite())
        return rule_part;
    return total + ExtValue(Rational(rule_part.finite() - excluded));
}

} // namespace

ExtValue integrate(const MeasurableFn& f, const MeasureSpace& space, const AtomSet& set)
{
    ExtValue total;
    for (std::size_t i : set.explicit_atoms)
        total += f.explicit_values().at(i) * ExtValue(space.atom(i).weight);
    for (const auto& [j, n] : set.members)
        total += f.tail(j).value(n) * ExtValue(space.family(j).weight(n));
    for (const auto& [j, from] : set.tails)
        total += tail_integral(f.tail(j), space.family(j), from);
    return total;
}

ExtValue integrate(const MeasurableFn& f, const MeasureSpace& space)
{
    return integrate(f, space, AtomSet::whole(space));
}

std::string describe(const MeasurableFn& f, const MeasureSpace& space)
{
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first)
            os << ' ';
        first = false;
    };
    for (std::size_t i = 0; i < space.explicit_count(); ++i) {
        sep();
        os << space.atom(i).id << '=' << f.explicit_values()[i];
    }
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const TailRule& t = f.tail(j);
        const TailFamily& fam = space.family(j);
        sep();
        os << fam.id << "[n>=" << fam.start << "]=" << t.coeff;
        if (!t.is_constant())
            os << '*' << t.ratio.get_str() << "^n";
        for (const auto& [n, v] : t.exceptions)
            os << ' ' << fam.id << '[' << n << "]=" << v;
    }
    return os.str();
}

} // namespace qnc
