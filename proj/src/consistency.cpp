#include "qnc/consistency.hpp"

#include <algorithm>
#include <set>

#include "qnc/errors.hpp"

namespace qnc {

DiscreteMeasure::DiscreteMeasure(std::vector<std::pair<Rational, Rational>> points)
{
    Rational total(0);
    for (auto& [t, m] : points) {
        t.canonicalize();
        m.canonicalize();
        if (sgn(t) < 0)
            throw input_error("support point " + t.get_str() + " is negative");
        if (sgn(m) < 0 || m > 1)
            throw input_error("mass " + m.get_str() + " outside [0,1]");
        total += m;
        if (sgn(m) > 0)
            points_.emplace_back(t, m);
    }
    if (total != 1)
        throw input_error("masses sum to " + total.get_str() + ", not 1");
    std::sort(points_.begin(), points_.end());
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (points_[i].first == points_[i - 1].first)
            throw input_error("repeated support point " + points_[i].first.get_str());
}

DiscreteMeasure DiscreteMeasure::dirac(const Rational& t)
{
    return DiscreteMeasure({{t, Rational(1)}});
}

Rational DiscreteMeasure::mass_at(const Rational& t) const
{
    for (const auto& [s, m] : points_)
        if (s == t)
            return m;
    return Rational(0);
}

Rational DiscreteMeasure::moment(unsigned n) const
{
    Rational total(0);
    for (const auto& [t, m] : points_)
        total += m * rational_pow(t, n);
    return total;
}

ProbabilityFamily::ProbabilityFamily(const MeasureSpace& space, std::vector<std::optional<DiscreteMeasure>> explicit_measures,
                                     std::vector<MeasureTail> tails)
    : explicit_(std::move(explicit_measures)), tails_(std::move(tails))
{
    if (explicit_.size() != space.explicit_count() || tails_.size() != space.family_count())
        throw input_error("probability family does not match the space");
    for (std::size_t i = 0; i < explicit_.size(); ++i)
        if (!explicit_[i] && sgn(space.atom(i).weight) > 0)
            throw input_error("no probability measure given for atom '" + space.atom(i).id + "'");
    for (std::size_t j = 0; j < tails_.size(); ++j)
        for (const auto& [n, m] : tails_[j].exceptions)
            if (n < space.family(j).start)
                throw input_error("measure given below the start of family '" + space.family(j).id + "'");
}

const DiscreteMeasure* ProbabilityFamily::at(const AtomId& x) const
{
    if (!x.member)
        return explicit_.at(x.slot) ? &*explicit_[x.slot] : nullptr;
    const MeasureTail& t = tails_.at(x.slot);
    if (auto it = t.exceptions.find(x.n); it != t.exceptions.end())
        return &it->second;
    return &t.rule;
}

std::vector<Rational> ProbabilityFamily::support() const
{
    std::set<Rational> pts;
    auto add = [&pts](const DiscreteMeasure& m) {
        for (const auto& [t, mass] : m.points())
            pts.insert(t);
    };
    for (const auto& m : explicit_)
        if (m)
            add(*m);
    for (const auto& t : tails_) {
        add(t.rule);
        for (const auto& [n, m] : t.exceptions)
            add(m);
    }
    return {pts.begin(), pts.end()};
}

namespace {

template <typename Value>
MeasurableFn lift(const ProbabilityFamily& family, Value value)
{
    std::vector<ExtValue> values;
    for (const auto& m : family.explicit_measures())
        values.push_back(m ? ExtValue(value(*m)) : ExtValue());
    std::vector<TailRule> tails;
    for (const auto& t : family.tails()) {
        TailRule r = TailRule::constant(ExtValue(value(t.rule)));
        for (const auto& [n, m] : t.exceptions)
            r.exceptions[n] = ExtValue(value(m));
        tails.push_back(std::move(r));
    }
    return MeasurableFn(std::move(values), std::move(tails));
}

DiscreteMeasure dirac_of(const ExtValue& v)
{
    return DiscreteMeasure::dirac(v.finite());
}

} // namespace

MeasurableFn ProbabilityFamily::point_mass(const Rational& t) const
{
    return lift(*this, [&t](const DiscreteMeasure& m) { return m.mass_at(t); });
}

MeasurableFn ProbabilityFamily::moment_fn(unsigned n) const
{
    return lift(*this, [n](const DiscreteMeasure& m) { return m.moment(n); });
}

ProbabilityFamily canonical_family(const DerivativeTable& table, CanonicalVariant variant)
{
    const MeasureSpace& space = table.space();
    const MeasurableFn& base = variant == CanonicalVariant::plain ? table.h() : table.h_after_phi();
    if (auto x = find_infinite(base, space))
        throw precondition_error("canonical family needs finite h_phi: infinite at " + space.name(*x));
    std::vector<std::optional<DiscreteMeasure>> explicit_measures(space.explicit_count());
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        if (sgn(space.atom(i).weight) > 0)
            explicit_measures[i] = dirac_of(base.explicit_values()[i]);
    std::vector<MeasureTail> tails;
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const TailRule& r = base.tail(j);
        if (!r.is_constant())
            throw representation_error("canonical family over a non-constant tail of h_phi");
        MeasureTail t{dirac_of(r.coeff), {}};
        for (const auto& [n, v] : r.exceptions)
            t.exceptions.emplace(n, dirac_of(v));
        tails.push_back(std::move(t));
    }
    return ProbabilityFamily(space, std::move(explicit_measures), std::move(tails));
}

FamilyVerdict check_cc(const ProbabilityFamily& family, const DerivativeTable& table)
{
    const MeasureSpace& space = table.space();
    const MeasurableFn& h_phi = table.h_after_phi();
    if (auto x = find_zero(h_phi, space))
        throw precondition_error("consistency condition needs h_phi(phi(x)) > 0: zero at " + space.name(*x));
    if (auto x = find_infinite(h_phi, space))
        throw precondition_error("consistency condition needs h_phi(phi(x)) < inf: infinite at " + space.name(*x));
    for (const Rational& t : family.support()) {
        MeasurableFn mass = family.point_mass(t);
        MeasurableFn lhs = table.expectation(mass);
        MeasurableFn rhs = quotient(scale(table.after_phi(mass), ExtValue(t)), h_phi, space);
        auto cmp = ae_equal(lhs, rhs, space);
        if (!cmp) {
            const AtomId x = *cmp.witness;
            return {false, Witness{x, ExtValue(t), std::nullopt, "E(P(.,s))=int_s(t*P(phi(x),dt))/h(phi(x))", lhs(x), rhs(x)}};
        }
    }
    return {};
}

ExtValue moments(const ProbabilityFamily& family, const AtomId& x, unsigned n)
{
    const DiscreteMeasure* m = family.at(x);
    if (!m)
        throw input_error("no probability measure at a null atom");
    return ExtValue(m->moment(n));
}

FamilyVerdict check_sms(const ProbabilityFamily& family, const DerivativeTable& table)
{
    const MeasureSpace& space = table.space();
    if (auto x = find_zero(table.h(), space))
        throw precondition_error("moment identity needs h_phi > 0: zero at " + space.name(*x));
    if (auto x = find_infinite(table.h(), space))
        throw precondition_error("moment identity needs h_phi < inf: infinite at " + space.name(*x));
    if (!check_cc(family, table).holds)
        throw precondition_error("moment identity needs the consistency condition");
    for (unsigned n = 0; n <= table.n_max(); ++n) {
        MeasurableFn m = family.moment_fn(n);
        auto cmp = ae_equal(table.h_power(n), m, space);
        if (!cmp) {
            const AtomId x = *cmp.witness;
            return {false, Witness{x, std::nullopt, n, "h_phi^n=int(t^n*P(x,dt))", table.h_power(n)(x), m(x)}};
        }
    }
    return {};
}

bool is_psd(std::vector<std::vector<Rational>> m)
{
    const std::size_t d = m.size();
    for (std::size_t k = 0; k < d; ++k) {
        const int s = sgn(m[k][k]);
        if (s < 0)
            return false;
        if (s == 0) {
            for (std::size_t j = k + 1; j < d; ++j)
                if (sgn(m[k][j]) != 0)
                    return false;
            continue;
        }
        for (std::size_t i = k + 1; i < d; ++i) {
            if (sgn(m[i][k]) == 0)
                continue;
            const Rational factor = m[i][k] / m[k][k];
            for (std::size_t j = k; j < d; ++j)
                m[i][j] -= factor * m[k][j];
        }
    }
    return true;
}

bool hankel_psd(const DiscreteMeasure& m, unsigned n_max)
{
    std::vector<Rational> s;
    for (unsigned n = 0; n <= n_max; ++n)
        s.push_back(m.moment(n));
    auto hankel = [&s](std::size_t size, std::size_t shift) {
        std::vector<std::vector<Rational>> h(size, std::vector<Rational>(size));
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j)
                h[i][j] = s[i + j + shift];
        return h;
    };
    const std::size_t even = n_max / 2 + 1;
    const std::size_t odd = n_max >= 1 ? (n_max - 1) / 2 + 1 : 0;
    return is_psd(hankel(even, 0)) && is_psd(hankel(odd, 1));
}

bool hankel_psd(const ProbabilityFamily& family, const AtomId& x, unsigned n_max)
{
    const DiscreteMeasure* m = family.at(x);
    if (!m)
        throw input_error("no probability measure at a null atom");
    return hankel_psd(*m, n_max);
}

bool hankel_psd(const ProbabilityFamily& family, unsigned n_max)
{
    std::vector<const DiscreteMeasure*> distinct;
    auto visit = [&](const DiscreteMeasure& m) {
        for (const auto* d : distinct)
            if (*d == m)
                return true;
        distinct.push_back(&m);
        return hankel_psd(m, n_max);
    };
    for (const auto& m : family.explicit_measures())
        if (m && !visit(*m))
            return false;
    for (const auto& t : family.tails()) {
        if (!visit(t.rule))
            return false;
        for (const auto& [n, m] : t.exceptions)
            if (!visit(m))
                return false;
    }
    return true;
}

} // namespace qnc
