#include "qnc/measure_space.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "qnc/errors.hpp"

namespace qnc {

Rational rational_pow(const Rational& r, Index n)
{
    if (n == 0)
        return Rational(1);
    Rational base = r;
    if (n < 0) {
        if (sgn(r) == 0)
            throw arithmetic_error("negative power of zero");
        base = 1 / r;
        n = -n;
    }
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(n));
    out.canonicalize();
    return out;
}

ExtValue geometric_tail_sum(const Rational& coeff, const Rational& ratio, Index from)
{
    if (sgn(coeff) == 0)
        return ExtValue();
    if (ratio >= 1)
        return ExtValue::infinity();
    return ExtValue(Rational(coeff * rational_pow(ratio, from) / (1 - ratio)));
}

Rational TailFamily::weight(Index n) const
{
    return alpha * rational_pow(ratio, n);
}

ExtValue TailFamily::mass_from(Index from) const
{
    return geometric_tail_sum(alpha, ratio, std::max(from, start));
}

MeasureSpace::MeasureSpace(std::vector<ExplicitAtom> atoms, std::vector<TailFamily> families)
    : atoms_(std::move(atoms)), families_(std::move(families))
{
    std::set<std::string> ids;
    bool positive = false;
    for (auto& a : atoms_)
        a.weight.canonicalize();
    for (auto& f : families_) {
        f.alpha.canonicalize();
        f.ratio.canonicalize();
    }
    for (const auto& a : atoms_) {
        if (a.id.empty())
            throw input_error("atom id must not be empty");
        if (!ids.insert(a.id).second)
            throw input_error("duplicate atom id '" + a.id + "'");
        if (sgn(a.weight) < 0)
            throw input_error("atom '" + a.id + "' has negative weight");
        positive = positive || sgn(a.weight) > 0;
    }
    for (const auto& f : families_) {
        if (f.id.empty())
            throw input_error("family id must not be empty");
        if (!ids.insert(f.id).second)
            throw input_error("duplicate family id '" + f.id + "'");
        if (f.start < 0)
            throw input_error("family '" + f.id + "' has negative start index");
        if (sgn(f.alpha) <= 0 || sgn(f.ratio) <= 0)
            throw input_error("family '" + f.id + "' needs alpha > 0 and ratio > 0");
        positive = true;
    }
    if (!positive)
        throw input_error("space has no atom of positive weight");
}

bool MeasureSpace::contains(const AtomId& x) const
{
    if (!x.member)
        return x.slot < atoms_.size();
    return x.slot < families_.size() && x.n >= families_[x.slot].start;
}

Rational MeasureSpace::weight(const AtomId& x) const
{
    if (!contains(x))
        throw input_error("atom not in space");
    return x.member ? families_[x.slot].weight(x.n) : atoms_[x.slot].weight;
}

std::optional<std::size_t> MeasureSpace::find_family(std::string_view id) const
{
    for (std::size_t j = 0; j < families_.size(); ++j)
        if (families_[j].id == id)
            return j;
    return std::nullopt;
}

std::optional<AtomId> MeasureSpace::find(std::string_view name) const
{
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].id == name)
            return AtomId::explicit_atom(i);
    auto open = name.find('[');
    if (open == std::string_view::npos || name.back() != ']')
        return std::nullopt;
    auto fam = find_family(name.substr(0, open));
    if (!fam)
        return std::nullopt;
    std::string_view digits = name.substr(open + 1, name.size() - open - 2);
    Index n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
        return std::nullopt;
    AtomId x = AtomId::family_member(*fam, n);
    if (!contains(x))
        return std::nullopt;
    return x;
}

std::string MeasureSpace::name(const AtomId& x) const
{
    if (!x.member)
        return atoms_.at(x.slot).id;
    return families_.at(x.slot).id + "[" + std::to_string(x.n) + "]";
}

ExtValue MeasureSpace::total_mass() const
{
    ExtValue total;
    for (const auto& a : atoms_)
        total += ExtValue(a.weight);
    for (const auto& f : families_)
        total += f.mass_from(f.start);
    return total;
}

namespace {

std::vector<Index> family_starts(const std::vector<TailFamily>& families)
{
    std::vector<Index> starts;
    starts.reserve(families.size());
    for (const auto& f : families)
        starts.push_back(f.start);
    return starts;
}

} // namespace

Transformation::Transformation(std::vector<std::size_t> map, std::vector<MapRule> rules, const std::vector<TailFamily>& families)
    : map_(std::move(map)), rules_(std::move(rules)), starts_(family_starts(families))
{
}

Transformation::Transformation(const MeasureSpace& space, std::vector<std::size_t> explicit_map, std::vector<MapRule> rules)
    : Transformation(std::move(explicit_map), std::move(rules), space.families())
{
    if (map_.size() != space.explicit_count())
        throw input_error("transformation is not total: " + std::to_string(map_.size()) + " images for "
                          + std::to_string(space.explicit_count()) + " explicit atoms");
    for (std::size_t t : map_)
        if (t >= space.explicit_count())
            throw input_error("explicit atom mapped outside the explicit atoms");
    if (rules_.size() != space.family_count())
        throw input_error("every family needs exactly one map rule");
    for (std::size_t j = 0; j < rules_.size(); ++j) {
        const std::string& id = space.family(j).id;
        if (const auto* s = std::get_if<ShiftRule>(&rules_[j])) {
            if (s->k < 0 || static_cast<std::size_t>(s->k) != s->into.size())
                throw input_error("shift family '" + id + "' needs exactly k boundary targets");
            for (std::size_t t : s->into)
                if (t >= space.explicit_count())
                    throw input_error("shift family '" + id + "' boundary target is not an explicit atom");
        } else {
            if (std::get<FanInRule>(rules_[j]).target >= space.explicit_count())
                throw input_error("fan-in family '" + id + "' target is not an explicit atom");
        }
    }
}

Transformation Transformation::identity(const MeasureSpace& space)
{
    std::vector<std::size_t> map(space.explicit_count());
    for (std::size_t i = 0; i < map.size(); ++i)
        map[i] = i;
    std::vector<MapRule> rules(space.family_count(), ShiftRule{0, {}});
    return Transformation(space, std::move(map), std::move(rules));
}

AtomId Transformation::apply(const AtomId& x) const
{
    if (!x.member)
        return AtomId::explicit_atom(map_.at(x.slot));
    const Index start = starts_.at(x.slot);
    if (x.n < start)
        throw input_error("member index below family start");
    if (const auto* s = std::get_if<ShiftRule>(&rules_[x.slot])) {
        if (x.n >= start + s->k)
            return AtomId::family_member(x.slot, x.n - s->k);
        return AtomId::explicit_atom(s->into[static_cast<std::size_t>(x.n - start)]);
    }
    return AtomId::explicit_atom(std::get<FanInRule>(rules_[x.slot]).target);
}

Transformation Transformation::after(const Transformation& inner) const
{
    if (inner.map_.size() != map_.size() || inner.rules_.size() != rules_.size())
        throw input_error("composing transformations of different spaces");
    std::vector<std::size_t> map(map_.size());
    for (std::size_t i = 0; i < map.size(); ++i)
        map[i] = map_[inner.map_[i]];
    std::vector<MapRule> rules;
    rules.reserve(rules_.size());
    for (std::size_t j = 0; j < rules_.size(); ++j) {
        const MapRule& outer_rule = rules_[j];
        if (const auto* in_fan = std::get_if<FanInRule>(&inner.rules_[j])) {
            rules.push_back(FanInRule{map_[in_fan->target]});
            continue;
        }
        const auto& in_shift = std::get<ShiftRule>(inner.rules_[j]);
        if (const auto* out_shift = std::get_if<ShiftRule>(&outer_rule)) {
            ShiftRule combined{in_shift.k + out_shift->k, {}};
            for (std::size_t t : in_shift.into)
                combined.into.push_back(map_[t]);
            combined.into.insert(combined.into.end(), out_shift->into.begin(), out_shift->into.end());
            rules.push_back(std::move(combined));
            continue;
        }
        const std::size_t target = std::get<FanInRule>(outer_rule).target;
        for (std::size_t t : in_shift.into)
            if (map_[t] != target)
                throw representation_error("composition of a shift with a fan-in is not a single fan-in");
        rules.push_back(FanInRule{target});
    }
    Transformation out = *this;
    out.map_ = std::move(map);
    out.rules_ = std::move(rules);
    return out;
}

Transformation Transformation::power(unsigned n) const
{
    Transformation out = *this;
    for (auto& r : out.rules_)
        r = ShiftRule{0, {}};
    for (std::size_t i = 0; i < out.map_.size(); ++i)
        out.map_[i] = i;
    for (unsigned step = 0; step < n; ++step)
        out = after(out);
    return out;
}

bool Transformation::is_bijective_finite() const
{
    if (!rules_.empty())
        return false;
    std::vector<bool> hit(map_.size(), false);
    for (std::size_t t : map_) {
        if (hit[t])
            return false;
        hit[t] = true;
    }
    return true;
}

AtomSet AtomSet::singleton(const AtomId& x)
{
    AtomSet s;
    if (x.member)
        s.members.emplace_back(x.slot, x.n);
    else
        s.explicit_atoms.push_back(x.slot);
    return s;
}

AtomSet AtomSet::whole(const MeasureSpace& space)
{
    AtomSet s;
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        s.explicit_atoms.push_back(i);
    for (std::size_t j = 0; j < space.family_count(); ++j)
        s.tails.emplace_back(j, space.family(j).start);
    return s;
}

AtomSet AtomSet::family_tail(std::size_t family, Index from)
{
    AtomSet s;
    s.tails.emplace_back(family, from);
    return s;
}

bool AtomSet::contains(const AtomId& x) const
{
    if (!x.member)
        return std::find(explicit_atoms.begin(), explicit_atoms.end(), x.slot) != explicit_atoms.end();
    for (const auto& [f, n] : members)
        if (f == x.slot && n == x.n)
            return true;
    for (const auto& [f, from] : tails)
        if (f == x.slot && x.n >= from)
            return true;
    return false;
}

AtomSet fiber(const MeasureSpace& space, const Transformation& phi, const AtomId& x)
{
    if (!space.contains(x))
        throw input_error("fiber of an atom outside the space");
    AtomSet out;
    if (x.member) {
        if (const auto* s = std::get_if<ShiftRule>(&phi.rule(x.slot)))
            out.members.emplace_back(x.slot, x.n + s->k);
        return out;
    }
    const auto& map = phi.explicit_map();
    for (std::size_t i = 0; i < map.size(); ++i)
        if (map[i] == x.slot)
            out.explicit_atoms.push_back(i);
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const Index start = space.family(j).start;
        if (const auto* s = std::get_if<ShiftRule>(&phi.rule(j))) {
            for (std::size_t b = 0; b < s->into.size(); ++b)
                if (s->into[b] == x.slot)
                    out.members.emplace_back(j, start + static_cast<Index>(b));
        } else if (std::get<FanInRule>(phi.rule(j)).target == x.slot) {
            out.tails.emplace_back(j, start);
        }
    }
    return out;
}

ExtValue measure(const MeasureSpace& space, const AtomSet& set)
{
    ExtValue total;
    for (std::size_t i : set.explicit_atoms)
        total += ExtValue(space.atom(i).weight);
    for (const auto& [f, n] : set.members)
        total += ExtValue(space.family(f).weight(n));
    for (const auto& [f, from] : set.tails)
        total += space.family(f).mass_from(from);
    return total;
}

ExtValue fiber_measure(const MeasureSpace& space, const Transformation& phi, const AtomId& x)
{
    return measure(space, fiber(space, phi, x));
}

AtomSet preimage(const MeasureSpace& space, const Transformation& phi, const AtomSet& set)
{
    AtomSet out;
    auto absorb = [&out](AtomSet part) {
        out.explicit_atoms.insert(out.explicit_atoms.end(), part.explicit_atoms.begin(), part.explicit_atoms.end());
        out.members.insert(out.members.end(), part.members.begin(), part.members.end());
        out.tails.insert(out.tails.end(), part.tails.begin(), part.tails.end());
    };
    for (std::size_t i : set.explicit_atoms)
        absorb(fiber(space, phi, AtomId::explicit_atom(i)));
    for (const auto& [f, n] : set.members)
        absorb(fiber(space, phi, AtomId::family_member(f, n)));
    for (const auto& [f, from] : set.tails)
        if (const auto* s = std::get_if<ShiftRule>(&phi.rule(f)))
            out.tails.emplace_back(f, std::max(from, space.family(f).start) + s->k);
    return out;
}

NonsingularVerdict check_nonsingular(const MeasureSpace& space, const Transformation& phi)
{
    for (std::size_t i = 0; i < space.explicit_count(); ++i) {
        AtomId x = AtomId::explicit_atom(i);
        if (space.is_null(x) && !fiber_measure(space, phi, x).is_zero())
            return {false, x};
    }
    return {};
}

} // namespace qnc
