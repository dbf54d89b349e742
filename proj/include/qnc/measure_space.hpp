#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qnc/ext_value.hpp"

namespace qnc {

using Index = std::int64_t;

/// A point of an atomic space: either an explicit atom (by slot) or member n of a tail family.
struct AtomId {
    bool member = false;
    std::size_t slot = 0;
    Index n = 0;

    static AtomId explicit_atom(std::size_t slot) { return {false, slot, 0}; }
    static AtomId family_member(std::size_t family, Index n) { return {true, family, n}; }

    friend auto operator<=>(const AtomId&, const AtomId&) = default;
};

struct ExplicitAtom {
    std::string id;
    Rational weight;

    friend bool operator==(const ExplicitAtom&, const ExplicitAtom&) = default;
};

/// Countably many atoms n >= start with weight alpha * ratio^n.
struct TailFamily {
    std::string id;
    Index start = 0;
    Rational alpha{1};
    Rational ratio{1};

    Rational weight(Index n) const;
    /// Sum of weights over members n >= from (from >= start).
    ExtValue mass_from(Index from) const;

    friend bool operator==(const TailFamily&, const TailFamily&) = default;
};

/// Sum over n >= from of coeff * ratio^n. Infinite when ratio >= 1 and coeff > 0.
ExtValue geometric_tail_sum(const Rational& coeff, const Rational& ratio, Index from);

/// r^n for any integer n (r > 0 when n < 0).
Rational rational_pow(const Rational& r, Index n);

/// Atomic sigma-finite measure space: finitely many explicit atoms plus geometric tail families.
class MeasureSpace {
public:
    MeasureSpace(std::vector<ExplicitAtom> atoms, std::vector<TailFamily> families = {});

    std::size_t explicit_count() const { return atoms_.size(); }
    std::size_t family_count() const { return families_.size(); }
    bool is_finite() const { return families_.empty(); }

    const ExplicitAtom& atom(std::size_t slot) const { return atoms_.at(slot); }
    const TailFamily& family(std::size_t slot) const { return families_.at(slot); }
    const std::vector<ExplicitAtom>& atoms() const { return atoms_; }
    const std::vector<TailFamily>& families() const { return families_; }

    Rational weight(const AtomId& x) const;
    bool contains(const AtomId& x) const;
    bool is_null(const AtomId& x) const { return sgn(weight(x)) == 0; }

    /// Explicit atom by id, or `family[n]` for members.
    std::optional<AtomId> find(std::string_view name) const;
    std::optional<std::size_t> find_family(std::string_view id) const;
    std::string name(const AtomId& x) const;

    ExtValue total_mass() const;

    friend bool operator==(const MeasureSpace&, const MeasureSpace&) = default;

private:
    std::vector<ExplicitAtom> atoms_;
    std::vector<TailFamily> families_;
};

/// Member n maps to member n - k for n >= start + k; members start .. start+k-1 map to `into`.
/// k = 0 is the identity on the family.
struct ShiftRule {
    Index k = 1;
    std::vector<std::size_t> into;

    friend bool operator==(const ShiftRule&, const ShiftRule&) = default;
};

/// Every member maps to one explicit atom.
struct FanInRule {
    std::size_t target = 0;

    friend bool operator==(const FanInRule&, const FanInRule&) = default;
};

using MapRule = std::variant<ShiftRule, FanInRule>;

/// Self-map of the atoms of a space. Explicit atoms map to explicit atoms;
/// each family follows its rule.
class Transformation {
public:
    Transformation(const MeasureSpace& space, std::vector<std::size_t> explicit_map, std::vector<MapRule> rules = {});

    static Transformation identity(const MeasureSpace& space);

    AtomId apply(const AtomId& x) const;
    std::size_t apply_explicit(std::size_t slot) const { return map_[slot]; }

    const std::vector<std::size_t>& explicit_map() const { return map_; }
    const std::vector<MapRule>& rules() const { return rules_; }
    const MapRule& rule(std::size_t family) const { return rules_.at(family); }

    /// (*this) o inner. Throws representation_error when the rules do not combine.
    Transformation after(const Transformation& inner) const;
    Transformation power(unsigned n) const;

    bool is_bijective_finite() const;

    friend bool operator==(const Transformation&, const Transformation&) = default;

private:
    Transformation(std::vector<std::size_t> map, std::vector<MapRule> rules, const std::vector<TailFamily>& families);

    std::vector<std::size_t> map_;
    std::vector<MapRule> rules_;
    std::vector<Index> starts_;
};

/// Set of atoms: finitely many explicit atoms and members, plus whole family tails `n >= from`.
struct AtomSet {
    std::vector<std::size_t> explicit_atoms;
    std::vector<std::pair<std::size_t, Index>> members;
    std::vector<std::pair<std::size_t, Index>> tails;

    static AtomSet singleton(const AtomId& x);
    static AtomSet whole(const MeasureSpace& space);
    static AtomSet family_tail(std::size_t family, Index from);

    bool empty() const { return explicit_atoms.empty() && members.empty() && tails.empty(); }
    bool contains(const AtomId& x) const;
};

AtomSet fiber(const MeasureSpace& space, const Transformation& phi, const AtomId& x);
ExtValue measure(const MeasureSpace& space, const AtomSet& set);
ExtValue fiber_measure(const MeasureSpace& space, const Transformation& phi, const AtomId& x);
/// phi^{-1}(set).
AtomSet preimage(const MeasureSpace& space, const Transformation& phi, const AtomSet& set);

struct NonsingularVerdict {
    bool holds = true;
    std::optional<AtomId> witness;
};

/// Every null atom has a null fiber.
NonsingularVerdict check_nonsingular(const MeasureSpace& space, const Transformation& phi);

/// Space together with a self-map; the unit the file format and the corpus deal in.
struct Instance {
    std::string name;
    MeasureSpace space;
    Transformation phi;
};

} // namespace qnc
