#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnc/ext_value.hpp"
#include "qnc/measure_space.hpp"

namespace qnc {

/// Values of a function on one tail family: coeff * ratio^n, overridden at finitely many indices.
/// Kept canonical: coeff in {0, inf} forces ratio = 1, and no exception repeats the rule value.
struct TailRule {
    ExtValue coeff;
    Rational ratio{1};
    std::map<Index, ExtValue> exceptions;

    static TailRule constant(ExtValue v);
    static TailRule geometric(ExtValue coeff, Rational ratio);

    ExtValue rule_value(Index n) const;
    ExtValue value(Index n) const;
    /// The rule part takes a single value.
    bool is_constant() const { return coeff.is_zero() || coeff.is_infinite() || ratio == 1; }

    void normalize();

    friend bool operator==(const TailRule&, const TailRule&) = default;
};

/// Function from the atoms of a space to [0, inf], one value per explicit atom and one
/// tail rule per family.
class MeasurableFn {
public:
    MeasurableFn() = default;
    MeasurableFn(std::vector<ExtValue> explicit_values, std::vector<TailRule> tails = {});

    static MeasurableFn constant(const MeasureSpace& space, const ExtValue& v);
    static MeasurableFn indicator(const MeasureSpace& space, const AtomSet& set);

    ExtValue operator()(const AtomId& x) const;

    const std::vector<ExtValue>& explicit_values() const { return values_; }
    const std::vector<TailRule>& tails() const { return tails_; }
    const TailRule& tail(std::size_t family) const { return tails_.at(family); }

    friend bool operator==(const MeasurableFn&, const MeasurableFn&) = default;

private:
    std::vector<ExtValue> values_;
    std::vector<TailRule> tails_;
};

MeasurableFn product(const MeasurableFn& f, const MeasurableFn& g);
MeasurableFn scale(const MeasurableFn& f, const ExtValue& c);
MeasurableFn power(const MeasurableFn& f, unsigned n);
/// Throws representation_error when two geometric rules with different ratios meet.
MeasurableFn sum(const MeasurableFn& f, const MeasurableFn& g);
/// f / g on positive-weight atoms, 0 on null atoms. 0/0 and inf/inf throw arithmetic_error.
MeasurableFn quotient(const MeasurableFn& f, const MeasurableFn& g, const MeasureSpace& space);
MeasurableFn compose(const MeasurableFn& f, const MeasureSpace& space, const Transformation& phi);

using ValueTable = std::vector<std::pair<ExtValue, ExtValue>>;
/// g o f where g is given by a finite table and a default for all other values.
MeasurableFn map_values(const MeasurableFn& f, const MeasureSpace& space, const ValueTable& table, const ExtValue& otherwise);
/// chi_{v} o f.
MeasurableFn indicator_of_value(const MeasurableFn& f, const MeasureSpace& space, const ExtValue& v);

/// Distinct values on positive-weight atoms, ascending. representation_error when infinitely many.
std::vector<ExtValue> attained_values(const MeasurableFn& f, const MeasureSpace& space);
ExtValue essential_sup(const MeasurableFn& f, const MeasureSpace& space);

std::optional<AtomId> find_infinite(const MeasurableFn& f, const MeasureSpace& space);
std::optional<AtomId> find_zero(const MeasurableFn& f, const MeasureSpace& space);

struct AeComparison {
    bool equal = true;
    std::optional<AtomId> witness;

    explicit operator bool() const { return equal; }
};

/// Equality at every atom of positive weight. Tails are compared symbolically.
AeComparison ae_equal(const MeasurableFn& f, const MeasurableFn& g, const MeasureSpace& space);

/// Integral of f over a set of atoms; geometric tails are summed exactly.
ExtValue integrate(const MeasurableFn& f, const MeasureSpace& space, const AtomSet& set);
ExtValue integrate(const MeasurableFn& f, const MeasureSpace& space);

/// `0=3 1=0 F[n>=1]=2*1/2^n F[4]=7`
std::string describe(const MeasurableFn& f, const MeasureSpace& space);

} // namespace qnc
