#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qnc/quasinormality.hpp"

namespace qnc {

/// Finitely supported probability measure on [0, inf): (point, mass) pairs, ascending by point.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    /// Drops zero masses; points must be distinct and >= 0, masses must sum to exactly 1.
    explicit DiscreteMeasure(std::vector<std::pair<Rational, Rational>> points);

    static DiscreteMeasure dirac(const Rational& t);

    const std::vector<std::pair<Rational, Rational>>& points() const { return points_; }
    Rational mass_at(const Rational& t) const;
    Rational moment(unsigned n) const;

    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
    std::vector<std::pair<Rational, Rational>> points_;
};

struct MeasureTail {
    DiscreteMeasure rule;
    std::map<Index, DiscreteMeasure> exceptions;

    friend bool operator==(const MeasureTail&, const MeasureTail&) = default;
};

/// P(x, .) for every atom of positive weight. Null atoms may be left without a measure.
class ProbabilityFamily {
public:
    ProbabilityFamily(const MeasureSpace& space, std::vector<std::optional<DiscreteMeasure>> explicit_measures,
                      std::vector<MeasureTail> tails = {});

    /// nullptr for a null atom without a measure.
    const DiscreteMeasure* at(const AtomId& x) const;

    /// Union of all supports, ascending.
    std::vector<Rational> support() const;
    /// x -> P(x, {t}).
    MeasurableFn point_mass(const Rational& t) const;
    /// x -> integral of s^n P(x, ds).
    MeasurableFn moment_fn(unsigned n) const;

    const std::vector<std::optional<DiscreteMeasure>>& explicit_measures() const { return explicit_; }
    const std::vector<MeasureTail>& tails() const { return tails_; }

    friend bool operator==(const ProbabilityFamily&, const ProbabilityFamily&) = default;

private:
    std::vector<std::optional<DiscreteMeasure>> explicit_;
    std::vector<MeasureTail> tails_;
};

enum class CanonicalVariant { plain, precomposed };

/// Dirac at h_phi(x) (plain) or h_phi(phi(x)) (precomposed). Requires h_phi finite a.e.
ProbabilityFamily canonical_family(const DerivativeTable& table, CanonicalVariant variant);

struct FamilyVerdict {
    bool holds = true;
    std::optional<Witness> witness;
};

/// E(P(., {t}))(x) = t P(phi(x), {t}) / h_phi(phi(x)) for every support point t.
/// Requires 0 < h_phi o phi < inf a.e. and finite fibers.
FamilyVerdict check_cc(const ProbabilityFamily& family, const DerivativeTable& table);

ExtValue moments(const ProbabilityFamily& family, const AtomId& x, unsigned n);

/// h_{phi^n} = n-th moment of P for n = 0 .. table.n_max(). Requires 0 < h_phi < inf a.e. and (CC).
FamilyVerdict check_sms(const ProbabilityFamily& family, const DerivativeTable& table);

/// Exact positive semidefiniteness by symmetric elimination.
bool is_psd(std::vector<std::vector<Rational>> m);

/// Hankel matrices [s_{i+j}] and [s_{i+j+1}] of the moments s_0 .. s_{n_max} are both PSD.
bool hankel_psd(const DiscreteMeasure& m, unsigned n_max);
bool hankel_psd(const ProbabilityFamily& family, const AtomId& x, unsigned n_max);
/// Every measure of the family, null atoms included when given.
bool hankel_psd(const ProbabilityFamily& family, unsigned n_max);

} // namespace qnc
