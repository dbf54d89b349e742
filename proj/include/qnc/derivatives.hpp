#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnc/measurable_fn.hpp"

namespace qnc {

/// h_{phi^n}: fiber measure under phi^n divided by the atom's weight, 0 on null atoms.
/// Throws precondition_error when phi is singular.
MeasurableFn radon_nikodym(const MeasureSpace& space, const Transformation& phi, unsigned n = 1);

struct DensityVerdict {
    bool holds = true;
    std::optional<AtomId> witness;
};

/// h_phi < inf on every atom of positive weight.
DensityVerdict densely_defined(const MeasureSpace& space, const Transformation& phi);

struct BoundednessVerdict {
    bool holds = true;
    ExtValue sup;
};

BoundednessVerdict bounded(const MeasureSpace& space, const Transformation& phi);

/// Weighted average of f over the fiber of phi(x). Requires every such fiber to have finite measure.
MeasurableFn conditional_expectation(const MeasurableFn& f, const MeasureSpace& space, const Transformation& phi);

/// Both sides of the averaging identity over phi^{-1}(set) for one generating set.
struct AveragingCheck {
    std::string set;
    ExtValue of_f;
    ExtValue of_expectation;
};

/// One entry per explicit atom and one per family tail.
std::vector<AveragingCheck> expectation_diagnostics(const MeasurableFn& f, const MeasureSpace& space,
                                                    const Transformation& phi);

struct TransportSides {
    ExtValue composed; // integral of f o phi
    ExtValue weighted; // integral of f * h_phi
};

TransportSides transport_sides(const MeasurableFn& f, const MeasureSpace& space, const Transformation& phi);
/// Throws consistency_error if the two sides differ.
ExtValue transport_integral(const MeasurableFn& f, const MeasureSpace& space, const Transformation& phi);

/// h_{phi^n} for n = 0 .. n_max + 1, computed once for a nonsingular phi.
class DerivativeTable {
public:
    DerivativeTable(MeasureSpace space, Transformation phi, unsigned n_max);

    const MeasureSpace& space() const { return space_; }
    const Transformation& phi() const { return phi_; }
    unsigned n_max() const { return n_max_; }

    /// Valid for n <= n_max + 1.
    const MeasurableFn& h_power(unsigned n) const { return table_.at(n); }
    const MeasurableFn& h() const { return table_.at(1); }
    const MeasurableFn& h_after_phi() const { return h_after_phi_; }

    bool densely_defined() const { return !infinite_at_; }
    const std::optional<AtomId>& infinite_at() const { return infinite_at_; }

    /// conditional_expectation on this table's space and map.
    MeasurableFn expectation(const MeasurableFn& f) const;
    MeasurableFn after_phi(const MeasurableFn& f) const { return compose(f, space_, phi_); }

private:
    MeasureSpace space_;
    Transformation phi_;
    unsigned n_max_;
    std::vector<MeasurableFn> table_;
    MeasurableFn h_after_phi_;
    std::optional<AtomId> infinite_at_;
};

} // namespace qnc
