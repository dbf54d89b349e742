#include "qnc/derivatives.hpp"

#include "qnc/errors.hpp"

namespace qnc {

namespace {

void require_nonsingular(const MeasureSpace& space, const Transformation& phi)
{
    auto v = check_nonsingular(space, phi);
    if (!v.holds)
        throw precondition_error("phi is singular: null atom " + space.name(*v.witness) + " has a fiber of positive measure");
}

// Radon-Nikodym derivative of an already-iterated map.
MeasurableFn density_of(const MeasureSpace& space, const Transformation& psi)
{
    std::vector<ExtValue> values(space.explicit_count());
    for (std::size_t i = 0; i < space.explicit_count(); ++i) {
        const Rational& w = space.atom(i).weight;
        if (sgn(w) > 0)
            values[i] = fiber_measure(space, psi, AtomId::explicit_atom(i)) / ExtValue(w);
    }
    std::vector<TailRule> tails;
    tails.reserve(space.family_count());
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        if (const auto* s = std::get_if<ShiftRule>(&psi.rule(j)))
            // fiber of member m is {m + k}: w(m + k) / w(m) = ratio^k
            tails.push_back(TailRule::constant(ExtValue(rational_pow(space.family(j).ratio, s->k))));
        else
            tails.push_back(TailRule::constant(ExtValue(0)));
    }
    return MeasurableFn(std::move(values), std::move(tails));
}

void require_finite_fibers(const MeasureSpace& space, const Transformation& phi)
{
    auto dense = densely_defined(space, phi);
    if (!dense.holds)
        throw precondition_error("conditional expectation undefined: mu restricted to phi^-1(A) is not sigma-finite (fiber of "
                                 + space.name(*dense.witness) + " has infinite measure)");
}

} // namespace

MeasurableFn radon_nikodym(const MeasureSpace& space, const Transformation& phi, unsigned n)
{
    require_nonsingular(space, phi);
    return density_of(space, phi.power(n));
}

DensityVerdict densely_defined(const MeasureSpace& space, const Transformation& phi)
{
    auto at = find_infinite(radon_nikodym(space, phi, 1), space);
    return {!at.has_value(), at};
}

BoundednessVerdict bounded(const MeasureSpace& space, const Transformation& phi)
{
    ExtValue sup = essential_sup(radon_nikodym(space, phi, 1), space);
    return {sup.is_finite(), sup};
}

namespace {

// Caller guarantees nonsingularity and finite fibers.
MeasurableFn expectation_unchecked(const MeasurableFn& f, const MeasureSpace& space, const Transformation& phi)
{
    // Average of f over the fiber of each explicit atom; null fibers get 0.
    std::vector<ExtValue> average(space.explicit_count());
    for (std::size_t z = 0; z < space.explicit_count(); ++z) {
        AtomSet fib = fiber(space, phi, AtomId::explicit_atom(z));
        ExtValue mass = measure(space, fib);
        if (!mass.is_zero())
            average[z] = integrate(f, space, fib) / mass;
    }

    std::vector<ExtValue> values(space.explicit_count());
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        values[i] = average[phi.apply_explicit(i)];

    std::vector<TailRule> tails;
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        if (const auto* fan = std::get_if<FanInRule>(&phi.rule(j))) {
            tails.push_back(TailRule::constant(average[fan->target]));
            continue;
        }
        // Members past the boundary form singleton fibers, where E(f) = f.
        const auto& shift = std::get<ShiftRule>(phi.rule(j));
        const Index start = space.family(j).start;
        TailRule t = f.tail(j);
        for (std::size_t b = 0; b < shift.into.size(); ++b)
            t.exceptions[start + static_cast<Index>(b)] = average[shift.into[b]];
        t.normalize();
        tails.push_back(std::move(t));
    }
    return MeasurableFn(std::move(values), std::move(tails));
}

} // namespace

MeasurableFn conditional_expectation(const MeasurableFn& f, const MeasureSpace& space, const Transformation& phi)
{
    require_nonsingular(space, phi);
    require_finite_fibers(space, phi);
    return expectation_unchecked(f, space, phi);
}

std::vector<AveragingCheck> expectation_diagnostics(const MeasurableFn& f, const MeasureSpace& space,
                                                    const Transformation& phi)
{
    const MeasurableFn e = conditional_expectation(f, space, phi);
    std::vector<AveragingCheck> out;
    auto add = [&](std::string label, const AtomSet& delta) {
        AtomSet pre = preimage(space, phi, delta);
        out.push_back({std::move(label), integrate(f, space, pre), integrate(e, space, pre)});
    };
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        add("{" + space.atom(i).id + "}", AtomSet::singleton(AtomId::explicit_atom(i)));
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const TailFamily& fam = space.family(j);
        add(fam.id + "[n>=" + std::to_string(fam.start) + "]", AtomSet::family_tail(j, fam.start));
    }
    return out;
}

TransportSides transport_sides(const MeasurableFn& f, const MeasureSpace& space, const Transformation& phi)
{
    const MeasurableFn h = radon_nikodym(space, phi, 1);
    return {integrate(compose(f, space, phi), space), integrate(product(f, h), space)};
}

ExtValue transport_integral(const MeasurableFn& f, const MeasureSpace& space, const Transformation& phi)
{
    auto sides = transport_sides(f, space, phi);
    if (sides.composed != sides.weighted)
        throw consistency_error("measure transport identity violated: " + sides.composed.str() + " vs " + sides.weighted.str());
    return sides.composed;
}

DerivativeTable::DerivativeTable(MeasureSpace space, Transformation phi, unsigned n_max)
    : space_(std::move(space)), phi_(std::move(phi)), n_max_(n_max)
{
    require_nonsingular(space_, phi_);
    Transformation iterate = Transformation::identity(space_);
    table_.reserve(n_max_ + 2);
    for (unsigned n = 0; n <= n_max_ + 1; ++n) {
        table_.push_back(density_of(space_, iterate));
        iterate = phi_.after(iterate);
    }
    h_after_phi_ = compose(h(), space_, phi_);
    infinite_at_ = find_infinite(h(), space_);
}

MeasurableFn DerivativeTable::expectation(const MeasurableFn& f) const
{
    if (infinite_at_)
        throw precondition_error("conditional expectation undefined: mu restricted to phi^-1(A) is not sigma-finite (fiber of "
                                 + space_.name(*infinite_at_) + " has infinite measure)");
    return expectation_unchecked(f, space_, phi_);
}

} // namespace qnc
