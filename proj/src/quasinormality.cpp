#include "qnc/quasinormality.hpp"

#include "qnc/errors.hpp"

namespace qnc {

std::string_view condition_tag(Condition c)
{
    switch (c) {
    case Condition::i: return "i";
    case Condition::ii: return "ii";
    case Condition::iii: return "iii";
    case Condition::iv: return "iv";
    case Condition::v: return "v";
    case Condition::vi: return "vi";
    }
    return "?";
}

namespace {

void require_dense(const DerivativeTable& t)
{
    if (!t.densely_defined())
        throw precondition_error("C_phi is not densely defined: h_phi(" + t.space().name(*t.infinite_at()) + ")=inf");
}

// Compares lhs and rhs a.e.; on failure fills a witness.
std::optional<Witness> compare(const MeasurableFn& lhs, const MeasurableFn& rhs, const MeasureSpace& space,
                               std::string clause = {}, std::optional<ExtValue> sigma = {},
                               std::optional<unsigned> n = {})
{
    auto cmp = ae_equal(lhs, rhs, space);
    if (cmp)
        return std::nullopt;
    const AtomId x = *cmp.witness;
    return Witness{x, std::move(sigma), n, std::move(clause), lhs(x), rhs(x)};
}

ConditionVerdict verdict(Condition tag, std::optional<Witness> w, std::optional<unsigned> n_max = {})
{
    ConditionVerdict v;
    v.tag = tag;
    v.holds = !w.has_value();
    v.witness = std::move(w);
    v.n_max = n_max;
    return v;
}

std::vector<ExtValue> h_values(const DerivativeTable& t)
{
    return attained_values(t.h(), t.space());
}

} // namespace

ConditionVerdict check_i_quasinormal(const DerivativeTable& t)
{
    require_dense(t);
    return verdict(Condition::i, compare(t.h(), t.h_after_phi(), t.space(), "h=h(phi)"));
}

ConditionVerdict check_ii(const DerivativeTable& t)
{
    require_dense(t);
    const auto& space = t.space();
    for (const ExtValue& v : h_values(t)) {
        MeasurableFn after = indicator_of_value(t.h_after_phi(), space, v);
        MeasurableFn here = indicator_of_value(t.h(), space, v);
        if (auto w = compare(product(after, here), after, space, "chi(h(phi))*chi(h)=chi(h(phi))", v))
            return verdict(Condition::ii, std::move(w));
    }
    return verdict(Condition::ii, std::nullopt);
}

ConditionVerdict check_iii(const DerivativeTable& t)
{
    require_dense(t);
    const auto& space = t.space();
    for (const ExtValue& v : h_values(t)) {
        MeasurableFn lhs = t.expectation(indicator_of_value(t.h(), space, v));
        MeasurableFn rhs = indicator_of_value(t.h_after_phi(), space, v);
        if (auto w = compare(lhs, rhs, space, "E(chi(h))=chi(h(phi))", v))
            return verdict(Condition::iii, std::move(w));
    }
    return verdict(Condition::iii, std::nullopt);
}

Probe Probe::power(unsigned p)
{
    Probe out;
    out.name = p == 1 ? "t" : "t^" + std::to_string(p);
    out.monomial = p;
    return out;
}

Probe Probe::indicator(const ExtValue& v)
{
    return simple("chi{" + v.str() + "}", {{v, ExtValue(1)}}, ExtValue(0));
}

Probe Probe::simple(std::string name, ValueTable table, ExtValue otherwise)
{
    Probe out;
    out.name = std::move(name);
    out.table = std::move(table);
    out.otherwise = std::move(otherwise);
    return out;
}

MeasurableFn Probe::apply(const MeasurableFn& f, const MeasureSpace& space) const
{
    if (monomial)
        return qnc::power(f, *monomial);
    return map_values(f, space, table, otherwise);
}

std::vector<Probe> default_probes(const std::vector<ExtValue>& values)
{
    std::vector<Probe> out;
    for (const auto& v : values)
        out.push_back(Probe::indicator(v));
    out.push_back(Probe::power(1));
    out.push_back(Probe::power(2));
    return out;
}

IvVerdict check_iv(const DerivativeTable& t, const std::vector<Probe>& probes)
{
    IvVerdict out;
    ConditionVerdict iii = check_iii(t);
    out.verdict = iii;
    out.verdict.tag = Condition::iv;
    const auto& space = t.space();
    for (const Probe& p : probes) {
        MeasurableFn lhs = t.expectation(p.apply(t.h(), space));
        MeasurableFn rhs = p.apply(t.h_after_phi(), space);
        auto w = compare(lhs, rhs, space, "E(f(h))=f(h(phi)),f=" + p.name);
        out.probes.push_back({p.name, !w.has_value(), w});
        if (w && iii.holds)
            out.redundancy_consistent = false;
    }
    return out;
}

IvVerdict check_iv(const DerivativeTable& t)
{
    require_dense(t);
    return check_iv(t, default_probes(h_values(t)));
}

ConditionVerdict check_v(const DerivativeTable& t)
{
    for (unsigned n = 0; n <= t.n_max(); ++n) {
        if (auto w = compare(t.h_power(n), power(t.h(), n), t.space(), "h_phi^n=h^n", std::nullopt, n))
            return verdict(Condition::v, std::move(w), t.n_max());
    }
    return verdict(Condition::v, std::nullopt, t.n_max());
}

ConditionVerdict check_vi(const DerivativeTable& t)
{
    require_dense(t);
    const auto& space = t.space();
    const MeasurableFn eh = t.expectation(t.h());
    if (auto w = compare(eh, t.h_after_phi(), space, "E(h)=h(phi)"))
        return verdict(Condition::vi, std::move(w), t.n_max());
    for (unsigned n = 0; n <= t.n_max(); ++n) {
        if (auto w = compare(t.expectation(t.h_power(n)), power(eh, n), space, "E(h_phi^n)=E(h)^n", std::nullopt, n))
            return verdict(Condition::vi, std::move(w), t.n_max());
    }
    return verdict(Condition::vi, std::nullopt, t.n_max());
}

LemmaVerdict check_lemma_hf2(const DerivativeTable& t, unsigned n)
{
    require_dense(t);
    if (n + 1 > t.n_max() + 1)
        throw input_error("lemma check at n=" + std::to_string(n) + " exceeds the derivative table");
    const auto& space = t.space();
    LemmaVerdict out;
    out.n = n;
    out.semigroup_witness = compare(t.h_power(n + 1), product(t.h_power(n), t.h()), space,
                                    "h_phi^(n+1)=h_phi^n*h", std::nullopt, n);
    out.expectation_witness = compare(t.expectation(t.h_power(n)), t.after_phi(t.h_power(n)), space,
                                      "E(h_phi^n)=h_phi^n(phi)", std::nullopt, n);
    out.semigroup = !out.semigroup_witness;
    out.expectation = !out.expectation_witness;
    return out;
}

ConditionVerdict check_i_quasinormal(const MeasureSpace& space, const Transformation& phi)
{
    return check_i_quasinormal(DerivativeTable(space, phi, 1));
}

ConditionVerdict check_v(const MeasureSpace& space, const Transformation& phi, unsigned n_max)
{
    return check_v(DerivativeTable(space, phi, n_max));
}

} // namespace qnc
