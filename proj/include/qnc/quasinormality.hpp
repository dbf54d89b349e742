#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnc/derivatives.hpp"

namespace qnc {

enum class Condition { i, ii, iii, iv, v, vi };

std::string_view condition_tag(Condition c);

/// A concrete violation: at `atom`, lhs != rhs. `sigma` is the singleton {sigma} used by
/// the Borel quantifier, `n` the power, `clause` names which identity of a condition failed.
struct Witness {
    AtomId atom;
    std::optional<ExtValue> sigma;
    std::optional<unsigned> n;
    std::string clause;
    ExtValue lhs;
    ExtValue rhs;
};

struct ConditionVerdict {
    Condition tag = Condition::i;
    bool holds = true;
    std::optional<Witness> witness;
    std::optional<unsigned> n_max;
};

/// h_phi = h_phi o phi a.e. Requires dense definedness.
ConditionVerdict check_i_quasinormal(const DerivativeTable& table);
/// chi_s(h o phi) * chi_s(h) = chi_s(h o phi) for every attained-value singleton s.
ConditionVerdict check_ii(const DerivativeTable& table);
/// E(chi_s(h)) = chi_s(h o phi) for every attained-value singleton s.
ConditionVerdict check_iii(const DerivativeTable& table);

/// Borel function on [0, inf) used to probe condition (iv): t^p or a simple function.
struct Probe {
    std::string name;
    std::optional<unsigned> monomial;
    ValueTable table;
    ExtValue otherwise;

    static Probe power(unsigned p);
    static Probe indicator(const ExtValue& v);
    static Probe simple(std::string name, ValueTable table, ExtValue otherwise);

    MeasurableFn apply(const MeasurableFn& f, const MeasureSpace& space) const;
};

/// Singleton indicators of every attained value, plus t and t^2.
std::vector<Probe> default_probes(const std::vector<ExtValue>& values);

struct ProbeOutcome {
    std::string probe;
    bool holds = true;
    std::optional<Witness> witness;
};

struct IvVerdict {
    ConditionVerdict verdict;
    std::vector<ProbeOutcome> probes;
    /// False only if (iii) holds and some probe fails.
    bool redundancy_consistent = true;
};

/// Verdict of (iii), plus E(f o h) = f o h o phi checked for every probe.
IvVerdict check_iv(const DerivativeTable& table, const std::vector<Probe>& probes);
IvVerdict check_iv(const DerivativeTable& table);

/// h_{phi^n} = h_phi^n for n = 0 .. n_max. Needs only nonsingularity.
ConditionVerdict check_v(const DerivativeTable& table);
/// E(h) = h o phi and E(h_{phi^n}) = E(h)^n for n = 0 .. n_max.
ConditionVerdict check_vi(const DerivativeTable& table);

struct LemmaVerdict {
    unsigned n = 1;
    bool semigroup = true;   // h_{phi^{n+1}} = h_{phi^n} h_phi
    bool expectation = true; // E(h_{phi^n}) = h_{phi^n} o phi
    std::optional<Witness> semigroup_witness;
    std::optional<Witness> expectation_witness;

    bool agree() const { return semigroup == expectation; }
};

/// Requires h_phi < inf a.e. and n + 1 <= table.n_max() + 1.
LemmaVerdict check_lemma_hf2(const DerivativeTable& table, unsigned n);

ConditionVerdict check_i_quasinormal(const MeasureSpace& space, const Transformation& phi);
ConditionVerdict check_v(const MeasureSpace& space, const Transformation& phi, unsigned n_max);

} // namespace qnc
