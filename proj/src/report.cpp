#include "qnc/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "qnc/errors.hpp"

namespace qnc {

const ConditionOutcome& AnalysisReport::condition(Condition c) const
{
    for (const auto& o : conditions)
        if (o.tag == c)
            return o;
    throw input_error("condition not in report");
}

namespace {

template <typename Fn>
std::string capture(Fn fn)
{
    try {
        fn();
    } catch (const precondition_error& e) {
        return e.what();
    } catch (const representation_error& e) {
        return std::string("not representable: ") + e.what();
    } catch (const arithmetic_error& e) {
        return std::string("arithmetic: ") + e.what();
    }
    return {};
}

void run_conditions(AnalysisReport& r, const DerivativeTable& table)
{
    const Condition order[] = {Condition::i, Condition::ii, Condition::iii, Condition::iv, Condition::v, Condition::vi};
    for (Condition c : order) {
        ConditionOutcome o;
        o.tag = c;
        o.error = capture([&] {
            switch (c) {
            case Condition::i: o.verdict = check_i_quasinormal(table); break;
            case Condition::ii: o.verdict = check_ii(table); break;
            case Condition::iii: o.verdict = check_iii(table); break;
            case Condition::iv: {
                IvVerdict iv = check_iv(table);
                o.verdict = iv.verdict;
                r.probes = std::move(iv.probes);
                if (!iv.redundancy_consistent)
                    r.inconsistencies.push_back("(iii) holds but a (iv) probe fails");
                break;
            }
            case Condition::v: o.verdict = check_v(table); break;
            case Condition::vi: o.verdict = check_vi(table); break;
            }
        });
        r.conditions.push_back(std::move(o));
    }
}

void run_families(AnalysisReport& r, const DerivativeTable& table, const ReportOptions& options)
{
    std::vector<std::pair<std::string, std::optional<ProbabilityFamily>>> todo;
    std::vector<std::string> build_errors;
    for (auto variant : {CanonicalVariant::precomposed, CanonicalVariant::plain}) {
        const std::string name = variant == CanonicalVariant::plain ? "canonical-plain" : "canonical-precomposed";
        std::optional<ProbabilityFamily> fam;
        std::string err = capture([&] { fam = canonical_family(table, variant); });
        if (!fam) {
            FamilyOutcome o;
            o.name = name;
            o.cc_error = err;
            r.families.push_back(std::move(o));
            continue;
        }
        todo.emplace_back(name, std::move(fam));
    }
    for (const auto& [name, fam] : options.families)
        todo.emplace_back(name, fam);

    for (auto& [name, fam] : todo) {
        FamilyOutcome o;
        o.name = name;
        o.cc_error = capture([&] { o.cc = check_cc(*fam, table); });
        if (o.cc && o.cc->holds)
            o.sms_error = capture([&] { o.sms = check_sms(*fam, table); });
        else
            o.sms_error = "skipped: consistency condition not established";
        if (table.space().is_finite())
            o.hankel = hankel_psd(*fam, r.n_max);
        r.families.push_back(std::move(o));
    }
}

void run_oracle(AnalysisReport& r, const ReportOptions& options, const MeasurableFn& h)
{
    const MeasureSpace& space = r.instance.space;
    if (!space.is_finite()) {
        r.oracle_error = "oracle is finite-only";
        return;
    }
    OperatorMatrix a = build_matrix(space, r.instance.phi);
    OperatorMatrix adj = weighted_adjoint(a);
    OracleOutcome o;
    o.quasinormal = oracle_quasinormal(a);
    const RationalMatrix gram = adj.entries * a.entries;
    std::vector<Rational> diag;
    for (std::size_t slot : a.atoms)
        diag.push_back(h.explicit_values()[slot].finite());
    o.adjoint_product_is_h = gram == RationalMatrix::diagonal(diag);
    o.pairing = is_weighted_adjoint(a, adj) && weighted_adjoint(adj).entries == a.entries;
    o.polar = oracle_polar_crosscheck(a, options.tolerance);
    if (options.dump_matrices)
        o.dump = dump_matrix("A", a.entries) + dump_matrix("A*", adj.entries) + dump_matrix("A*A", gram);
    r.oracle = std::move(o);
}

void check_consistency(AnalysisReport& r)
{
    if (!r.standing_hypothesis) {
        r.decided_by = "standing hypothesis fails (C_phi not densely defined); equivalence not asserted";
        return;
    }
    const auto& first = r.condition(Condition::i);
    if (!first.verdict) {
        r.inconsistencies.push_back("condition (i) not decided: " + first.error);
    } else {
        for (const auto& o : r.conditions) {
            if (!o.verdict)
                r.inconsistencies.push_back("condition (" + std::string(condition_tag(o.tag)) + ") not decided: " + o.error);
            else if (o.verdict->holds != first.verdict->holds)
                r.inconsistencies.push_back("condition (" + std::string(condition_tag(o.tag)) + ") disagrees with (i)");
        }
    }
    if (!r.lemma_error.empty())
        r.inconsistencies.push_back("lemma not decided: " + r.lemma_error);
    for (const auto& l : r.lemma)
        if (!l.agree())
            r.inconsistencies.push_back("lemma pair disagrees at n=" + std::to_string(l.n));
    if (r.oracle && first.verdict) {
        if (r.oracle->quasinormal != first.verdict->holds)
            r.inconsistencies.push_back("matrix oracle disagrees with (i)");
        if (!r.oracle->adjoint_product_is_h)
            r.inconsistencies.push_back("A*A is not diag(h_phi)");
        if (!r.oracle->pairing)
            r.inconsistencies.push_back("weighted adjoint fails the pairing identity");
        if (!r.oracle->polar.agrees && !r.oracle->polar.ill_conditioned)
            r.inconsistencies.push_back("numeric polar decomposition disagrees with the exact oracle");
    }
    if (first.verdict) {
        for (const auto& f : r.families) {
            if (f.name == "canonical-precomposed" && first.verdict->holds
                && !(f.cc && f.cc->holds && f.sms && f.sms->holds))
                r.inconsistencies.push_back("quasinormal but the precomposed canonical family fails (CC) or the moment identity");
            if (f.name == "canonical-plain" && !first.verdict->holds && !(f.cc && !f.cc->holds && f.cc->witness))
                r.inconsistencies.push_back("not quasinormal but the plain canonical family satisfies (CC)");
            if (f.hankel && !*f.hankel)
                r.inconsistencies.push_back("family " + f.name + " has a non-PSD Hankel moment matrix");
        }
    }
    r.equivalence_consistent = r.inconsistencies.empty();
    r.decided_by = "condition (i) via h_phi = h_phi o phi (exact)";
    if (r.oracle)
        r.decided_by += ", confirmed by the matrix oracle";
    r.decided_by += "; (v) and (vi) checked for n <= " + std::to_string(r.n_max);
}

} // namespace

AnalysisReport full_report(const Instance& instance, const ReportOptions& options)
{
    AnalysisReport r(instance, options.n_max);
    auto ns = check_nonsingular(instance.space, instance.phi);
    r.flags.nonsingular = ns.holds;
    r.flags.singular_at = ns.witness;
    if (!ns.holds) {
        r.decided_by = "phi is singular; no derivative exists";
        return r;
    }
    const DerivativeTable table(instance.space, instance.phi, options.n_max);
    r.flags.densely_defined = table.densely_defined();
    r.flags.infinite_at = table.infinite_at();
    r.flags.sup = essential_sup(table.h(), instance.space);
    r.flags.bounded = r.flags.sup.is_finite();
    for (unsigned n = 0; n <= options.n_max; ++n)
        r.derivatives.push_back(table.h_power(n));
    r.standing_hypothesis = r.flags.densely_defined;

    run_conditions(r, table);
    r.lemma_error = capture([&] {
        for (unsigned n = 1; n <= options.n_max; ++n)
            r.lemma.push_back(check_lemma_hf2(table, n));
    });
    if (instance.space.is_finite())
        run_oracle(r, options, table.h());
    else
        r.oracle_error = "oracle is finite-only";
    run_families(r, table, options);
    check_consistency(r);
    return r;
}

std::string render_witness(const std::optional<Witness>& w, const MeasureSpace& space)
{
    if (!w)
        return "none";
    std::ostringstream os;
    os << "atom:" << space.name(w->atom);
    if (w->sigma)
        os << ";sigma:{" << *w->sigma << '}';
    if (w->n)
        os << ";n:" << *w->n;
    os << ";lhs:" << w->lhs << ";rhs:" << w->rhs;
    if (!w->clause.empty())
        os << ";clause:" << w->clause;
    return os.str();
}

namespace {

std::string bool_str(bool b)
{
    return b ? "true" : "false";
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

} // namespace

std::string render_report(const AnalysisReport& r)
{
    const MeasureSpace& space = r.instance.space;
    std::ostringstream os;
    os << "instance " << r.instance.name << '\n';
    os << "space explicit_atoms=" << space.explicit_count() << " families=" << space.family_count()
       << " finite=" << bool_str(space.is_finite()) << " nmax=" << r.n_max << '\n';
    os << "hypothesis nonsingular=" << bool_str(r.flags.nonsingular);
    if (r.flags.singular_at)
        os << " witness=" << space.name(*r.flags.singular_at);
    os << '\n';
    if (!r.flags.nonsingular) {
        os << "decided_by " << r.decided_by << '\n';
        return os.str();
    }
    os << "hypothesis densely_defined=" << bool_str(r.flags.densely_defined);
    if (r.flags.infinite_at)
        os << " witness=" << space.name(*r.flags.infinite_at);
    os << '\n';
    os << "hypothesis bounded=" << bool_str(r.flags.bounded) << " sup=" << r.flags.sup << '\n';
    for (std::size_t n = 0; n < r.derivatives.size(); ++n)
        os << "derivative n=" << n << ' ' << describe(r.derivatives[n], space) << '\n';
    for (const auto& c : r.conditions) {
        os << "condition " << condition_tag(c.tag);
        if (c.verdict) {
            os << " holds=" << bool_str(c.verdict->holds) << " witness=" << render_witness(c.verdict->witness, space);
            if (c.verdict->n_max)
                os << " nmax=" << *c.verdict->n_max;
        } else {
            os << " error=\"" << c.error << '"';
        }
        os << '\n';
    }
    for (const auto& p : r.probes)
        os << "probe iv f=" << p.probe << " holds=" << bool_str(p.holds) << " witness=" << render_witness(p.witness, space)
           << '\n';
    if (!r.lemma_error.empty())
        os << "lemma error=\"" << r.lemma_error << "\"\n";
    for (const auto& l : r.lemma)
        os << "lemma n=" << l.n << " semigroup=" << bool_str(l.semigroup) << " expectation=" << bool_str(l.expectation)
           << " agree=" << bool_str(l.agree()) << '\n';
    if (r.oracle) {
        const auto& o = *r.oracle;
        os << "oracle quasinormal=" << bool_str(o.quasinormal) << " adjoint_product_is_h=" << bool_str(o.adjoint_product_is_h)
           << " pairing=" << bool_str(o.pairing) << " polar_residual=" << sci(o.polar.residual)
           << " polar_commutes=" << bool_str(o.polar.commutes) << " polar_agrees=" << bool_str(o.polar.agrees)
           << " polar_ill_conditioned=" << bool_str(o.polar.ill_conditioned) << '\n';
        os << o.dump;
    } else {
        os << "oracle skipped=\"" << r.oracle_error << "\"\n";
    }
    for (const auto& f : r.families) {
        os << "family " << f.name;
        if (f.cc)
            os << " cc=" << bool_str(f.cc->holds) << " witness=" << render_witness(f.cc->witness, space);
        else
            os << " cc_error=\"" << f.cc_error << '"';
        if (f.sms)
            os << " sms=" << bool_str(f.sms->holds) << " sms_witness=" << render_witness(f.sms->witness, space);
        else
            os << " sms_error=\"" << f.sms_error << '"';
        if (f.hankel)
            os << " hankel_psd=" << bool_str(*f.hankel);
        os << '\n';
    }
    os << "equivalence standing_hypothesis=" << bool_str(r.standing_hypothesis)
       << " asserted=" << bool_str(r.standing_hypothesis) << " consistent=" << bool_str(r.equivalence_consistent) << '\n';
    for (const auto& msg : r.inconsistencies)
        os << "inconsistency " << msg << '\n';
    os << "decided_by " << r.decided_by << '\n';
    return os.str();
}

namespace {

nlohmann::json witness_json(const std::optional<Witness>& w, const MeasureSpace& space)
{
    if (!w)
        return nullptr;
    nlohmann::json j{{"atom", space.name(w->atom)}, {"lhs", w->lhs.str()}, {"rhs", w->rhs.str()}, {"clause", w->clause}};
    if (w->sigma)
        j["sigma"] = w->sigma->str();
    if (w->n)
        j["n"] = *w->n;
    return j;
}

} // namespace

std::string render_report_json(const AnalysisReport& r)
{
    const MeasureSpace& space = r.instance.space;
    nlohmann::json j;
    j["instance"] = r.instance.name;
    j["nmax"] = r.n_max;
    j["hypothesis"] = {{"nonsingular", r.flags.nonsingular},
                       {"densely_defined", r.flags.densely_defined},
                       {"bounded", r.flags.bounded},
                       {"sup", r.flags.sup.str()}};
    if (r.flags.infinite_at)
        j["hypothesis"]["densely_defined_witness"] = space.name(*r.flags.infinite_at);
    for (std::size_t n = 0; n < r.derivatives.size(); ++n)
        j["derivatives"].push_back(describe(r.derivatives[n], space));
    for (const auto& c : r.conditions) {
        nlohmann::json cj{{"tag", condition_tag(c.tag)}};
        if (c.verdict) {
            cj["holds"] = c.verdict->holds;
            cj["witness"] = witness_json(c.verdict->witness, space);
        } else {
            cj["error"] = c.error;
        }
        j["conditions"].push_back(cj);
    }
    for (const auto& p : r.probes)
        j["probes"].push_back({{"f", p.probe}, {"holds", p.holds}, {"witness", witness_json(p.witness, space)}});
    for (const auto& l : r.lemma)
        j["lemma"].push_back({{"n", l.n}, {"semigroup", l.semigroup}, {"expectation", l.expectation}, {"agree", l.agree()}});
    if (r.oracle)
        j["oracle"] = {{"quasinormal", r.oracle->quasinormal},
                       {"adjoint_product_is_h", r.oracle->adjoint_product_is_h},
                       {"pairing", r.oracle->pairing},
                       {"polar_residual", r.oracle->polar.residual},
                       {"polar_agrees", r.oracle->polar.agrees}};
    for (const auto& f : r.families) {
        nlohmann::json fj{{"name", f.name}};
        if (f.cc) {
            fj["cc"] = f.cc->holds;
            fj["cc_witness"] = witness_json(f.cc->witness, space);
        } else {
            fj["cc_error"] = f.cc_error;
        }
        if (f.sms)
            fj["sms"] = f.sms->holds;
        j["families"].push_back(fj);
    }
    j["standing_hypothesis"] = r.standing_hypothesis;
    j["equivalence_consistent"] = r.equivalence_consistent;
    j["inconsistencies"] = r.inconsistencies;
    j["decided_by"] = r.decided_by;
    return j.dump(2) + "\n";
}

std::string render_remark(const AnalysisReport& r)
{
    const MeasureSpace& space = r.instance.space;
    std::ostringstream os;
    os << "remark X=Z+ counting measure, phi(x)=0 for every x; point n>=1 is member x[n]\n";
    const AtomId zero = AtomId::explicit_atom(0);
    auto label = [](unsigned n) { return n == 1 ? std::string("h_phi") : "h_phi^" + std::to_string(n); };
    for (unsigned n = 1; n < r.derivatives.size(); ++n) {
        const MeasurableFn& hn = r.derivatives[n];
        os << label(n) << "(0)=" << hn(zero);
        for (Index k = 1; k <= 3; ++k)
            os << ' ' << label(n) << '(' << k << ")=" << hn(AtomId::family_member(0, k));
        const TailRule& tail = hn.tail(0);
        os << ' ' << label(n) << "(x)=" << tail.coeff << (tail.exceptions.empty() ? "" : "*") << " for x>=1\n";
    }
    const MeasurableFn& h = r.derivatives.at(1);
    for (unsigned n = 0; n < r.derivatives.size(); ++n) {
        const MeasurableFn hn_pow = power(h, n);
        const bool pointwise = r.derivatives[n] == hn_pow;
        os << "multiplicative n=" << n << " h_phi^" << n << "(0)=" << r.derivatives[n](zero) << " h_phi(0)^" << n << '='
           << hn_pow(zero) << " h_phi^" << n << "(x)=" << r.derivatives[n].tail(0).coeff << " h_phi(x)^" << n << '='
           << hn_pow.tail(0).coeff << " for x>=1 pointwise=" << bool_str(pointwise) << '\n';
    }
    const MeasurableFn after = compose(h, space, r.instance.phi);
    os << "h_phi(phi(0))=" << after(zero) << " h_phi(phi(x))=" << after.tail(0).coeff << " for x>=1\n";
    os << "densely_defined=" << bool_str(r.flags.densely_defined);
    if (r.flags.infinite_at)
        os << " witness=" << space.name(*r.flags.infinite_at);
    os << '\n';
    const auto& v = r.condition(Condition::v);
    if (v.verdict)
        os << "check_v holds=" << bool_str(v.verdict->holds) << " nmax=" << r.n_max << '\n';
    else
        os << "check_v error=\"" << v.error << "\"\n";
    const auto& i = r.condition(Condition::i);
    os << "check_i " << (i.verdict ? "holds=" + bool_str(i.verdict->holds) : "error=\"" + i.error + '"') << '\n';
    os << "h_phi=h_phi o phi a.e.: " << bool_str(static_cast<bool>(ae_equal(h, after, space))) << '\n';
    os << "equivalence asserted=" << bool_str(r.standing_hypothesis) << '\n';
    os << "--\n" << render_report(r);
    return os.str();
}

} // namespace qnc
