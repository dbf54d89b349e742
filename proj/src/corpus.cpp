#include "qnc/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "qnc/errors.hpp"
#include "qnc/report.hpp"
#include "qnc/space_io.hpp"

namespace qnc {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

std::size_t pick(std::mt19937_64& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::vector<ExplicitAtom> atoms_from(const std::vector<Rational>& w)
{
    std::vector<ExplicitAtom> atoms;
    for (std::size_t i = 0; i < w.size(); ++i)
        atoms.push_back({std::to_string(i), w[i]});
    return atoms;
}

// Instance `index` of the exhaustive enumeration, in order of size, then weights, then maps.
Instance exhaustive_instance(std::size_t index, unsigned max_atoms, const std::vector<Rational>& weights)
{
    const std::size_t k = weights.size();
    for (unsigned d = 1; d <= max_atoms; ++d) {
        std::size_t weight_vectors = 1, maps = 1;
        for (unsigned i = 0; i < d; ++i) {
            weight_vectors *= k;
            maps *= d;
        }
        if (index >= weight_vectors * maps) {
            index -= weight_vectors * maps;
            continue;
        }
        std::size_t wi = index / maps, mi = index % maps;
        std::vector<Rational> w(d);
        std::vector<std::size_t> map(d);
        for (unsigned i = 0; i < d; ++i) {
            w[i] = weights[wi % k];
            wi /= k;
            map[i] = mi % d;
            mi /= d;
        }
        MeasureSpace space(atoms_from(w));
        Transformation phi(space, map);
        std::string name = "exhaustive-d" + std::to_string(d);
        for (std::size_t t : map)
            name += std::to_string(t);
        return {name, space, phi};
    }
    throw input_error("exhaustive index out of range");
}

// Independent finite-space arithmetic used to re-evaluate witnesses.
struct Brute {
    const MeasureSpace& space;
    const std::vector<std::size_t>& map;

    std::size_t image(std::size_t x, unsigned n) const
    {
        for (unsigned i = 0; i < n; ++i)
            x = map[x];
        return x;
    }
    Rational w(std::size_t x) const { return space.atom(x).weight; }
    Rational h(std::size_t x, unsigned n = 1) const
    {
        if (sgn(w(x)) == 0)
            return 0;
        Rational s = 0;
        for (std::size_t y = 0; y < map.size(); ++y)
            if (image(y, n) == x)
                s += w(y);
        return s / w(x);
    }
    template <typename F>
    Rational expectation(F f, std::size_t x) const
    {
        Rational num = 0, den = 0;
        for (std::size_t y = 0; y < map.size(); ++y)
            if (map[y] == map[x]) {
                num += f(y) * w(y);
                den += w(y);
            }
        return sgn(den) == 0 ? Rational(0) : Rational(num / den);
    }
};

Rational rpow(const Rational& r, unsigned n)
{
    Rational out = 1;
    for (unsigned i = 0; i < n; ++i)
        out *= r;
    return out;
}

// Recomputes both sides of a witness from scratch; nullopt when the clause is not known.
std::optional<std::pair<Rational, Rational>> reevaluate(const Brute& b, const Witness& wit)
{
    const std::size_t x = wit.atom.slot;
    const std::size_t px = b.map[x];
    const unsigned n = wit.n.value_or(1);
    auto chi = [&](const Rational& v) { return Rational(wit.sigma && wit.sigma->finite() == v ? 1 : 0); };
    const std::string& c = wit.clause;
    if (c == "h=h(phi)")
        return std::pair{b.h(x), b.h(px)};
    if (c == "chi(h(phi))*chi(h)=chi(h(phi))")
        return std::pair{Rational(chi(b.h(px)) * chi(b.h(x))), chi(b.h(px))};
    if (c == "E(chi(h))=chi(h(phi))")
        return std::pair{b.expectation([&](std::size_t y) { return chi(b.h(y)); }, x), chi(b.h(px))};
    if (c == "h_phi^n=h^n")
        return std::pair{n == 0 ? Rational(1) : b.h(x, n), rpow(b.h(x), n)};
    if (c == "E(h)=h(phi)")
        return std::pair{b.expectation([&](std::size_t y) { return b.h(y); }, x), b.h(px)};
    if (c == "E(h_phi^n)=E(h)^n")
        return std::pair{b.expectation([&](std::size_t y) { return n == 0 ? Rational(1) : b.h(y, n); }, x),
                         rpow(b.expectation([&](std::size_t y) { return b.h(y); }, x), n)};
    return std::nullopt;
}

std::string witness_problem(const Instance& inst, const Witness& w)
{
    const MeasureSpace& space = inst.space;
    if (!space.contains(w.atom) || space.is_null(w.atom))
        return "witness atom is not a positive-weight atom";
    if (w.lhs == w.rhs)
        return "witness sides are equal";
    if (!space.is_finite() || w.atom.member)
        return {};
    if (w.lhs.is_infinite() || w.rhs.is_infinite())
        return "infinite value on a finite space";
    const Brute b{space, inst.phi.explicit_map()};
    auto again = reevaluate(b, w);
    if (!again)
        return {};
    if (again->first != w.lhs.finite() || again->second != w.rhs.finite())
        return "witness does not re-evaluate: clause " + w.clause;
    return {};
}

} // namespace

const char* property_name(Property p)
{
    switch (p) {
    case Property::equivalence: return "equivalence";
    case Property::lemma: return "lemma";
    case Property::oracle: return "oracle";
    case Property::adjoint: return "adjoint";
    case Property::consistency: return "consistency";
    case Property::hankel: return "hankel";
    case Property::structure: return "structure";
    case Property::numeric: return "numeric";
    case Property::transport: return "transport";
    case Property::witness: return "witness";
    case Property::round_trip: return "round_trip";
    case Property::count_: break;
    }
    return "?";
}

Instance generate_instance(std::uint64_t seed, unsigned min_atoms, unsigned max_atoms, const std::vector<Rational>& weights)
{
    if (min_atoms == 0 || min_atoms > max_atoms || weights.empty())
        throw input_error("generate: need 1 <= min atoms <= max atoms and a nonempty weight set");
    for (const auto& w : weights)
        if (sgn(w) <= 0)
            throw input_error("generate: weights must be positive");
    auto rng = stream(seed, 0);
    const unsigned d = min_atoms + static_cast<unsigned>(pick(rng, max_atoms - min_atoms + 1));
    std::vector<Rational> w(d);
    for (auto& x : w)
        x = weights[pick(rng, weights.size())];
    std::vector<std::size_t> map(d);
    for (auto& t : map)
        t = pick(rng, d);
    MeasureSpace space(atoms_from(w));
    Transformation phi(space, map);
    return {"random-" + std::to_string(seed), space, phi};
}

Instance generate_countable(std::uint64_t seed, const std::vector<Rational>& weights)
{
    auto rng = stream(seed, 1);
    const unsigned d = 1 + static_cast<unsigned>(pick(rng, 3));
    std::vector<Rational> w(d);
    for (auto& x : w)
        x = weights[pick(rng, weights.size())];
    std::vector<std::size_t> map(d);
    for (auto& t : map)
        t = pick(rng, d);
    const Rational ratios[] = {Rational(1, 2), Rational(1), Rational(2), Rational(1, 3)};
    const unsigned families = 1 + static_cast<unsigned>(pick(rng, 2));
    std::vector<TailFamily> fams;
    std::vector<MapRule> rules;
    for (unsigned f = 0; f < families; ++f) {
        TailFamily fam{"f" + std::to_string(f), static_cast<Index>(pick(rng, 3)), weights[pick(rng, weights.size())],
                       ratios[pick(rng, 4)]};
        fams.push_back(fam);
        if (pick(rng, 3) == 0) {
            rules.push_back(FanInRule{pick(rng, d)});
        } else {
            ShiftRule s{static_cast<Index>(1 + pick(rng, 2)), {}};
            for (Index i = 0; i < s.k; ++i)
                s.into.push_back(pick(rng, d));
            rules.push_back(s);
        }
    }
    MeasureSpace space(atoms_from(w), fams);
    Transformation phi(space, map, rules);
    return {"countable-" + std::to_string(seed), space, phi};
}

std::size_t exhaustive_count(unsigned max_atoms, std::size_t weight_count)
{
    std::size_t total = 0;
    for (unsigned d = 1; d <= max_atoms; ++d) {
        std::size_t c = 1;
        for (unsigned i = 0; i < d; ++i)
            c *= weight_count * d;
        total += c;
    }
    return total;
}

void enumerate_exhaustive(unsigned max_atoms, const std::vector<Rational>& weights,
                          const std::function<void(const Instance&)>& visit)
{
    const std::size_t n = exhaustive_count(max_atoms, weights.size());
    for (std::size_t i = 0; i < n; ++i)
        visit(exhaustive_instance(i, max_atoms, weights));
}

InstanceOutcome evaluate_instance(const Instance& inst, unsigned n_max, double tolerance)
{
    InstanceOutcome out;
    auto fail = [&](Property p, std::string msg) { out.violations.emplace_back(p, inst.name + ": " + msg); };
    const MeasureSpace& space = inst.space;

    try {
        Instance back = parse_instance(render_instance(inst));
        if (!(back.space == space) || !(back.phi == inst.phi))
            fail(Property::round_trip, "parse(render(instance)) differs");
    } catch (const std::exception& e) {
        fail(Property::round_trip, std::string("rendered instance does not parse: ") + e.what());
    }

    ReportOptions options;
    options.n_max = n_max;
    options.tolerance = tolerance;
    std::optional<AnalysisReport> report;
    try {
        report = full_report(inst, options);
    } catch (const representation_error& e) {
        out.skipped = true;
        out.skip_reason = std::string("not representable: ") + e.what();
        return out;
    }
    const AnalysisReport& r = *report;
    if (!r.flags.nonsingular || !r.standing_hypothesis) {
        out.skipped = true;
        out.skip_reason = r.flags.nonsingular ? "not densely defined" : "singular";
        return out;
    }

    const auto& first = r.condition(Condition::i);
    if (!first.verdict) {
        fail(Property::equivalence, "(i) undecided: " + first.error);
        return out;
    }
    const bool q = first.verdict->holds;
    out.quasinormal = q;
    for (const auto& c : r.conditions) {
        const std::string tag(condition_tag(c.tag));
        if (!c.verdict) {
            fail(Property::equivalence, "(" + tag + ") undecided: " + c.error);
            continue;
        }
        if (c.verdict->holds != q)
            fail(Property::equivalence, "(" + tag + ") disagrees with (i)");
        if (c.verdict->holds != !c.verdict->witness) {
            fail(Property::witness, "(" + tag + ") witness presence does not match the verdict");
        } else if (c.verdict->witness) {
            if (auto problem = witness_problem(inst, *c.verdict->witness); !problem.empty())
                fail(Property::witness, "(" + tag + ") " + problem);
        }
    }
    for (const auto& p : r.probes)
        if (p.holds != q && q)
            fail(Property::equivalence, "(iv) probe " + p.probe + " fails on a quasinormal instance");

    if (!r.lemma_error.empty())
        fail(Property::lemma, r.lemma_error);
    for (const auto& l : r.lemma)
        if (!l.agree())
            fail(Property::lemma, "pair disagrees at n=" + std::to_string(l.n));

    for (const auto& f : r.families) {
        if (f.hankel && !*f.hankel)
            fail(Property::hankel, f.name + " has a non-PSD Hankel matrix");
        if (f.name == "canonical-precomposed" && q && !(f.cc && f.cc->holds && f.sms && f.sms->holds))
            fail(Property::consistency, "precomposed canonical family fails on a quasinormal instance");
        if (f.name == "canonical-plain" && !q) {
            if (!f.cc || f.cc->holds || !f.cc->witness)
                fail(Property::consistency, "plain canonical family does not fail (CC) with a witness");
            else if (f.cc->witness->lhs == f.cc->witness->rhs)
                fail(Property::witness, "(CC) witness sides are equal");
        }
    }

    if (space.is_finite()) {
        if (!r.oracle) {
            fail(Property::oracle, "oracle skipped: " + r.oracle_error);
        } else {
            const auto& o = *r.oracle;
            if (o.quasinormal != q)
                fail(Property::oracle, "commutation oracle disagrees with (i)");
            if (!o.adjoint_product_is_h || !o.pairing)
                fail(Property::adjoint, "A*A != diag(h) or the pairing identity fails");
            out.polar_residual = o.polar.residual;
            if (!o.polar.agrees)
                fail(Property::numeric, "polar cross-check disagrees with the exact oracle");
            if (q && !(o.polar.residual < 1e-12))
                fail(Property::numeric, "polar residual on a quasinormal instance is not below 1e-12");
        }
        bool positive = true;
        for (const auto& a : space.atoms())
            positive = positive && sgn(a.weight) > 0;
        out.measure_preserving_bijection =
            inst.phi.is_bijective_finite() && ae_equal(r.derivatives.at(1), MeasurableFn::constant(space, ExtValue(1)), space).equal;
        if (positive && q != out.measure_preserving_bijection)
            fail(Property::structure, q ? "quasinormal but not a measure-preserving bijection"
                                        : "measure-preserving bijection that is not quasinormal");
    }

    std::vector<AtomSet> probes{AtomSet::whole(space)};
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        probes.push_back(AtomSet::singleton(AtomId::explicit_atom(i)));
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const Index s = space.family(j).start;
        probes.push_back(AtomSet::family_tail(j, s));
        probes.push_back(AtomSet::singleton(AtomId::family_member(j, s + 1)));
    }
    for (const auto& set : probes) {
        try {
            auto sides = transport_sides(MeasurableFn::indicator(space, set), space, inst.phi);
            if (sides.composed != sides.weighted)
                fail(Property::transport, "integral of f(phi) = " + sides.composed.str() + " but integral of f*h = "
                                              + sides.weighted.str());
        } catch (const representation_error&) {
        }
    }
    return out;
}

std::size_t CorpusSummary::total_violations() const
{
    std::size_t s = 0;
    for (auto v : violations)
        s += v;
    return s;
}

CorpusSummary run_corpus(const CorpusOptions& options)
{
    const std::size_t n_ex = exhaustive_count(options.max_exhaustive_atoms, options.weights.size());
    const std::size_t n_total = n_ex + options.random_instances + options.random_countable;

    struct Partial {
        CorpusSummary s;
        std::map<std::size_t, std::string> messages;
    };
    auto work = [&](std::size_t begin, std::size_t stride, Partial& p) {
        p.s.min_nonquasinormal_residual = std::numeric_limits<double>::infinity();
        for (std::size_t i = begin; i < n_total; i += stride) {
            Instance inst = [&] {
                if (i < n_ex)
                    return exhaustive_instance(i, options.max_exhaustive_atoms, options.weights);
                const std::size_t j = i - n_ex;
                if (j < options.random_instances) {
                    auto rng = stream(options.seed, 2 + j);
                    return generate_instance(rng(), 1, options.random_max_atoms, options.weights);
                }
                auto rng = stream(options.seed, 2 + j);
                return generate_countable(rng(), options.weights);
            }();
            const InstanceOutcome o = evaluate_instance(inst, options.n_max, options.tolerance);
            ++p.s.instances;
            if (i < n_ex)
                ++p.s.exhaustive;
            else if (i - n_ex < options.random_instances)
                ++p.s.random;
            else
                ++p.s.countable;
            if (o.skipped) {
                ++p.s.skipped;
                continue;
            }
            if (o.quasinormal) {
                ++p.s.quasinormal;
                if (i < n_ex)
                    ++p.s.quasinormal_exhaustive;
                p.s.max_quasinormal_residual = std::max(p.s.max_quasinormal_residual, o.polar_residual);
            } else if (inst.space.is_finite()) {
                p.s.min_nonquasinormal_residual = std::min(p.s.min_nonquasinormal_residual, o.polar_residual);
            }
            if (i < n_ex && o.measure_preserving_bijection)
                ++p.s.bijections_exhaustive;
            for (const auto& [prop, msg] : o.violations) {
                ++p.s.violations[static_cast<std::size_t>(prop)];
                if (p.messages.size() < 10)
                    p.messages.emplace(i, std::string(property_name(prop)) + " " + msg);
            }
        }
    };

    const unsigned threads = std::max(1u, options.threads);
    std::vector<Partial> parts(threads);
    if (threads == 1) {
        work(0, 1, parts[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(work, t, threads, std::ref(parts[t]));
        for (auto& th : pool)
            th.join();
    }

    CorpusSummary out;
    out.min_nonquasinormal_residual = std::numeric_limits<double>::infinity();
    std::map<std::size_t, std::string> messages;
    for (const auto& p : parts) {
        out.instances += p.s.instances;
        out.exhaustive += p.s.exhaustive;
        out.random += p.s.random;
        out.countable += p.s.countable;
        out.skipped += p.s.skipped;
        out.quasinormal += p.s.quasinormal;
        out.quasinormal_exhaustive += p.s.quasinormal_exhaustive;
        out.bijections_exhaustive += p.s.bijections_exhaustive;
        out.max_quasinormal_residual = std::max(out.max_quasinormal_residual, p.s.max_quasinormal_residual);
        out.min_nonquasinormal_residual = std::min(out.min_nonquasinormal_residual, p.s.min_nonquasinormal_residual);
        for (std::size_t k = 0; k < property_count; ++k)
            out.violations[k] += p.s.violations[k];
        messages.insert(p.messages.begin(), p.messages.end());
    }
    for (const auto& [i, msg] : messages) {
        if (out.first_violations.size() == 10)
            break;
        out.first_violations.push_back(msg);
    }
    return out;
}

std::string render_summary(const CorpusSummary& s)
{
    std::ostringstream os;
    os << "corpus instances=" << s.instances << " exhaustive=" << s.exhaustive << " random=" << s.random
       << " countable=" << s.countable << " skipped=" << s.skipped << '\n';
    os << "corpus quasinormal=" << s.quasinormal << " quasinormal_exhaustive=" << s.quasinormal_exhaustive
       << " measure_preserving_bijections_exhaustive=" << s.bijections_exhaustive << '\n';
    char buf[96];
    std::snprintf(buf, sizeof buf, "corpus max_quasinormal_residual=%.3e min_nonquasinormal_residual=%.3e\n",
                  s.max_quasinormal_residual, s.min_nonquasinormal_residual);
    os << buf;
    for (std::size_t k = 0; k < property_count; ++k)
        os << "property " << property_name(static_cast<Property>(k)) << " violations=" << s.violations[k] << '\n';
    for (const auto& m : s.first_violations)
        os << "violation " << m << '\n';
    os << "corpus violations=" << s.total_violations() << '\n';
    return os.str();
}

} // namespace qnc
