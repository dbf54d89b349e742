#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnc/builtins.hpp"
#include "qnc/errors.hpp"
#include "qnc/quasinormality.hpp"
#include "support.hpp"

using namespace qnc;
using qnc::test::ex;
using qnc::test::mem;

namespace {

std::vector<ConditionVerdict> all_six(const DerivativeTable& t)
{
    return {check_i_quasinormal(t), check_ii(t), check_iii(t), check_iv(t).verdict, check_v(t), check_vi(t)};
}

} // namespace

TEST_CASE("identity and cycle: every condition holds")
{
    for (const char* name : {"identity", "cycle3"}) {
        const auto inst = builtin(name);
        const DerivativeTable t(inst.space, inst.phi, 8);
        for (const auto& v : all_six(t)) {
            CHECK(v.holds);
            CHECK_FALSE(v.witness.has_value());
        }
        for (unsigned n = 1; n <= 8; ++n) {
            const auto l = check_lemma_hf2(t, n);
            CHECK(l.semigroup);
            CHECK(l.expectation);
        }
    }
}

TEST_CASE("example B: every condition fails with the expected witnesses")
{
    const auto b = test::example_b();
    const DerivativeTable t(b.space, b.phi, 8);
    const auto i = check_i_quasinormal(t);
    REQUIRE_FALSE(i.holds);
    CHECK(i.witness->atom == ex(1));
    CHECK(i.witness->lhs == ExtValue(0));
    CHECK(i.witness->rhs == ExtValue(3));

    const auto ii = check_ii(t);
    REQUIRE_FALSE(ii.holds);
    CHECK(ii.witness->atom == ex(1));
    CHECK(ii.witness->sigma == ExtValue(3));
    CHECK(ii.witness->lhs == ExtValue(0));
    CHECK(ii.witness->rhs == ExtValue(1));

    CHECK_FALSE(check_iii(t).holds);

    const auto v = check_v(t);
    REQUIRE_FALSE(v.holds);
    CHECK(v.witness->n == 2u);
    CHECK(v.witness->atom == ex(0));
    CHECK(v.witness->lhs == ExtValue(3));
    CHECK(v.witness->rhs == ExtValue(9));
    CHECK(v.n_max == 8u);

    const auto vi = check_vi(t);
    REQUIRE_FALSE(vi.holds);
    CHECK(vi.witness->clause == "E(h)=h(phi)");

    const auto iv = check_iv(t);
    CHECK_FALSE(iv.verdict.holds);
    CHECK(iv.verdict.tag == Condition::iv);
    CHECK(iv.redundancy_consistent);
    bool t2_fails = false;
    for (const auto& p : iv.probes)
        if (p.probe == "t^2")
            t2_fails = !p.holds && p.witness.has_value();
    CHECK(t2_fails);

    const auto l = check_lemma_hf2(t, 1);
    CHECK_FALSE(l.semigroup);
    CHECK_FALSE(l.expectation);
    CHECK(l.agree());
}

TEST_CASE("shift space: every condition holds")
{
    const auto s = builtin("shift");
    const DerivativeTable t(s.space, s.phi, 8);
    for (const auto& v : all_six(t))
        CHECK(v.holds);
    CHECK(attained_values(t.h(), s.space) == std::vector<ExtValue>{ExtValue(2)});
    const auto iv = check_iv(t);
    for (const auto& p : iv.probes)
        CHECK(p.holds);
    const auto l = check_lemma_hf2(t, 3);
    CHECK(l.semigroup);
    CHECK(l.expectation);
    CHECK_THROWS_AS(check_lemma_hf2(t, 9), input_error);
}

TEST_CASE("remark space: (v) holds without dense definedness")
{
    const auto r = builtin("remark");
    const DerivativeTable t(r.space, r.phi, 8);
    CHECK_FALSE(t.densely_defined());
    CHECK(check_v(t).holds);
    CHECK(check_v(r.space, r.phi, 20).holds);
    CHECK_THROWS_WITH_AS(check_i_quasinormal(t), doctest::Contains("not densely defined"), precondition_error);
    CHECK_THROWS_AS(check_ii(t), precondition_error);
    CHECK_THROWS_AS(check_iii(t), precondition_error);
    CHECK_THROWS_AS(check_iv(t), precondition_error);
    CHECK_THROWS_AS(check_vi(t), precondition_error);
    CHECK_THROWS_AS(check_lemma_hf2(t, 1), precondition_error);
    // h_phi differs from h_phi o phi on the members, which is why (i) would fail.
    CHECK_FALSE(ae_equal(t.h(), t.h_after_phi(), r.space).equal);
}

TEST_CASE("summable fan-in is densely defined and not quasinormal")
{
    const auto f = builtin("fanin");
    const DerivativeTable t(f.space, f.phi, 8);
    CHECK(t.densely_defined());
    for (const auto& v : all_six(t))
        CHECK_FALSE(v.holds);
    CHECK(check_i_quasinormal(t).witness->atom == mem(0, 0));
}

TEST_CASE("the horizon of (v) bounds the refutation")
{
    const auto b = test::example_b();
    // h_{phi^0} = 1 = h^0 and h_{phi^1} = h: the first failure is at n = 2.
    CHECK(check_v(b.space, b.phi, 1).holds);
    CHECK_FALSE(check_v(b.space, b.phi, 2).holds);
}

TEST_CASE("all six conditions agree with the brute-force criterion")
{
    const std::vector<Rational> ws{Rational(1), Rational(2), Rational(1, 2)};
    std::size_t quasinormal = 0;
    for (std::size_t wi = 0; wi < 27; ++wi) {
        const std::vector<Rational> w{ws[wi % 3], ws[(wi / 3) % 3], ws[wi / 9]};
        for (std::size_t m = 0; m < 27; ++m) {
            const auto inst = test::finite(w, {m % 3, (m / 3) % 3, m / 9});
            const test::Brute brute(inst);
            const DerivativeTable t(inst.space, inst.phi, 8);
            const bool expect = brute.quasinormal();
            quasinormal += expect;
            for (const auto& v : all_six(t)) {
                CHECK(v.holds == expect);
                CHECK(v.witness.has_value() == !v.holds);
                if (v.witness) {
                    CHECK(v.witness->lhs != v.witness->rhs);
                    CHECK(inst.space.weight(v.witness->atom) > 0);
                }
            }
            for (unsigned n = 1; n <= 8; ++n)
                CHECK(check_lemma_hf2(t, n).agree());
        }
    }
    // Permutations preserving weights: 6 for equal weights, 2 for a repeated pair, 1 otherwise.
    CHECK(quasinormal == 3 * 6 + 18 * 2 + 6 * 1);
}

TEST_CASE("probes")
{
    const auto b = test::example_b();
    const DerivativeTable t(b.space, b.phi, 2);
    const auto chi3 = Probe::indicator(ExtValue(3));
    CHECK(chi3.apply(t.h(), b.space) == MeasurableFn({ExtValue(1), ExtValue(0)}));
    const auto sq = Probe::power(2);
    CHECK(sq.apply(t.h(), b.space) == MeasurableFn({ExtValue(9), ExtValue(0)}));
    const auto step = Probe::simple("step", {{ExtValue(0), ExtValue(5)}}, ExtValue(1));
    CHECK(step.apply(t.h(), b.space) == MeasurableFn({ExtValue(1), ExtValue(5)}));
    const auto probes = default_probes({ExtValue(0), ExtValue(3)});
    CHECK(probes.size() == 4);
    const auto iv = check_iv(t, {step});
    REQUIRE(iv.probes.size() == 1);
    CHECK_FALSE(iv.probes[0].holds);
}

TEST_CASE("convenience overloads")
{
    const auto s = builtin("shift");
    CHECK(check_i_quasinormal(s.space, s.phi).holds);
    CHECK_FALSE(check_i_quasinormal(test::example_b().space, test::example_b().phi).holds);
    CHECK(condition_tag(Condition::iv) == "iv");
}
