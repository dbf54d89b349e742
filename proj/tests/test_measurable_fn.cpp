#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnc/builtins.hpp"
#include "qnc/errors.hpp"
#include "qnc/measurable_fn.hpp"
#include "support.hpp"

using namespace qnc;
using qnc::test::ex;
using qnc::test::mem;

namespace {

// One explicit atom and one family n >= 1 with weights 2^n.
MeasureSpace tail_space()
{
    return MeasureSpace({{"a", 1}}, {{"f", 1, 1, 2}});
}

MeasurableFn geometric(const ExtValue& at_a, const ExtValue& coeff, const Rational& ratio,
                       std::map<Index, ExtValue> exceptions = {})
{
    TailRule t = TailRule::geometric(coeff, ratio);
    t.exceptions = std::move(exceptions);
    return MeasurableFn({at_a}, {t});
}

} // namespace

TEST_CASE("tail rules are canonical")
{
    TailRule z = TailRule::geometric(ExtValue(0), Rational(5));
    CHECK(z.ratio == 1);
    CHECK(z.is_constant());
    TailRule i = TailRule::geometric(ExtValue::infinity(), Rational(1, 3));
    CHECK(i.ratio == 1);
    TailRule g = TailRule::geometric(ExtValue(3), Rational(2));
    g.exceptions[4] = ExtValue(48);
    g.exceptions[5] = ExtValue(7);
    g.normalize();
    CHECK(g.exceptions.size() == 1);
    CHECK(g.value(4) == ExtValue(48));
    CHECK(g.value(5) == ExtValue(7));
    CHECK(g.value(6) == ExtValue(192));
    CHECK_THROWS_AS(TailRule::geometric(ExtValue(1), Rational(0)), input_error);
}

TEST_CASE("pointwise algebra")
{
    const auto s = tail_space();
    const auto f = geometric(2, 3, Rational(2), {{2, ExtValue(5)}});
    const auto g = geometric(ExtValue::infinity(), 1, Rational(1, 2));
    const auto p = product(f, g);
    CHECK(p(ex(0)).is_infinite());
    CHECK(p(mem(0, 1)) == ExtValue(3));
    CHECK(p(mem(0, 2)) == ExtValue(Rational(5, 4)));
    CHECK(p(mem(0, 9)) == ExtValue(3));
    CHECK(p.tail(0).is_constant());

    const auto sq = power(f, 2);
    CHECK(sq(mem(0, 3)) == ExtValue(576));
    CHECK(sq(mem(0, 2)) == ExtValue(25));
    const auto zeroth = power(MeasurableFn({ExtValue::infinity()}, {TailRule::constant(0)}), 0);
    CHECK(zeroth == MeasurableFn::constant(s, 1));

    CHECK(scale(f, 0) == MeasurableFn::constant(s, 0));
    const auto two_f = sum(f, f);
    CHECK(two_f == scale(f, 2));
    CHECK_THROWS_AS(sum(f, g), representation_error);
    CHECK(sum(f, MeasurableFn::constant(s, 0)) == f);

    const auto q = quotient(f, f, s);
    CHECK(q == MeasurableFn::constant(s, 1));
    CHECK_THROWS_AS(quotient(MeasurableFn::constant(s, 0), MeasurableFn::constant(s, 0), s), arithmetic_error);
}

TEST_CASE("quotient is zero on null atoms")
{
    MeasureSpace s({{"a", 0}, {"b", 1}});
    const MeasurableFn z({ExtValue(0), ExtValue(2)});
    const auto q = quotient(z, z, s);
    CHECK(q(ex(0)) == ExtValue(0));
    CHECK(q(ex(1)) == ExtValue(1));
}

TEST_CASE("composition with shift and fan-in rules")
{
    const auto shift = builtin("shift");
    // f(0) = 5, f(n) = 3 * 2^n
    const MeasurableFn f({ExtValue(5)}, {TailRule::geometric(3, Rational(2))});
    const auto c = compose(f, shift.space, shift.phi);
    CHECK(c(ex(0)) == ExtValue(5));
    CHECK(c(mem(0, 1)) == ExtValue(5));
    for (Index n = 2; n < 10; ++n)
        CHECK(c(mem(0, n)) == f(mem(0, n - 1)));

    const auto remark = builtin("remark");
    const MeasurableFn g({ExtValue(7)}, {TailRule::constant(1)});
    const auto d = compose(g, remark.space, remark.phi);
    CHECK(d(mem(0, 4)) == ExtValue(7));
    CHECK(d(ex(0)) == ExtValue(7));
}

TEST_CASE("value maps on geometric tails")
{
    const auto s = tail_space();
    const auto f = geometric(8, 1, Rational(2));
    const auto chi8 = indicator_of_value(f, s, 8);
    CHECK(chi8(ex(0)) == ExtValue(1));
    CHECK(chi8(mem(0, 3)) == ExtValue(1));
    CHECK(chi8(mem(0, 2)) == ExtValue(0));
    CHECK(chi8(mem(0, 4)) == ExtValue(0));
    CHECK(indicator_of_value(f, s, 3)(mem(0, 1)) == ExtValue(0));
    CHECK(indicator_of_value(f, s, 1) == MeasurableFn::constant(s, 0)); // 2^0 lies below the start index
    CHECK_THROWS_AS(attained_values(f, s), representation_error);
}

TEST_CASE("attained values and suprema")
{
    const auto s = tail_space();
    const MeasurableFn f({ExtValue(2)}, {TailRule::constant(5)});
    CHECK(attained_values(f, s) == std::vector<ExtValue>{ExtValue(2), ExtValue(5)});
    CHECK(essential_sup(f, s) == ExtValue(5));
    CHECK(essential_sup(geometric(1, 1, Rational(2)), s).is_infinite());
    CHECK(essential_sup(geometric(1, 4, Rational(1, 2)), s) == ExtValue(2));
    CHECK(essential_sup(geometric(1, 4, Rational(1, 2), {{1, ExtValue(0)}}), s) == ExtValue(1));
    MeasureSpace null_top({{"a", 0}, {"b", 1}});
    CHECK(essential_sup(MeasurableFn({ExtValue::infinity(), ExtValue(1)}), null_top) == ExtValue(1));
    CHECK(find_infinite(MeasurableFn({ExtValue::infinity(), ExtValue(1)}), null_top) == std::nullopt);
    CHECK(find_zero(geometric(1, 0, 1), s) == mem(0, 1));
}

TEST_CASE("a.e. equality")
{
    const auto s = tail_space();
    CHECK(ae_equal(MeasurableFn::constant(s, 1), MeasurableFn::constant(s, 1), s).equal);
    const auto f = geometric(1, 3, Rational(2));
    const auto g = geometric(1, 6, Rational(1)); // agrees with f only at n = 1
    const auto cmp = ae_equal(f, g, s);
    CHECK_FALSE(cmp.equal);
    CHECK(cmp.witness == mem(0, 2));
    const auto h = geometric(1, 3, Rational(2), {{3, ExtValue(1)}});
    CHECK(ae_equal(f, h, s).witness == mem(0, 3));

    MeasureSpace null_atom({{"a", 0}, {"b", 1}});
    CHECK(ae_equal(MeasurableFn({ExtValue(4), ExtValue(1)}), MeasurableFn({ExtValue(9), ExtValue(1)}), null_atom).equal);

    const auto b = test::example_b();
    const MeasurableFn hb({ExtValue(3), ExtValue(0)});
    const auto hb_phi = compose(hb, b.space, b.phi);
    const auto bcmp = ae_equal(hb, hb_phi, b.space);
    CHECK_FALSE(bcmp.equal);
    CHECK(bcmp.witness == ex(1));
}

TEST_CASE("integrals over tails are exact")
{
    const MeasureSpace s({{"a", 1}}, {{"f", 0, 1, Rational(1, 2)}});
    CHECK(integrate(MeasurableFn::constant(s, 1), s) == ExtValue(3));
    // f(n) = 2^n on weights 2^-n: every member contributes 1.
    const MeasurableFn grow({ExtValue(0)}, {TailRule::geometric(1, Rational(2))});
    CHECK(integrate(grow, s).is_infinite());
    // f(n) = (1/3)^n: sum of 6^-n = 6/5.
    const MeasurableFn shrink({ExtValue(0)}, {TailRule::geometric(1, Rational(1, 3))});
    CHECK(integrate(shrink, s) == ExtValue(Rational(6, 5)));
    TailRule t = TailRule::geometric(1, Rational(1, 3));
    t.exceptions[0] = ExtValue(4);
    CHECK(integrate(MeasurableFn({ExtValue(0)}, {t}), s) == ExtValue(Rational(6, 5) + 3));
    CHECK(integrate(MeasurableFn::constant(s, 1), s, AtomSet::family_tail(0, 2)) == ExtValue(Rational(1, 2)));
    CHECK(integrate(MeasurableFn({ExtValue(0)}, {TailRule::constant(ExtValue::infinity())}), s).is_infinite());
    CHECK(integrate(MeasurableFn({ExtValue::infinity()}, {TailRule::constant(0)}), s,
                    AtomSet::family_tail(0, 0)) == ExtValue(0));
}

TEST_CASE("describe")
{
    const auto s = tail_space();
    CHECK(describe(geometric(3, 2, Rational(1, 2), {{4, ExtValue(7)}}), s) == "a=3 f[n>=1]=2*1/2^n f[4]=7");
    CHECK(describe(MeasurableFn::constant(s, ExtValue::infinity()), s) == "a=inf f[n>=1]=inf");
}
