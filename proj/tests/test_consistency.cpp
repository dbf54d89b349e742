#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnc/builtins.hpp"
#include "qnc/consistency.hpp"
#include "qnc/errors.hpp"
#include "support.hpp"

using namespace qnc;
using qnc::test::ex;
using qnc::test::mem;

namespace {

ProbabilityFamily everywhere(const MeasureSpace& space, const DiscreteMeasure& m)
{
    std::vector<std::optional<DiscreteMeasure>> e(space.explicit_count(), m);
    std::vector<MeasureTail> t(space.family_count(), MeasureTail{m, {}});
    return ProbabilityFamily(space, e, t);
}

} // namespace

TEST_CASE("discrete measures")
{
    const DiscreteMeasure m({{Rational(2), Rational(1, 4)}, {Rational(0), Rational(3, 4)}, {Rational(5), Rational(0)}});
    CHECK(m.points().size() == 2);
    CHECK(m.points()[0].first == 0);
    CHECK(m.mass_at(2) == Rational(1, 4));
    CHECK(m.mass_at(5) == 0);
    CHECK(m.moment(0) == 1);
    CHECK(m.moment(1) == Rational(1, 2));
    CHECK(m.moment(3) == 2);
    CHECK(DiscreteMeasure::dirac(0).moment(0) == 1);
    CHECK_THROWS_AS(DiscreteMeasure({{Rational(1), Rational(1, 2)}}), input_error);
    CHECK_THROWS_AS(DiscreteMeasure({{Rational(-1), Rational(1)}}), input_error);
    CHECK_THROWS_AS(DiscreteMeasure({{Rational(1), Rational(1, 2)}, {Rational(1), Rational(1, 2)}}), input_error);
    CHECK_THROWS_AS(DiscreteMeasure({{Rational(1), Rational(3, 2)}, {Rational(2), Rational(-1, 2)}}), input_error);
}

TEST_CASE("families need a measure on every positive-weight atom")
{
    const auto b = test::example_b();
    CHECK_THROWS_AS(ProbabilityFamily(b.space, {DiscreteMeasure::dirac(1), std::nullopt}), input_error);
    const auto n = test::finite({Rational(1), Rational(0)}, {0, 1});
    CHECK_NOTHROW(ProbabilityFamily(n.space, {DiscreteMeasure::dirac(1), std::nullopt}));
}

TEST_CASE("measure-preserving bijection with delta_1")
{
    const auto c = builtin("cycle3");
    const DerivativeTable t(c.space, c.phi, 8);
    const auto p = everywhere(c.space, DiscreteMeasure::dirac(1));
    CHECK(check_cc(p, t).holds);
    CHECK(check_sms(p, t).holds);
    for (unsigned n = 0; n <= 8; ++n)
        CHECK(moments(p, ex(1), n) == ExtValue(1));
    CHECK(canonical_family(t, CanonicalVariant::plain) == p);
    CHECK(canonical_family(t, CanonicalVariant::precomposed) == p);
}

TEST_CASE("shift space with delta_2")
{
    const auto s = builtin("shift");
    const DerivativeTable t(s.space, s.phi, 8);
    const auto p = everywhere(s.space, DiscreteMeasure::dirac(2));
    CHECK(canonical_family(t, CanonicalVariant::plain) == p);
    CHECK(canonical_family(t, CanonicalVariant::precomposed) == p);
    CHECK(check_cc(p, t).holds);
    CHECK(check_sms(p, t).holds);
    for (unsigned n = 0; n <= 8; ++n) {
        CHECK(moments(p, mem(0, 5), n) == ExtValue(Rational(1u << n)));
        CHECK(t.h_power(n)(mem(0, 5)) == ExtValue(Rational(1u << n)));
    }
    // delta_1 is not consistent here
    const auto wrong = everywhere(s.space, DiscreteMeasure::dirac(1));
    CHECK_FALSE(check_cc(wrong, t).holds);
}

TEST_CASE("example B")
{
    const auto b = test::example_b();
    const DerivativeTable t(b.space, b.phi, 8);
    const auto pre = canonical_family(t, CanonicalVariant::precomposed);
    CHECK(pre == everywhere(b.space, DiscreteMeasure::dirac(3)));
    const auto plain = canonical_family(t, CanonicalVariant::plain);
    const auto v = check_cc(plain, t);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->lhs != v.witness->rhs);
    // h_phi vanishes at 1: the moment identity is outside its hypothesis.
    CHECK_THROWS_AS(check_sms(pre, t), precondition_error);
}

TEST_CASE("preconditions")
{
    const auto r = builtin("remark");
    const DerivativeTable t(r.space, r.phi, 2);
    CHECK_THROWS_AS(canonical_family(t, CanonicalVariant::plain), precondition_error);
    CHECK_THROWS_AS(check_cc(everywhere(r.space, DiscreteMeasure::dirac(1)), t), precondition_error);
    // h_phi o phi vanishes on the second atom
    const auto z = test::finite({Rational(1), Rational(1)}, {1, 1});
    // 0 -> 1, 1 -> 1: h = (0, 2), h o phi = (2, 2); fine for (CC)
    const DerivativeTable tz(z.space, z.phi, 2);
    CHECK_NOTHROW(check_cc(everywhere(z.space, DiscreteMeasure::dirac(2)), tz));
    const auto y = test::finite({Rational(1), Rational(1)}, {1, 0});
    const DerivativeTable ty(y.space, y.phi, 2);
    CHECK(check_cc(everywhere(y.space, DiscreteMeasure::dirac(1)), ty).holds);
}

TEST_CASE("canonical families on small spaces")
{
    const std::vector<Rational> ws{Rational(1), Rational(2), Rational(1, 2)};
    for (std::size_t wi = 0; wi < 27; ++wi) {
        const std::vector<Rational> w{ws[wi % 3], ws[(wi / 3) % 3], ws[wi / 9]};
        for (std::size_t m = 0; m < 27; ++m) {
            const auto inst = test::finite(w, {m % 3, (m / 3) % 3, m / 9});
            const DerivativeTable t(inst.space, inst.phi, 8);
            const bool q = test::Brute(inst).quasinormal();
            const auto pre = canonical_family(t, CanonicalVariant::precomposed);
            const auto plain = canonical_family(t, CanonicalVariant::plain);
            const auto cc_pre = check_cc(pre, t);
            if (q) {
                CHECK(cc_pre.holds);
                CHECK(check_sms(pre, t).holds);
            } else {
                const auto cc = check_cc(plain, t);
                CHECK_FALSE(cc.holds);
                CHECK(cc.witness.has_value());
            }
            for (std::size_t x = 0; x < 3; ++x) {
                CHECK(hankel_psd(pre, ex(x), 8));
                CHECK(hankel_psd(plain, ex(x), 8));
            }
        }
    }
}

TEST_CASE("Hankel positivity")
{
    CHECK(is_psd({{Rational(1), Rational(0)}, {Rational(0), Rational(0)}}));
    CHECK_FALSE(is_psd({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}));
    CHECK_FALSE(is_psd({{Rational(1), Rational(2)}, {Rational(2), Rational(1)}}));
    CHECK(is_psd({{Rational(2), Rational(1)}, {Rational(1), Rational(2)}}));
    const auto b = test::example_b();
    const DiscreteMeasure m({{Rational(0), Rational(1, 3)}, {Rational(1, 2), Rational(1, 3)}, {Rational(4), Rational(1, 3)}});
    const auto p = everywhere(b.space, m);
    for (unsigned n = 0; n <= 10; ++n)
        CHECK(hankel_psd(p, ex(0), n));
    CHECK(p.support() == std::vector<Rational>{Rational(0), Rational(1, 2), Rational(4)});
    CHECK(p.point_mass(4)(ex(1)) == ExtValue(Rational(1, 3)));
    CHECK(p.moment_fn(1)(ex(0)) == ExtValue(Rational(3, 2)));
}
