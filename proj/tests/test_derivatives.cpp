#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnc/builtins.hpp"
#include "qnc/derivatives.hpp"
#include "qnc/errors.hpp"
#include "support.hpp"

using namespace qnc;
using qnc::test::ex;
using qnc::test::mem;

TEST_CASE("h_phi^n of the identity is 1")
{
    const auto id = builtin("identity");
    for (unsigned n = 0; n < 5; ++n)
        CHECK(radon_nikodym(id.space, id.phi, n) == MeasurableFn::constant(id.space, 1));
}

TEST_CASE("example B derivatives")
{
    const auto b = test::example_b();
    const auto h1 = radon_nikodym(b.space, b.phi, 1);
    CHECK(h1 == MeasurableFn({ExtValue(3), ExtValue(0)}));
    CHECK(radon_nikodym(b.space, b.phi, 2) == MeasurableFn({ExtValue(3), ExtValue(0)}));
    CHECK(power(h1, 2) == MeasurableFn({ExtValue(9), ExtValue(0)}));
    CHECK(densely_defined(b.space, b.phi).holds);
    CHECK(bounded(b.space, b.phi).sup == ExtValue(3));
}

TEST_CASE("remark space derivatives")
{
    const auto r = builtin("remark");
    for (unsigned n = 1; n <= 8; ++n) {
        const auto h = radon_nikodym(r.space, r.phi, n);
        CHECK(h(ex(0)).is_infinite());
        for (Index k = 1; k < 6; ++k)
            CHECK(h(mem(0, k)).is_zero());
    }
    const auto d = densely_defined(r.space, r.phi);
    CHECK_FALSE(d.holds);
    CHECK(d.witness == ex(0));
    CHECK_FALSE(bounded(r.space, r.phi).holds);
    CHECK(radon_nikodym(r.space, r.phi, 0) == MeasurableFn::constant(r.space, 1));
}

TEST_CASE("shift space derivatives")
{
    const auto s = builtin("shift");
    CHECK(densely_defined(s.space, s.phi).holds);
    const auto bd = bounded(s.space, s.phi);
    CHECK(bd.holds);
    CHECK(bd.sup == ExtValue(2));
    for (unsigned n = 0; n <= 8; ++n) {
        const auto h = radon_nikodym(s.space, s.phi, n);
        const ExtValue expect(Rational(1u << n));
        CHECK(h(ex(0)) == expect);
        for (Index k = 1; k < 12; ++k)
            CHECK(h(mem(0, k)) == expect);
    }
}

TEST_CASE("singular maps are rejected")
{
    const auto bad = test::finite({Rational(0), Rational(1)}, {0, 0});
    CHECK_THROWS_AS(radon_nikodym(bad.space, bad.phi), precondition_error);
    CHECK_THROWS_AS(DerivativeTable(bad.space, bad.phi, 2), precondition_error);
}

TEST_CASE("derivatives match the fiber formula on small spaces")
{
    const std::vector<Rational> ws{Rational(1), Rational(2), Rational(1, 2), Rational(0)};
    for (std::size_t wi = 0; wi < 64; ++wi) {
        const std::vector<Rational> w{ws[wi % 4], ws[(wi / 4) % 4], ws[wi / 16]};
        if (w[0] == 0 && w[1] == 0 && w[2] == 0)
            continue;
        for (std::size_t m = 0; m < 27; ++m) {
            const auto inst = test::finite(w, {m % 3, (m / 3) % 3, m / 9});
            if (!check_nonsingular(inst.space, inst.phi).holds)
                continue;
            const test::Brute brute(inst);
            const DerivativeTable table(inst.space, inst.phi, 4);
            for (unsigned n = 1; n <= 5; ++n)
                for (std::size_t x = 0; x < 3; ++x)
                    CHECK(table.h_power(n)(ex(x)) == ExtValue(brute.h(x, n)));
        }
    }
}

TEST_CASE("iterate consistency: the table agrees with phi^n as a single map")
{
    for (const char* name : {"exampleB", "shift", "remark", "cycle3", "fanin", "identity"}) {
        const auto inst = builtin(name);
        const DerivativeTable table(inst.space, inst.phi, 6);
        for (unsigned m = 0; m <= 3; ++m)
            for (unsigned n = 0; n <= 3; ++n)
                CHECK(table.h_power(m + n) == radon_nikodym(inst.space, inst.phi.power(m).after(inst.phi.power(n)), 1));
    }
}

TEST_CASE("conditional expectation")
{
    const auto b = test::example_b();
    const MeasurableFn f({ExtValue(3), ExtValue(6)});
    // (f(0) + 2 f(1)) / 3
    CHECK(conditional_expectation(f, b.space, b.phi) == MeasurableFn({ExtValue(5), ExtValue(5)}));
    CHECK(conditional_expectation(MeasurableFn::constant(b.space, 7), b.space, b.phi) == MeasurableFn::constant(b.space, 7));

    const auto s = builtin("shift");
    const DerivativeTable t(s.space, s.phi, 2);
    CHECK(conditional_expectation(t.h(), s.space, s.phi) == MeasurableFn::constant(s.space, 2));
    CHECK(t.expectation(t.h()) == t.h_after_phi());

    const auto r = builtin("remark");
    CHECK_THROWS_WITH_AS(conditional_expectation(MeasurableFn::constant(r.space, 1), r.space, r.phi),
                         doctest::Contains("conditional expectation undefined"), precondition_error);
    CHECK_THROWS_AS(DerivativeTable(r.space, r.phi, 2).expectation(MeasurableFn::constant(r.space, 1)),
                    precondition_error);

    // A null atom outside the range gets 0; a null fiber is a.e. irrelevant.
    const auto n = test::finite({Rational(1), Rational(0)}, {0, 0});
    const auto e = conditional_expectation(MeasurableFn({ExtValue(4), ExtValue(9)}), n.space, n.phi);
    CHECK(e(ex(0)) == ExtValue(4));
}

TEST_CASE("expectation properties on small spaces")
{
    const std::vector<Rational> ws{Rational(1), Rational(3), Rational(1, 2)};
    const std::vector<std::vector<ExtValue>> fs{{0, 1, 2}, {5, 0, 1}, {Rational(1, 3), 2, 7}};
    for (std::size_t m = 0; m < 27; ++m) {
        const auto inst = test::finite(ws, {m % 3, (m / 3) % 3, m / 9});
        const test::Brute brute(inst);
        const auto& sp = inst.space;
        CHECK(conditional_expectation(MeasurableFn::constant(sp, 1), sp, inst.phi) == MeasurableFn::constant(sp, 1));
        for (const auto& fv : fs) {
            const MeasurableFn f(fv);
            const auto e = conditional_expectation(f, sp, inst.phi);
            std::vector<Rational> raw;
            for (const auto& v : fv)
                raw.push_back(v.finite());
            for (std::size_t x = 0; x < 3; ++x) {
                CHECK(e(ex(x)) == ExtValue(brute.expectation(raw, x)));
            }
            for (const auto& d : expectation_diagnostics(f, sp, inst.phi))
                CHECK(d.of_f == d.of_expectation);
            // linearity over nonnegative combinations
            const MeasurableFn g(fs[0]);
            CHECK(conditional_expectation(sum(scale(f, 2), g), sp, inst.phi)
                  == sum(scale(e, 2), conditional_expectation(g, sp, inst.phi)));
        }
        // monotone chain f1 <= f2 <= f3
        const MeasurableFn f1({ExtValue(0), ExtValue(1), ExtValue(0)});
        const MeasurableFn f2({ExtValue(1), ExtValue(1), ExtValue(2)});
        const MeasurableFn f3({ExtValue(4), ExtValue(1), ExtValue(2)});
        const auto e1 = conditional_expectation(f1, sp, inst.phi);
        const auto e2 = conditional_expectation(f2, sp, inst.phi);
        const auto e3 = conditional_expectation(f3, sp, inst.phi);
        for (std::size_t x = 0; x < 3; ++x) {
            CHECK(e1(ex(x)) <= e2(ex(x)));
            CHECK(e2(ex(x)) <= e3(ex(x)));
        }
        // E(f) is phi^-1(A)-measurable: atoms with the same image share a value
        for (std::size_t x = 0; x < 3; ++x)
            for (std::size_t y = 0; y < 3; ++y)
                if (inst.phi.apply_explicit(x) == inst.phi.apply_explicit(y))
                    CHECK(e3(ex(x)) == e3(ex(y)));
    }
}

TEST_CASE("averaging identity on countable spaces")
{
    for (const char* name : {"shift", "fanin"}) {
        const auto inst = builtin(name);
        const DerivativeTable t(inst.space, inst.phi, 2);
        for (const MeasurableFn& f : {t.h(), MeasurableFn::constant(inst.space, 1),
                                      MeasurableFn::indicator(inst.space, AtomSet::singleton(ex(0)))}) {
            const auto diag = expectation_diagnostics(f, inst.space, inst.phi);
            CHECK(diag.size() == inst.space.explicit_count() + inst.space.family_count());
            for (const auto& d : diag)
                CHECK_MESSAGE(d.of_f == d.of_expectation, name << ' ' << d.set);
        }
    }
}
