#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnc/builtins.hpp"
#include "qnc/corpus.hpp"
#include "qnc/errors.hpp"
#include "qnc/space_io.hpp"
#include "support.hpp"

using namespace qnc;
using qnc::test::ex;
using qnc::test::mem;

namespace {

std::string parse_error(const std::string& text)
{
    try {
        parse_instance(text);
    } catch (const input_error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("parse a countable space")
{
    const auto inst = parse_instance("# geometric shift\n"
                                     "space g\n"
                                     "atom z weight 2/4   # reduced on read\n"
                                     "atom y weight 0/1\n"
                                     "family s start 2 weight 1/3 ratio 3/1 map shift 2 into z y\n"
                                     "family f start 0 weight 1 ratio 1/2 map fanin z\n"
                                     "phi z -> z\n"
                                     "phi y -> y\n");
    CHECK(inst.name == "g");
    CHECK(inst.space.atom(0).weight == Rational(1, 2));
    CHECK(inst.space.family(0).start == 2);
    CHECK(inst.space.family(0).weight(3) == Rational(9));
    CHECK(inst.phi.apply(mem(0, 2)) == ex(0));
    CHECK(inst.phi.apply(mem(0, 3)) == ex(1));
    CHECK(inst.phi.apply(mem(0, 6)) == mem(0, 4));
    CHECK(inst.phi.apply(mem(1, 6)) == ex(0));
}

TEST_CASE("line-numbered parse errors")
{
    CHECK(parse_error("space a\natom 0 weight 1/1\natom 0 weight 1/1\nphi 0 -> 0\n").find("line 3") == 0);
    CHECK(parse_error("space a\natom 0 weight 1/1\natom 1 weight 1/1\nphi 0 -> 0\n").find("not total") != std::string::npos);
    CHECK(parse_error("space a\natom 0 weight 1/1\nphi 0 -> 7\n").find("line 3") == 0);
    CHECK(parse_error("space a\natom 0 weight 1/1\nphi 0 -> 0\nphi 0 -> 0\n").find("line 4") == 0);
    CHECK(parse_error("space a\natom 0 weight -1/1\nphi 0 -> 0\n").find("line 2") == 0);
    CHECK(parse_error("space a\natom 0 weight 1/0\nphi 0 -> 0\n").find("line 2") == 0);
    CHECK(parse_error("space a\natom 0 wieght 1/1\nphi 0 -> 0\n").find("line 2") == 0);
    CHECK(parse_error("space a\natom 0 weight 1/1\nfamily s start 1 weight 1 ratio 1 map shift 0 into\nphi 0 -> 0\n")
              .find("line 3") == 0);
    CHECK(parse_error("space a\natom 0 weight 1/1\nfamily s start 1 weight 1 ratio 1 map shift 2 into 0\nphi 0 -> 0\n")
              .find("line 3") == 0);
    CHECK(parse_error("space a\natom 0 weight 1/1\nfamily s start 1 weight 1 ratio 1 map fanin q\nphi 0 -> 0\n")
              .find("line 3") == 0);
    CHECK(parse_error("atom 0 weight 1/1\nphi 0 -> 0\n") != "");
    CHECK(parse_error("space a\nspace b\natom 0 weight 1/1\nphi 0 -> 0\n").find("line 2") == 0);
    CHECK(parse_error("space a\natom 0 weight 0/1\nphi 0 -> 0\n") != "");
    CHECK(parse_error("space a\natom 0 weight 1/1\nbogus\nphi 0 -> 0\n").find("line 3") == 0);
}

TEST_CASE("render writes p/q and round-trips")
{
    for (const auto& name : builtin_names()) {
        const auto inst = builtin(name);
        const auto text = render_instance(inst);
        const auto back = parse_instance(text);
        CHECK(back.space == inst.space);
        CHECK(back.phi == inst.phi);
        CHECK(render_instance(back) == text);
        CHECK(text == builtin_text(name));
    }
    const std::vector<Rational> ws{Rational(1), Rational(2, 3), Rational(7, 5)};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = generate_instance(seed, 1, 6, ws);
        const auto back = parse_instance(render_instance(inst));
        CHECK(back.space == inst.space);
        CHECK(back.phi == inst.phi);
        const auto cinst = generate_countable(seed, ws);
        const auto cback = parse_instance(render_instance(cinst));
        CHECK(cback.space == cinst.space);
        CHECK(cback.phi == cinst.phi);
    }
}

TEST_CASE("family files")
{
    const auto s = builtin("shift");
    const auto fam = parse_family("P 0 : t1=2/1 mass=1/1\n"
                                  "P s[*] : t1=2/1 mass=1/1\n"
                                  "P s[3] : t1=1/1 mass=1/2, t2=4/1 mass=1/2\n",
                                  s.space);
    CHECK(fam.at(ex(0))->mass_at(2) == 1);
    CHECK(fam.at(mem(0, 9))->mass_at(2) == 1);
    CHECK(fam.at(mem(0, 3))->moment(1) == Rational(5, 2));
    const auto back = parse_family(render_family(fam, s.space), s.space);
    CHECK(back == fam);

    CHECK_THROWS_AS(parse_family("P 0 : t1=2/1 mass=1/1\n", s.space), input_error); // s[*] missing
    CHECK_THROWS_AS(parse_family("P 0 : t1=2/1 mass=1/2\nP s[*] : t1=1 mass=1\n", s.space), input_error);
    CHECK_THROWS_AS(parse_family("P q : t1=2/1 mass=1/1\nP s[*] : t1=1 mass=1\n", s.space), input_error);
    CHECK_THROWS_AS(parse_family("P 0 : t1=2/1 mass=1/1\nP 0 : t1=2/1 mass=1/1\nP s[*] : t1=1 mass=1\n", s.space),
                    input_error);
    CHECK_THROWS_AS(parse_family("P 0 t1=2/1 mass=1/1\nP s[*] : t1=1 mass=1\n", s.space), input_error);
    CHECK_THROWS_AS(parse_family("P 0 : t1=2/1 mass=1/1\nP s[0] : t1=1 mass=1\nP s[*] : t1=1 mass=1\n", s.space),
                    input_error);
}
