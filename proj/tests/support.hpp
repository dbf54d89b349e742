#pragma once

#include <string>
#include <vector>

#include "qnc/measure_space.hpp"

namespace qnc::test {

inline Instance finite(const std::vector<Rational>& weights, const std::vector<std::size_t>& map,
                       std::string name = "t")
{
    std::vector<ExplicitAtom> atoms;
    for (std::size_t i = 0; i < weights.size(); ++i)
        atoms.push_back({std::to_string(i), weights[i]});
    MeasureSpace space(atoms);
    return {std::move(name), space, Transformation(space, map)};
}

inline Instance example_b()
{
    return finite({Rational(1), Rational(2)}, {0, 0}, "exampleB");
}

inline AtomId ex(std::size_t slot)
{
    return AtomId::explicit_atom(slot);
}

inline AtomId mem(std::size_t family, Index n)
{
    return AtomId::family_member(family, n);
}

// Textbook formulas on a finite space, written without the library's function algebra.
struct Brute {
    std::vector<Rational> w;
    std::vector<std::size_t> map;

    explicit Brute(const Instance& inst) : map(inst.phi.explicit_map())
    {
        for (const auto& a : inst.space.atoms())
            w.push_back(a.weight);
    }
    std::size_t apply(std::size_t x, unsigned n) const
    {
        while (n--)
            x = map[x];
        return x;
    }
    Rational h(std::size_t x, unsigned n = 1) const
    {
        if (w[x] == 0)
            return 0;
        Rational s = 0;
        for (std::size_t y = 0; y < w.size(); ++y)
            if (apply(y, n) == x)
                s += w[y];
        return s / w[x];
    }
    Rational expectation(const std::vector<Rational>& f, std::size_t x) const
    {
        Rational num = 0, den = 0;
        for (std::size_t y = 0; y < w.size(); ++y)
            if (map[y] == map[x]) {
                num += f[y] * w[y];
                den += w[y];
            }
        return den == 0 ? Rational(0) : Rational(num / den);
    }
    bool quasinormal() const
    {
        for (std::size_t x = 0; x < w.size(); ++x)
            if (w[x] != 0 && h(x) != h(map[x]))
                return false;
        return true;
    }
};

} // namespace qnc::test
