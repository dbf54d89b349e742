#include "qnc/builtins.hpp"

#include <array>
#include <utility>

#include "qnc/errors.hpp"
#include "qnc/space_io.hpp"

namespace qnc {

namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kBuiltins{{
    {"identity", "space identity\n"
                 "atom 0 weight 1/1\n"
                 "atom 1 weight 2/1\n"
                 "atom 2 weight 1/2\n"
                 "phi 0 -> 0\n"
                 "phi 1 -> 1\n"
                 "phi 2 -> 2\n"},
    {"exampleB", "space exampleB\n"
                 "atom 0 weight 1/1\n"
                 "atom 1 weight 2/1\n"
                 "phi 0 -> 0\n"
                 "phi 1 -> 0\n"},
    // Z+ with w(0) = 1, w(n) = 2^(n-1), phi(n) = n - 1, phi(0) = 0.
    {"shift", "space shift\n"
              "atom 0 weight 1/1\n"
              "family s start 1 weight 1/2 ratio 2/1 map shift 1 into 0\n"
              "phi 0 -> 0\n"},
    // Counting measure on Z+, phi = 0.
    {"remark", "space remark\n"
               "atom 0 weight 1/1\n"
               "family x start 1 weight 1/1 ratio 1/1 map fanin 0\n"
               "phi 0 -> 0\n"},
    {"cycle3", "space cycle3\n"
               "atom 0 weight 1/1\n"
               "atom 1 weight 1/1\n"
               "atom 2 weight 1/1\n"
               "phi 0 -> 1\n"
               "phi 1 -> 2\n"
               "phi 2 -> 0\n"},
    // Summable fan-in: finite fiber over 0, so densely defined but not quasinormal.
    {"fanin", "space fanin\n"
              "atom 0 weight 1/1\n"
              "family f start 0 weight 1/1 ratio 1/2 map fanin 0\n"
              "phi 0 -> 0\n"},
}};

} // namespace

std::vector<std::string> builtin_names()
{
    std::vector<std::string> out;
    for (const auto& [name, text] : kBuiltins)
        out.emplace_back(name);
    return out;
}

std::string builtin_text(std::string_view name)
{
    for (const auto& [n, text] : kBuiltins)
        if (n == name)
            return std::string(text);
    throw input_error("unknown builtin '" + std::string(name) + "'");
}

Instance builtin(std::string_view name)
{
    return parse_instance(builtin_text(name));
}

} // namespace qnc
