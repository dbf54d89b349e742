#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "qnc/consistency.hpp"
#include "qnc/measure_space.hpp"

namespace qnc {

/// Space-description text:
///
///     space <name>
///     atom <id> weight <p/q>
///     family <id> start <n0> weight <alpha> ratio <c> map shift <k> into <ids...>
///     family <id> start <n0> weight <alpha> ratio <c> map fanin <target>
///     phi <id> -> <id>
///
/// `#` starts a comment. Errors are input_error with a `line N:` prefix.
Instance parse_instance(std::string_view text);
Instance read_instance_file(const std::string& path);
std::string render_instance(const Instance& instance);

/// Family text, one line per atom:
///
///     P <atom-id> : t1=<p/q> mass=<p/q>, t2=<p/q> mass=<p/q>
///
/// `<atom-id>` is an explicit id, `fam[n]` for one member or `fam[*]` for the whole family.
ProbabilityFamily parse_family(std::string_view text, const MeasureSpace& space);
ProbabilityFamily read_family_file(const std::string& path, const MeasureSpace& space);
std::string render_family(const ProbabilityFamily& family, const MeasureSpace& space);

} // namespace qnc
