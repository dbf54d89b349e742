#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qnc/measure_space.hpp"

namespace qnc {

/// identity, exampleB, shift, remark, cycle3, fanin
std::vector<std::string> builtin_names();
/// Space-file text of a builtin; input_error for unknown names.
std::string builtin_text(std::string_view name);
Instance builtin(std::string_view name);

} // namespace qnc
