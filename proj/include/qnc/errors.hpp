#pragma once

#include <stdexcept>
#include <string>

namespace qnc {

/// Malformed input: bad space/family files, unknown ids, invalid construction arguments.
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A hypothesis required by an operation does not hold (nonsingularity, dense definedness, ...).
class precondition_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 0/0, inf/inf and similar expressions that have no conventional value.
class arithmetic_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The result of an operation falls outside the finitely representable function class.
class representation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two routes that must agree did not. Always a bug in the library.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace qnc
