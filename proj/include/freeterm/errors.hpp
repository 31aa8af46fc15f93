#pragma once

#include <stdexcept>
#include <string>

namespace freeterm {

/// Malformed or inconsistent input (bad file, invalid ids, violated precondition).
/// CLI maps this to exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A requested construction or check would exceed a documented size cap.
/// CLI maps this to exit code 3.
struct cap_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace freeterm
