#pragma once

#include <stdexcept>
#include <string>

namespace hypodist {

/// Raised when input data violates a documented invariant (bad CSV, mismatched
/// grids, empty restrictions, ...). Precondition violations on plain arguments
/// use std::invalid_argument instead.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridMismatch : public DataError {
public:
    GridMismatch() : DataError("grid mismatch") {}
};

} // namespace hypodist
