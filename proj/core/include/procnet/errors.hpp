#pragma once

#include <stdexcept>

namespace procnet {

/// Input data that cannot be analyzed: unreadable files, malformed rows past
/// the rejection limit, empty markets. The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace procnet
