#pragma once

#include <stdexcept>
#include <string>

namespace evosmc {

// Exception families map one-to-one onto the CLI exit codes.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ingest_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a request exceeds a hard cap (brute-force enumeration size,
// bloom filter memory).
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace evosmc
