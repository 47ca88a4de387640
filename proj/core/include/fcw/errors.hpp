#pragma once

#include <stdexcept>

namespace fcw {

// Unreadable, unparsable, or semantically broken input data (episode files,
// forecast files, episode sets that cannot be scored). Mapped to exit code 2
// by the CLI.
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration or command usage. Mapped to exit code 1 by the CLI.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fcw
