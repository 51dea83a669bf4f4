#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcg {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An unknown sort, token or entry was referenced.
struct lookup_error : error {
  using error::error;
};

// Malformed surface text. `position` is a zero-based byte offset into the
// text that was being parsed.
struct syntax_error : error {
  syntax_error(const std::string& what, std::size_t position)
      : error(what + " at offset " + std::to_string(position)),
        position(position) {}

  std::size_t position;
};

// Well-formed input that violates a structural invariant.
struct validation_error : error {
  using error::error;
};

// The normalizer ran out of its step budget.
struct normalization_error : error {
  using error::error;
};

}  // namespace qcg
