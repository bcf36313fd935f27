#pragma once

#include <stdexcept>
#include <string>

namespace reldel {

// Malformed or out-of-range user input (bad coordinates, dimension mismatch,
// duplicate points, caps exceeded). The CLI maps these to exit code 2.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition, e.g. asked for the
// circumsphere of an affinely dependent simplex.
struct precondition_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Raised by FilteredComplex validation.
struct complex_error : std::runtime_error {
  enum class kind { missing_face, non_monotone, subcomplex_not_closed, duplicate_cell, bad_value };

  complex_error(kind k, const std::string& what) : std::runtime_error(what), which(k) {}

  kind which;
};

}  // namespace reldel
