#pragma once

#include <string>

#include "bbiso/group.hpp"

namespace bbiso {

struct GroupFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses a group description document (kinds zmod, perm, matmod, semidirect).
// Unknown fields, malformed generators and inconsistent orders raise
// GroupFormatError.
GroupHandle parse_group(const std::string& text);
GroupHandle load_group_file(const std::string& path);

// Inverse of parse_group for the base backends.
std::string serialize_group(const GroupHandle& g);

}  // namespace bbiso
