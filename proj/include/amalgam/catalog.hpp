#pragma once

#include <string>
#include <vector>

#include "amalgam/perm_group.hpp"

namespace amalgam {

// Resolves a named catalog group: Sym(n), Alt(n), Cyclic(n), Dihedral(n) in
// their natural degree-n actions, and Klein4 as the regular degree-4 action.
// Throws parse_error for names outside the catalog.
PermGroup catalog_group(const std::string& name);

// True if the name has catalog form (used to distinguish names from typos
// before attempting file resolution).
bool is_catalog_name(const std::string& name);

// Parses the textual group format:
//   degree n
//   (0 1 2 3)
//   (1 3)
// One generator per line in 0-based disjoint-cycle notation; "()" is the
// identity; blank lines and lines starting with '#' are skipped.
PermGroup parse_group_text(const std::string& text);

// Resolves a CLI group argument: "@path" reads the file through
// parse_group_text, anything else must be a catalog name.
PermGroup resolve_group(const std::string& arg);

// Catalog entries with degree at most max_degree and order at most max_order,
// paired with their names (used by the verification suites).
std::vector<std::pair<std::string, PermGroup>> catalog_transitive_upto(
    std::size_t max_degree, std::uint64_t max_order);

}  // namespace amalgam
