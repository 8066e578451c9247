#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "foamlab/lattice.hpp"

namespace foamlab::cli {

/// Runs one CLI invocation. Exit status: 0 success, 1 computation error,
/// 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Catalog name ("fcc", "d4", "astar3", "z" with `dim`) or a lattice JSON file.
Lattice resolve_lattice(const std::string& source, int dim = -1);

Lattice lattice_from_json_string(const std::string& text);
std::string lattice_to_json_string(const Lattice& lattice);

/// Voronoi cell normalized to inradius 1, as "off" (dim 3) or "json".
std::string export_cell(const Lattice& lattice, const std::string& format);

}  // namespace foamlab::cli
