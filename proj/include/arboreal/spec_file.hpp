#pragma once

#include "arboreal/amenability.hpp"
#include "arboreal/omega.hpp"

#include <string>
#include <vector>

namespace arboreal {

/// Declarative group description: preset name, parameters, sequences, and
/// optional requested analyses. Line oriented, `key = value`, with '#'
/// comments. Unknown keys are rejected.
///
///   preset = A            # A | Gamma | M | custom
///   p = 2
///   n = 3
///   omega = "1"           # repeatable
///   generator = rooted A = [[0,1],[1,0]] b = [1,0]   # custom only
///   generator = tilde omega = "2;1" padic A = [[1]] b = [1]
///   analysis = level-order 2                          # repeatable
struct GroupSpecFile {
    GroupSpec spec;
    std::vector<std::string> analyses;

    // First requested level for `analysis = level-order L`, if any.
    std::optional<int> requested_level() const;
};

GroupSpecFile parse_group_spec_file(const std::string& text);
GroupSpecFile load_group_spec_file(const std::string& path);

/// Finite group files: `cyclic m`, or `table N` followed by N rows of N
/// indices, or `perm-group` followed by `perm <img> ...` lines.
FiniteGroupModel parse_finite_group(const std::string& text);
FiniteGroupModel load_finite_group(const std::string& path);

/// Measure literal `x1:p1 x2:p2 ...` with exact rational weights.
RationalMeasure parse_measure(const std::string& text);

/// Comma or space separated integer list.
std::vector<int> parse_int_list(const std::string& text);

} // namespace arboreal
