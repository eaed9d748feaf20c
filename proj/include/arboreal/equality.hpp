#pragma once

#include "arboreal/alphabet.hpp"
#include "arboreal/tree_automorphism.hpp"

#include <optional>
#include <string>

namespace arboreal {

enum class VerdictKind { Equal, Distinct, Inconclusive };

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::optional<Vertex> witness; // vertex moved differently, for Distinct
    int level = 0;                 // exploration depth, for Inconclusive

    bool is_equal() const { return kind == VerdictKind::Equal; }
    bool is_distinct() const { return kind == VerdictKind::Distinct; }
    std::string to_string() const;
};

/// Decides a = b by bisimulation on the closure of the pair (a, b).
/// Terminates whenever both sides are automatic; throws CapExceeded once
/// more than `pair_cap` state pairs appear. A Distinct verdict carries a
/// shortest-by-search witness vertex.
Verdict equals_exact(const TreeAutomorphism& a, const TreeAutomorphism& b,
                     std::size_t pair_cap = default_pair_cap());

/// Compares the actions on all vertices of length <= level. Returns
/// Inconclusive(level) when no difference shows up.
Verdict equals_up_to_level(const TreeAutomorphism& a, const TreeAutomorphism& b,
                           int level = default_level_bound());

/// Exact identity test via the greatest-fixed-point classification of the
/// closure; throws CapExceeded for non-automatic input.
bool is_identity(const TreeAutomorphism& a, std::size_t cap = default_closure_cap());

} // namespace arboreal
