#pragma once

#include "arboreal/mealy.hpp"
#include "arboreal/numeric.hpp"
#include "arboreal/tree_automorphism.hpp"

#include <vector>

namespace arboreal {

/// |Fix_level(a)|: the number of level-`level` vertices fixed by a, via the
/// memoized recursion fix(s, l) = sum over fixed letters of the child
/// counts. Linear in states * level for automaton-backed input.
Int fixed_count(const TreeAutomorphism& a, int level);

struct VolumeResult {
    Rat value;       // exact when `exact`, else the lower bound
    bool exact = false;
    Rat lower;       // 1 - fixed proportion at the probe level
    Rat upper;       // 1 - proven-identity proportion at the probe level
    int probe_level = 0;

    bool operator==(const VolumeResult&) const = default;
};

/// Support volume: the limit proportion of level vertices moved by a.
/// When the state closure fits under the cap the limit is computed by an
/// exact rational linear solve on the identity-collapsed automaton;
/// otherwise sound bounds from a finite probe are returned.
VolumeResult support_volume(const TreeAutomorphism& a, std::size_t cap = default_closure_cap(),
                            int probe_level = default_level_bound());

/// Exact volume of the automorphism realized by a closed automaton.
Rat exact_volume(const MealyAutomaton& machine);

/// Inverts vol = weight * sum_{i in S} base^-i for a finite S by greedy
/// extraction of the dominating digits. Needs base >= 3 so that the first
/// nonzero term dominates the tail. Throws NotRepresentable when vol is
/// not of this form.
std::vector<int> recover_subset(const Rat& vol, int base, const Rat& weight);

} // namespace arboreal
