#pragma once

#include "arboreal/affine.hpp"
#include "arboreal/equality.hpp"
#include "arboreal/perm.hpp"
#include "arboreal/tree_automorphism.hpp"

#include <optional>
#include <tuple>
#include <vector>

namespace arboreal {

/// Letter permutation x -> Ax + b of an affine element on the alphabet
/// {0..p-1}^n under the little-endian digit encoding.
Perm affine_letter_perm(const AffineElement& e);

/// Rooted automorphism of T_{p,n} induced by an affine map over F_p.
TreeAutomorphism saff_rooted(const AffineElement& e);

/// Self-similar automorphism of T_{p,n} induced by an integral affine map:
/// the section at letter x is (A, b') where Ax + b = x' + p b'.
TreeAutomorphism saff_padic(const AffineElement& e);

struct PerfectnessWitness {
    int n = 0, i = 0, j = 0, p = 2;
    AffineElement commutator; // [T_{-e_j}, E_{i,j}] multiplied out over Z
    AffineElement target;     // T_{e_i}
    bool symbolic_equal = false;
    Verdict tree_verdict;     // level-bounded check of the p-adic realizations

    bool equal() const { return symbolic_equal && !tree_verdict.is_distinct(); }
};

/// The commutator identity that writes unit translations as commutators in
/// the special affine group. Checked symbolically over Z and on the tree.
PerfectnessWitness perfectness_witness(int n, int i, int j, int p = 2, int tree_level = 5);

/// Finite permutation action given by generators on one level set.
struct PermImage {
    Alphabet alphabet;
    std::vector<Perm> generators;
};

/// Searches the point stabilizer of `fixed` (through its Schreier
/// generators) for an element moving `moved`.
std::optional<Perm> stabilizer_witness(const PermImage& q, int fixed, int moved);

struct PropertyHReport {
    bool transitive = false;
    // (x, y, witness in St(x) moving y) for every ordered pair x != y.
    std::vector<std::tuple<int, int, std::optional<Perm>>> witnesses;
    bool pass = false;
};

/// Level-1 transitivity plus, for every ordered pair x != y, a stabilizer
/// of x moving y.
PropertyHReport property_h_check(const PermImage& q);

} // namespace arboreal
