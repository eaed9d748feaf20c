#pragma once

#include "arboreal/numeric.hpp"
#include "arboreal/perm.hpp"
#include "arboreal/tree_automorphism.hpp"

#include <vector>

namespace arboreal {

/// Projection of an automorphism onto the permutation it induces on the
/// level set X^level, under the little-endian point encoding of words.
Perm level_project(const TreeAutomorphism& a, int level);

/// Permutation group given by a base and strong generating set, built with
/// a deterministic Schreier-Sims (base points are always the smallest
/// moved points, in increasing discovery order). Orders are exact
/// unbounded integers. Instances are immutable after construction and safe
/// to query concurrently.
class LevelGroup {
public:
    explicit LevelGroup(std::vector<Perm> generators);

    int degree() const { return degree_; }
    const std::vector<Perm>& generators() const { return generators_; }

    Int order() const;
    bool contains(const Perm& g) const;

    std::vector<int> base() const;
    std::vector<Perm> strong_generators() const;

    std::vector<std::vector<int>> orbits() const; // on all points, sorted
    bool is_transitive() const;

private:
    struct Layer {
        int beta = 0;
        std::vector<Perm> gens;
        std::vector<int> orbit;   // discovery order, beta first
        std::vector<int> sv_gen;  // point -> generator index, -1 outside orbit
        std::vector<int> sv_from; // point -> predecessor point
        std::vector<Perm> u, uinv; // transversal and inverses, indexed by point

        void recompute_orbit(int degree);
        bool in_orbit(int point) const { return sv_gen[point] != -2; }
        Perm transversal(int point) const; // maps beta to point
    };

    int degree_;
    std::vector<Perm> generators_;
    std::vector<Layer> layers_;

    void seed_generator(const Perm& g);
    std::pair<Perm, std::size_t> strip(Perm g, std::size_t from) const;
    void build();
    void materialize_transversals();
};

/// |Q|^((|X|^level - 1) / (|X| - 1)): the order of the level-truncated
/// iterated wreath product of Q acting on X.
Int wreath_order(int alphabet_size, const Int& q_order, int level);

/// Derived subgroup G' as the normal closure of the generator commutators.
LevelGroup derived_subgroup(const LevelGroup& g);

struct GroupSpec;

struct EqualImageReport {
    int level = 0;
    Int order;
    Int expected;
    bool match = false;
};

/// Compares the exact order of the level image of the spec's generators
/// with the iterated wreath product of the level-1 image.
EqualImageReport equal_image_check(const GroupSpec& spec, int level);

} // namespace arboreal
