#pragma once

#include "arboreal/affine.hpp"
#include "arboreal/alphabet.hpp"
#include "arboreal/omega_sequence.hpp"
#include "arboreal/perm.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace arboreal {

class MealyAutomaton;
struct AutomorphismNode;
class TreeAutomorphism;

enum class BackendKind { Rooted, Wreath, Affine, Omega, Product, Inverse, Automaton };

/// Root permutation plus one section per letter:
/// a(x w) = perm(x) . sections[x](w).
struct Decomposition {
    Perm perm;
    std::vector<TreeAutomorphism> sections;
};

/// Handle to an immutable, hash-consed automorphism node. Handles with the
/// same structural key share one node, so handle identity is a sound (not
/// complete) equality test; semantic equality is decided by bisimulation
/// (see equality.hpp). All operations are pure and thread-safe.
class TreeAutomorphism {
public:
    const Alphabet& alphabet() const;
    BackendKind kind() const;
    std::uint64_t id() const;

    /// The wreath decomposition, computed lazily and memoized on the node.
    const Decomposition& decompose() const;
    const Perm& root_perm() const { return decompose().perm; }

    TreeAutomorphism section(int letter) const;
    TreeAutomorphism section(const Vertex& vertex) const;

    /// Letterwise action on a vertex; preserves word length.
    Vertex apply(const Vertex& vertex) const;

    bool same_node(const TreeAutomorphism& other) const { return node_ == other.node_; }
    bool is_identity_node() const;

    // Payload accessors; only valid for the matching backend kind.
    const AffineElement& affine_payload() const;
    const OmegaSequence& omega_payload() const;
    const std::vector<TreeAutomorphism>& factors() const;

private:
    explicit TreeAutomorphism(std::shared_ptr<const AutomorphismNode> node)
        : node_(std::move(node)) {}
    std::shared_ptr<const AutomorphismNode> node_;
    friend struct NodeFactory;
};

TreeAutomorphism identity(const Alphabet& alphabet);
TreeAutomorphism rooted(const Alphabet& alphabet, const Perm& perm);

/// Explicit wreath element: given root permutation and all sections.
TreeAutomorphism wreath(const Alphabet& alphabet, const Perm& perm,
                        std::vector<TreeAutomorphism> sections);

/// compose(a, b) applies b first: result(v) = a(b(v)).
TreeAutomorphism compose(const TreeAutomorphism& a, const TreeAutomorphism& b);
TreeAutomorphism compose(std::vector<TreeAutomorphism> word);
TreeAutomorphism inverse(const TreeAutomorphism& a);

// [a, b] = a b a^-1 b^-1 and h g h^-1.
TreeAutomorphism commutator(const TreeAutomorphism& a, const TreeAutomorphism& b);
TreeAutomorphism conjugate(const TreeAutomorphism& h, const TreeAutomorphism& g);

/// iota_v: act as g on the subtree below v, fix everything else.
TreeAutomorphism embed_at(const Vertex& v, const TreeAutomorphism& g);

/// The omega-element g~ with sections (at o: g~ over the shifted sequence,
/// at the sequence head: g, identity elsewhere). A homomorphism in g.
TreeAutomorphism tilde(const TreeAutomorphism& g, const OmegaSequence& omega);

/// Self-similar action of an integral affine map on the p-adic tree.
/// Internal factory; matrix_actions.hpp exposes the checked entry points.
TreeAutomorphism from_affine(const AffineElement& element);

TreeAutomorphism from_automaton(std::shared_ptr<const MealyAutomaton> machine, int state);

inline Vertex evaluate(const TreeAutomorphism& a, const Vertex& v) { return a.apply(v); }

// Tunable default caps. The CLI honors ARBOREAL_CAP as an override.
std::size_t default_closure_cap();
std::size_t default_pair_cap();
int default_level_bound();
void set_default_closure_cap(std::size_t cap);

} // namespace arboreal
