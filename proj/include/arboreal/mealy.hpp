#pragma once

#include "arboreal/alphabet.hpp"
#include "arboreal/numeric.hpp"
#include "arboreal/perm.hpp"
#include "arboreal/tree_automorphism.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace arboreal {

/// Finite-state closure of an automorphism: per-state output permutation
/// and per-letter successor state. Trimmed to the part reachable from the
/// root state. At most one state is distinguished as the identity; it has
/// trivial output and all self-transitions.
class MealyAutomaton {
public:
    MealyAutomaton(Alphabet alphabet, std::vector<Perm> output,
                   std::vector<std::vector<int>> next, int root,
                   std::optional<int> identity = std::nullopt,
                   std::vector<std::string> names = {});

    const Alphabet& alphabet() const { return alphabet_; }
    int size() const { return static_cast<int>(output_.size()); }
    int root() const { return root_; }
    std::optional<int> identity() const { return identity_; }
    const Perm& output(int state) const { return output_[state]; }
    int next(int state, int letter) const { return next_[state][letter]; }
    const std::string& name(int state) const { return names_[state]; }
    std::uint64_t uid() const { return uid_; }

    /// Greatest-fixed-point identity classification: a state is flagged iff
    /// its output is trivial and every successor is flagged.
    std::vector<bool> identity_classes() const;

    /// Merges all identity-classified states into one distinguished state.
    MealyAutomaton collapsed() const;

    int state_at(const Vertex& v) const;

    /// Census theta(l) = number of length-l words whose state is not
    /// identity-classified, for l = 0..max_level.
    std::vector<Int> census(int max_level) const;

    std::string to_text() const;
    static MealyAutomaton parse(const std::string& text);
    static MealyAutomaton parse(std::istream& in);

private:
    Alphabet alphabet_;
    std::vector<Perm> output_;
    std::vector<std::vector<int>> next_;
    int root_;
    std::optional<int> identity_;
    std::vector<std::string> names_;
    std::uint64_t uid_;

    void trim();
};

struct ClosureResult {
    std::shared_ptr<const MealyAutomaton> machine;
    std::vector<TreeAutomorphism> state_nodes; // representative per state
    std::vector<Vertex> witnesses;             // shortest vertex reaching each state
};

/// Closes the set of sections reachable from `a`, identifying states by
/// structural key. Throws CapExceeded when more than `cap` distinct states
/// appear, which signals that `a` is not witnessed automatic within the cap.
ClosureResult state_closure(const TreeAutomorphism& a, std::size_t cap = default_closure_cap());

struct ActivityClass {
    enum class Tag { Bounded, Polynomial, Exponential };
    Tag tag = Tag::Bounded;
    int degree = 0; // only for Polynomial, >= 1

    bool operator==(const ActivityClass&) const = default;
    std::string to_string() const;

    static ActivityClass bounded() { return {Tag::Bounded, 0}; }
    static ActivityClass polynomial(int d) { return {Tag::Polynomial, d}; }
    static ActivityClass exponential() { return {Tag::Exponential, 0}; }
};

/// Growth class of the census function: exponential iff some reachable
/// strongly connected component of the non-identity sub-diagram is not a
/// single simple cycle; otherwise polynomial of degree (max number of
/// cyclic components on a directed path) - 1, with degree 0 reported as
/// Bounded.
ActivityClass activity_class(const MealyAutomaton& m);

inline TreeAutomorphism from_automaton(std::shared_ptr<const MealyAutomaton> machine) {
    const int root = machine->root();
    return from_automaton(std::move(machine), root);
}

} // namespace arboreal
