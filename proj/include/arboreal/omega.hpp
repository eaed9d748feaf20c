#pragma once

#include "arboreal/equality.hpp"
#include "arboreal/matrix_actions.hpp"
#include "arboreal/omega_sequence.hpp"
#include "arboreal/tree_automorphism.hpp"

#include <map>
#include <vector>

namespace arboreal {

enum class PresetTag { A, Gamma, M, Custom };

/// A finitely generated subgroup of Aut(T_X) described by a preset (the
/// rooted family over F_p, the p-adic family over Z, or their merge, each
/// together with the omega-elements of its generators) or by an explicit
/// generator list.
struct GroupSpec {
    PresetTag preset = PresetTag::Custom;
    int p = 0;
    int n = 0;
    Alphabet alphabet;
    std::vector<OmegaSequence> omegas;
    std::vector<TreeAutomorphism> generators;
    std::vector<TreeAutomorphism> base_generators; // underlying G, no omega-elements
};

/// Preset generator lists. A: 3 rooted affine generators and their
/// omega-elements (6 total, exactly one sequence). Gamma: 3 p-adic
/// generators plus 3 per sequence. M: both families, 6(1 + |omegas|).
GroupSpec make_preset(PresetTag tag, int p, int n, std::vector<OmegaSequence> omegas);

GroupSpec make_custom(Alphabet alphabet, std::vector<TreeAutomorphism> generators,
                      std::vector<OmegaSequence> omegas = {});

const std::vector<TreeAutomorphism>& group_generators(const GroupSpec& spec);

/// Same presets over the full natural generating sets (every elementary
/// matrix and every unit translation). Used to certify that the small
/// two-generator choice for SL_n generates the same finite quotients.
std::vector<TreeAutomorphism> enlarged_generators(const GroupSpec& spec);

/// Level-1 image of the spec's generators as a permutation action.
PermImage level_one_image(const GroupSpec& spec);

struct RistWitness {
    TreeAutomorphism lhs;
    TreeAutomorphism rhs;
    Verdict verdict;
};

/// The rigid-stabilizer witness identity: with h fixing the sequence head
/// and moving o,
///   [k~, h g~ h^-1]  =  iota_{head}([k, h_head g h_head^-1]).
/// Precondition violations raise PreconditionFailed.
RistWitness rist_witness(const TreeAutomorphism& k, const TreeAutomorphism& g,
                         const TreeAutomorphism& h, const OmegaSequence& omega);

/// Companion identity g~ iota_{head}(g)^-1 = iota_o(g~ over the shifted
/// sequence).
RistWitness slide_identity(const TreeAutomorphism& g, const OmegaSequence& omega);

/// Element with support volume 2 * sum_{i in S} p^{-n i}: the commutator of
/// the p-adic elementary matrix E(1,2) with the omega-element of the unit
/// translation over the sequence that marks the positions of S with e_2
/// (with e_1 + e_2 in the primed variant).
TreeAutomorphism commutator_family_element(int p, int n, const std::vector<int>& s);
OmegaSequence marked_sequence(int p, int n, const std::vector<int>& s, bool primed);

/// Element (t~ over omega)^-1 (t~ over omega') where omega' substitutes the
/// letters z[i] at the positions i in keys(z). Its support volume is
/// 2 vol(t) sum |X|^-i. Empty substitution yields the identity.
TreeAutomorphism substitution_family_element(const TreeAutomorphism& t, const OmegaSequence& omega,
                              const std::map<int, int>& z);

/// Smallest valid substitution letters for the positions in s.
std::map<int, int> default_substitution_letters(const OmegaSequence& omega, const std::vector<int>& s);

} // namespace arboreal
