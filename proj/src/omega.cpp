#include "arboreal/omega.hpp"

#include "arboreal/errors.hpp"

#include <algorithm>

namespace arboreal {

namespace {

bool is_prime(int p) {
    if (p < 2)
        return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

std::vector<AffineElement> saff_triple(int p, int n, Ring ring) {
    auto [e12, cyc] = sl_generators(n, ring, p);
    return {e12, cyc, AffineElement::translation(p, n, unit_vector(n, 1), ring)};
}

std::vector<AffineElement> saff_full(int p, int n, Ring ring) {
    std::vector<AffineElement> out;
    const std::vector<Int> zero(n, Int(0));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (i != j)
                out.emplace_back(p, n, IntMat::elementary(n, i, j), zero, ring);
    for (int k = 1; k <= n; ++k)
        out.push_back(AffineElement::translation(p, n, unit_vector(n, k), ring));
    return out;
}

void validate_preset(PresetTag tag, int p, int n, const std::vector<OmegaSequence>& omegas,
                     const Alphabet& alphabet) {
    if (!is_prime(p))
        throw BadParameters("preset modulus must be prime");
    if (n < 3)
        throw BadParameters("presets need n >= 3");
    if (omegas.empty())
        throw BadParameters("presets need at least one sequence");
    if (tag == PresetTag::A && omegas.size() != 1)
        throw BadParameters("preset A takes exactly one sequence");
    for (const auto& omega : omegas)
        if (!(omega.alphabet() == alphabet))
            throw AlphabetMismatch("sequence alphabet does not match the preset");
}

std::vector<TreeAutomorphism> realize(const std::vector<AffineElement>& elements, bool padic) {
    std::vector<TreeAutomorphism> out;
    out.reserve(elements.size());
    for (const auto& e : elements)
        out.push_back(padic ? saff_padic(e) : saff_rooted(e));
    return out;
}

std::vector<TreeAutomorphism> preset_generators(PresetTag tag, int p, int n,
                                                const std::vector<OmegaSequence>& omegas,
                                                bool full_sets,
                                                std::vector<TreeAutomorphism>* base_out) {
    std::vector<TreeAutomorphism> base;
    if (tag == PresetTag::A || tag == PresetTag::M) {
        auto rootedGens = realize(full_sets ? saff_full(p, n, Ring::ModP)
                                            : saff_triple(p, n, Ring::ModP),
                                  false);
        base.insert(base.end(), rootedGens.begin(), rootedGens.end());
    }
    if (tag == PresetTag::Gamma || tag == PresetTag::M) {
        auto padicGens = realize(full_sets ? saff_full(p, n, Ring::Integer)
                                           : saff_triple(p, n, Ring::Integer),
                                 true);
        base.insert(base.end(), padicGens.begin(), padicGens.end());
    }
    std::vector<TreeAutomorphism> gens = base;
    for (const auto& omega : omegas)
        for (const auto& g : base)
            gens.push_back(tilde(g, omega));
    if (base_out)
        *base_out = std::move(base);
    return gens;
}

} // namespace

GroupSpec make_preset(PresetTag tag, int p, int n, std::vector<OmegaSequence> omegas) {
    if (tag == PresetTag::Custom)
        throw BadParameters("custom specs need an explicit generator list");
    GroupSpec spec;
    spec.preset = tag;
    spec.p = p;
    spec.n = n;
    spec.alphabet.size = 1;
    for (int i = 0; i < n; ++i) {
        spec.alphabet.size *= p;
        if (spec.alphabet.size > (1 << 20))
            throw BadParameters("alphabet p^n is too large");
    }
    spec.alphabet.distinguished = 0;
    validate_preset(tag, p, n, omegas, spec.alphabet);
    spec.omegas = std::move(omegas);
    spec.generators = preset_generators(tag, p, n, spec.omegas, false, &spec.base_generators);
    return spec;
}

GroupSpec make_custom(Alphabet alphabet, std::vector<TreeAutomorphism> generators,
                      std::vector<OmegaSequence> omegas) {
    alphabet.validate();
    if (generators.empty())
        throw BadParameters("custom spec needs at least one generator");
    for (const auto& g : generators)
        if (!(g.alphabet() == alphabet))
            throw AlphabetMismatch("generator alphabet does not match the spec");
    for (const auto& omega : omegas)
        if (!(omega.alphabet() == alphabet))
            throw AlphabetMismatch("sequence alphabet does not match the spec");
    GroupSpec spec;
    spec.preset = PresetTag::Custom;
    spec.alphabet = alphabet;
    spec.omegas = std::move(omegas);
    spec.generators = generators;
    spec.base_generators = std::move(generators);
    return spec;
}

const std::vector<TreeAutomorphism>& group_generators(const GroupSpec& spec) {
    // Preset arithmetic is part of the contract.
    const std::size_t families =
        spec.preset == PresetTag::M ? 2 : (spec.preset == PresetTag::Custom ? 0 : 1);
    if (families != 0) {
        const std::size_t expected = 3 * families * (1 + spec.omegas.size());
        if (spec.generators.size() != expected)
            throw InvariantViolation("preset generator count mismatch");
    }
    return spec.generators;
}

std::vector<TreeAutomorphism> enlarged_generators(const GroupSpec& spec) {
    if (spec.preset == PresetTag::Custom)
        return spec.generators;
    return preset_generators(spec.preset, spec.p, spec.n, spec.omegas, true, nullptr);
}

PermImage level_one_image(const GroupSpec& spec) {
    PermImage image;
    image.alphabet = spec.alphabet;
    for (const auto& g : group_generators(spec))
        image.generators.push_back(g.root_perm());
    return image;
}

RistWitness rist_witness(const TreeAutomorphism& k, const TreeAutomorphism& g,
                         const TreeAutomorphism& h, const OmegaSequence& omega) {
    const Alphabet& alphabet = k.alphabet();
    if (!(g.alphabet() == alphabet) || !(h.alphabet() == alphabet) ||
        !(omega.alphabet() == alphabet))
        throw AlphabetMismatch("witness inputs over different alphabets");
    const int head = omega.head();
    const int o = alphabet.distinguished;
    const Perm& sigma_h = h.root_perm();
    if (sigma_h[head] != head)
        throw PreconditionFailed("h must fix the sequence head");
    if (sigma_h[o] == o)
        throw PreconditionFailed("h must move the distinguished letter");

    const TreeAutomorphism lhs = commutator(tilde(k, omega), conjugate(h, tilde(g, omega)));
    const TreeAutomorphism h_head = h.section(head);
    const TreeAutomorphism rhs =
        embed_at(Vertex(alphabet, {head}), commutator(k, conjugate(h_head, g)));
    return RistWitness{lhs, rhs, equals_exact(lhs, rhs)};
}

RistWitness slide_identity(const TreeAutomorphism& g, const OmegaSequence& omega) {
    const Alphabet& alphabet = g.alphabet();
    if (!(omega.alphabet() == alphabet))
        throw AlphabetMismatch("sequence over a different alphabet");
    const TreeAutomorphism lhs =
        compose(tilde(g, omega), inverse(embed_at(Vertex(alphabet, {omega.head()}), g)));
    const TreeAutomorphism rhs =
        embed_at(Vertex(alphabet, {alphabet.distinguished}), tilde(g, shift(omega, 1)));
    return RistWitness{lhs, rhs, equals_exact(lhs, rhs)};
}

OmegaSequence marked_sequence(int p, int n, const std::vector<int>& s, bool primed) {
    Alphabet alphabet;
    alphabet.size = 1;
    for (int i = 0; i < n; ++i)
        alphabet.size *= p;
    alphabet.distinguished = 0;
    const int e1 = digits_letter(p, n, [&] {
        std::vector<int> d(n, 0);
        d[0] = 1;
        return d;
    }());
    const int e2 = digits_letter(p, n, [&] {
        std::vector<int> d(n, 0);
        d[1] = 1;
        return d;
    }());
    const int e1e2 = digits_letter(p, n, [&] {
        std::vector<int> d(n, 0);
        d[0] = 1;
        d[1] = 1;
        return d;
    }());
    int max_pos = 0;
    for (int i : s) {
        if (i < 1)
            throw BadParameters("subset positions are 1-based");
        max_pos = std::max(max_pos, i);
    }
    std::vector<int> pre(max_pos, e1);
    for (int i : s)
        pre[i - 1] = primed ? e1e2 : e2;
    return OmegaSequence::eventually_periodic(alphabet, std::move(pre), {e1});
}

TreeAutomorphism commutator_family_element(int p, int n, const std::vector<int>& s) {
    if (n < 3)
        throw BadParameters("the volume family needs n >= 3");
    if (!is_prime(p))
        throw BadParameters("modulus must be prime");
    const OmegaSequence omega = marked_sequence(p, n, s, false);
    const AffineElement a(p, n, IntMat::elementary(n, 1, 2), std::vector<Int>(n, Int(0)),
                          Ring::Integer);
    const AffineElement t = AffineElement::translation(p, n, unit_vector(n, 1), Ring::Integer);
    return commutator(saff_padic(a), tilde(saff_padic(t), omega));
}

std::map<int, int> default_substitution_letters(const OmegaSequence& omega, const std::vector<int>& s) {
    const Alphabet& alphabet = omega.alphabet();
    if (alphabet.size < 3)
        throw BadParameters("substitution needs at least three letters");
    std::map<int, int> z;
    for (int i : s) {
        if (i < 1)
            throw BadParameters("subset positions are 1-based");
        const int avoid = omega.at(static_cast<std::size_t>(i));
        for (int letter = 0; letter < alphabet.size; ++letter)
            if (letter != alphabet.distinguished && letter != avoid) {
                z[i] = letter;
                break;
            }
    }
    return z;
}

TreeAutomorphism substitution_family_element(const TreeAutomorphism& t, const OmegaSequence& omega,
                              const std::map<int, int>& z) {
    const Alphabet& alphabet = t.alphabet();
    if (!(omega.alphabet() == alphabet))
        throw AlphabetMismatch("sequence over a different alphabet");
    if (z.empty())
        return identity(alphabet);
    int max_pos = 0;
    for (const auto& [pos, letter] : z) {
        if (pos < 1)
            throw BadParameters("substitution positions are 1-based");
        if (letter == alphabet.distinguished || letter == omega.at(static_cast<std::size_t>(pos)))
            throw BadParameters("substitution letter collides at position " +
                                std::to_string(pos));
        max_pos = std::max(max_pos, pos);
    }

    OmegaSequence primed = omega;
    if (omega.is_eventually_periodic()) {
        std::vector<int> pre;
        for (int i = 1; i <= max_pos; ++i) {
            auto it = z.find(i);
            pre.push_back(it != z.end() ? it->second : omega.at(static_cast<std::size_t>(i)));
        }
        const OmegaSequence tail = shift(omega, static_cast<std::size_t>(max_pos));
        std::vector<int> per = tail.preperiod();
        // The shift of an eventually periodic sequence has empty preperiod
        // only after full absorption; splice whatever remains.
        pre.insert(pre.end(), per.begin(), per.end());
        primed = OmegaSequence::eventually_periodic(alphabet, std::move(pre), tail.period());
    } else {
        auto zz = z;
        primed = OmegaSequence::streamed(
            alphabet,
            [omega, zz](std::size_t index) {
                auto it = zz.find(static_cast<int>(index));
                return it != zz.end() ? it->second : omega.at(index);
            });
    }
    return compose(inverse(tilde(t, omega)), tilde(t, primed));
}

} // namespace arboreal
