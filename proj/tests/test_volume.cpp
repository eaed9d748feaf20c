#include "doctest.h"

#include "arboreal/equality.hpp"
#include "arboreal/errors.hpp"
#include "arboreal/matrix_actions.hpp"
#include "arboreal/mealy.hpp"
#include "arboreal/omega.hpp"
#include "arboreal/volume.hpp"

#include <random>

using namespace arboreal;

namespace {

const Alphabet kBinary{2, 0};
const Alphabet kOctal{8, 0};

TreeAutomorphism binary_odometer() {
    return saff_padic(AffineElement::translation(2, 1, {Int(1)}, Ring::Integer));
}

std::mt19937 g_rng(121212);

TreeAutomorphism random_octal_element(std::mt19937& rng) {
    auto [e12, cyc] = sl_generators(3, Ring::Integer, 2);
    const auto t = AffineElement::translation(2, 3, unit_vector(3, 1), Ring::Integer);
    std::vector<TreeAutomorphism> pool = {
        saff_padic(e12),       saff_padic(cyc),
        saff_padic(t),         saff_rooted(e12.reduced_mod_p()),
        saff_rooted(cyc.reduced_mod_p()), saff_rooted(t.reduced_mod_p()),
        tilde(saff_rooted(t.reduced_mod_p()), OmegaSequence::constant(kOctal, 1)),
    };
    std::uniform_int_distribution<int> len(1, 3);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<TreeAutomorphism> word;
    const int k = len(rng);
    for (int i = 0; i < k; ++i)
        word.push_back(pool[pick(rng)]);
    return compose(std::move(word));
}

Int brute_fixed_count(const TreeAutomorphism& a, int level) {
    std::int64_t points = 1;
    for (int i = 0; i < level; ++i)
        points *= a.alphabet().size;
    Int fixed = 0;
    for (std::int64_t pt = 0; pt < points; ++pt) {
        const Vertex v = Vertex::from_point(a.alphabet(), level, pt);
        if (a.apply(v) == v)
            ++fixed;
    }
    return fixed;
}

} // namespace

TEST_CASE("fixed counts of the basic examples") {
    const TreeAutomorphism t1 = binary_odometer();
    for (int level = 1; level <= 10; ++level)
        CHECK(fixed_count(t1, level) == 0);
    CHECK(fixed_count(t1, 0) == 1);

    // Rooted sigma fixing k letters fixes k * 8^(l-1) vertices.
    const TreeAutomorphism r = rooted(kOctal, Perm::transposition(8, 0, 1));
    for (int level = 1; level <= 4; ++level)
        CHECK(fixed_count(r, level) == 6 * int_pow(8, level - 1));

    // The S = {1} volume family element fixes 48 of the 64 level-2 words.
    const TreeAutomorphism g = commutator_family_element(2, 3, {1});
    CHECK(fixed_count(g, 2) == 48);
    CHECK(brute_fixed_count(g, 2) == 48);
}

TEST_CASE("fixed counts agree with brute force on random elements") {
    for (int trial = 0; trial < 10; ++trial) {
        const TreeAutomorphism a = random_octal_element(g_rng);
        for (int level = 0; level <= 3; ++level)
            CHECK(fixed_count(a, level) == brute_fixed_count(a, level));
    }
}

TEST_CASE("support volumes of closed forms") {
    CHECK(support_volume(binary_odometer()).value == 1);
    CHECK(support_volume(identity(kOctal)).value == 0);
    CHECK(support_volume(rooted(kOctal, Perm::transposition(8, 0, 1))).value == Rat(1, 4));
    CHECK(support_volume(rooted(kOctal, Perm::cycle(8))).value == 1);

    const VolumeResult vr = support_volume(commutator_family_element(2, 3, {1}));
    CHECK(vr.exact);
    CHECK(vr.value == Rat(1, 4));
}

TEST_CASE("volume formulas for the two separation families") {
    // 2 sum p^-(n i) over S, here p^n = 8.
    for (unsigned mask = 0; mask < 8; ++mask) {
        std::vector<int> s;
        for (int i = 0; i < 3; ++i)
            if (mask & (1u << i))
                s.push_back(i + 1);
        Rat expected = 0;
        for (int i : s)
            expected += Rat(2) * rat_pow(Rat(1, 8), static_cast<unsigned long>(i));
        const VolumeResult vr = support_volume(commutator_family_element(2, 3, s));
        CHECK(vr.exact);
        CHECK(vr.value == expected);
    }

    // 2 vol(t) sum |X|^-n with vol(t) = 1 for the full cycle.
    const TreeAutomorphism t = rooted(kOctal, Perm::cycle(8));
    const OmegaSequence omega = OmegaSequence::constant(kOctal, 1);
    for (unsigned mask = 1; mask < 8; ++mask) {
        std::vector<int> s;
        for (int i = 0; i < 3; ++i)
            if (mask & (1u << i))
                s.push_back(i + 1);
        Rat expected = 0;
        for (int i : s)
            expected += Rat(2) * rat_pow(Rat(1, 8), static_cast<unsigned long>(i));
        const VolumeResult vr =
            support_volume(substitution_family_element(t, omega, default_substitution_letters(omega, s)));
        CHECK(vr.exact);
        CHECK(vr.value == expected);
    }
    CHECK(support_volume(substitution_family_element(t, omega, {})).value == 0);
}

TEST_CASE("monotone convergence of the finite-level proportions") {
    std::vector<TreeAutomorphism> cases = {
        commutator_family_element(2, 3, {1}),
        commutator_family_element(2, 3, {1, 3}),
        binary_odometer(),
        rooted(kOctal, Perm::transposition(8, 0, 1)),
    };
    for (const auto& a : cases) {
        const Rat exact = support_volume(a).value;
        Rat previous = 0;
        for (int level = 1; level <= 8; ++level) {
            Int points = int_pow(a.alphabet().size, level);
            const Rat proportion = Rat(1) - Rat(fixed_count(a, level), points);
            CHECK(proportion >= previous);
            CHECK(proportion <= exact);
            previous = proportion;
        }
    }
    // Spot check at level 10: within 1e-3 of the exact value.
    const TreeAutomorphism g = commutator_family_element(2, 3, {2});
    const Rat exact = support_volume(g).value;
    const Rat at10 = Rat(1) - Rat(fixed_count(g, 10), int_pow(8, 10));
    CHECK(exact - at10 >= 0);
    CHECK(exact - at10 <= Rat(1, 1000));
}

TEST_CASE("conjugation invariance of fixed counts") {
    for (int trial = 0; trial < 15; ++trial) {
        const TreeAutomorphism a = random_octal_element(g_rng);
        const TreeAutomorphism alpha = random_octal_element(g_rng);
        const TreeAutomorphism conj = conjugate(alpha, a);
        for (int level = 0; level <= 3; ++level)
            CHECK(fixed_count(a, level) == fixed_count(conj, level));
    }
}

TEST_CASE("volume composition sanity") {
    CHECK(support_volume(identity(kBinary)).value == 0);
    for (int trial = 0; trial < 10; ++trial) {
        const TreeAutomorphism a = random_octal_element(g_rng);
        CHECK(support_volume(a).value == support_volume(inverse(a)).value);
    }
}

TEST_CASE("exact solve matches the deep finite-level proportion") {
    // Holds with the |X|^-6 tail tolerance whenever every state feeds at
    // most one fixed letter into a live child (as the odometer and all the
    // omega-element automata do): the fixed-point iteration then contracts
    // by 1/|X| per level, so twelve levels land well inside the tolerance.
    auto random_machine = [&](int letters, int states) {
        std::vector<Perm> output;
        std::vector<std::vector<int>> next;
        std::uniform_int_distribution<int> target(0, states - 1);
        std::uniform_int_distribution<int> coin(0, 1);
        for (int s = 0; s < states; ++s) {
            std::vector<int> img(letters);
            for (int i = 0; i < letters; ++i)
                img[i] = i;
            if (coin(g_rng))
                std::shuffle(img.begin(), img.end(), g_rng);
            const Perm out(img);
            std::vector<int> row(letters, states); // placeholder = identity
            bool carried = false;
            for (int x = 0; x < letters; ++x) {
                if (out[x] == x) {
                    if (!carried && coin(g_rng)) {
                        row[x] = target(g_rng);
                        carried = true;
                    }
                } else {
                    row[x] = target(g_rng);
                }
            }
            output.push_back(out);
            next.push_back(std::move(row));
        }
        // The extra sink state is the identity.
        output.push_back(Perm(letters));
        next.push_back(std::vector<int>(letters, states));
        return MealyAutomaton(Alphabet{letters, 0}, std::move(output), std::move(next), 0);
    };
    std::vector<std::pair<int, MealyAutomaton>> cases;
    for (int trial = 0; trial < 20; ++trial) {
        const int letters = trial % 2 == 0 ? 2 : 8;
        cases.emplace_back(letters, random_machine(letters, 2 + trial % 5));
    }
    cases.emplace_back(2, *state_closure(binary_odometer()).machine);
    cases.emplace_back(
        8, *state_closure(tilde(rooted(kOctal, Perm::cycle(8)),
                                OmegaSequence::eventually_periodic(kOctal, {2}, {1})))
                .machine);
    for (const auto& [letters, m] : cases) {
        const Rat exact = exact_volume(m);
        const TreeAutomorphism a = from_automaton(std::make_shared<const MealyAutomaton>(m));
        const int deep = 12;
        const Rat proportion = Rat(1) - Rat(fixed_count(a, deep), int_pow(letters, deep));
        const Rat gap = exact - proportion;
        CHECK(gap >= 0);
        CHECK(gap <= rat_pow(Rat(1, letters), 6));
    }
}

TEST_CASE("bounds mode for non-automatic input") {
    // Streamed aperiodic sequence: the closure cannot finish, so the volume
    // report degrades to sound finite-level bounds.
    const OmegaSequence omega = OmegaSequence::streamed(kOctal, [](std::size_t i) {
        std::size_t bits = 0;
        for (std::size_t v = i; v; v >>= 1)
            bits += v & 1;
        return 1 + static_cast<int>(bits % 2);
    });
    const TreeAutomorphism g = tilde(rooted(kOctal, Perm::cycle(8)), omega);
    const VolumeResult vr = support_volume(g, 64, 6);
    CHECK(!vr.exact);
    CHECK(vr.lower <= vr.upper);
    CHECK(vr.lower >= 0);
    CHECK(vr.upper <= 1);
    // The cycle moves every vertex below each marked letter, so the true
    // volume is sum over levels of 8^-k, which is 1/7.
    CHECK(vr.lower <= Rat(1, 7));
    CHECK(vr.upper >= Rat(1, 7));
    CHECK(vr.upper - vr.lower <= Rat(1, 10000));
}

TEST_CASE("subset recovery") {
    CHECK(recover_subset(Rat(1, 4), 8, Rat(2)) == std::vector<int>{1});
    CHECK(recover_subset(Rat(0), 8, Rat(2)) == std::vector<int>{});
    const Rat vol = Rat(2) * (Rat(1, 8) + Rat(1, 512));
    CHECK(recover_subset(vol, 8, Rat(2)) == std::vector<int>{1, 3});

    CHECK_THROWS_AS(recover_subset(Rat(1, 4), 2, Rat(2)), BadParameters);
    CHECK_THROWS_AS(recover_subset(Rat(1, 7), 8, Rat(1)), NotRepresentable);
    CHECK_THROWS_AS(recover_subset(Rat(1, 3), 8, Rat(1)), NotRepresentable);

    // Round trip through the volume family.
    for (unsigned mask = 1; mask < 8; ++mask) {
        std::vector<int> s;
        for (int i = 0; i < 3; ++i)
            if (mask & (1u << i))
                s.push_back(i + 1);
        const VolumeResult vr = support_volume(commutator_family_element(2, 3, s));
        CHECK(recover_subset(vr.value, 8, Rat(2)) == s);
    }
}
