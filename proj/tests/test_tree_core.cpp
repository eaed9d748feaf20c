#include "doctest.h"

#include "arboreal/equality.hpp"
#include "arboreal/errors.hpp"
#include "arboreal/matrix_actions.hpp"
#include "arboreal/mealy.hpp"
#include "arboreal/omega.hpp"
#include "arboreal/tree_automorphism.hpp"

#include <atomic>
#include <random>
#include <thread>

using namespace arboreal;

namespace {

const Alphabet kBinary{2, 0};
const Alphabet kOctal{8, 0};

TreeAutomorphism binary_odometer() {
    return saff_padic(AffineElement::translation(2, 1, {Int(1)}, Ring::Integer));
}

Vertex v(const Alphabet& a, std::vector<int> w) { return Vertex(a, std::move(w)); }

// Deterministic pseudorandom automatic elements: short products of rooted
// and p-adic generators of the octal tree.
TreeAutomorphism random_octal_element(std::mt19937& rng) {
    auto [e12, cyc] = sl_generators(3, Ring::Integer, 2);
    const auto t = AffineElement::translation(2, 3, unit_vector(3, 1), Ring::Integer);
    std::vector<TreeAutomorphism> pool = {
        saff_padic(e12),
        saff_padic(cyc),
        saff_padic(t),
        saff_rooted(e12.reduced_mod_p()),
        saff_rooted(cyc.reduced_mod_p()),
        saff_rooted(t.reduced_mod_p()),
        tilde(saff_rooted(t.reduced_mod_p()), OmegaSequence::constant(kOctal, 1)),
    };
    std::uniform_int_distribution<int> len(1, 4);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> flip(0, 1);
    std::vector<TreeAutomorphism> word;
    const int k = len(rng);
    for (int i = 0; i < k; ++i) {
        TreeAutomorphism g = pool[pick(rng)];
        word.push_back(flip(rng) ? inverse(g) : g);
    }
    return compose(std::move(word));
}

} // namespace

TEST_CASE("odometer decomposition is the carry rule") {
    const TreeAutomorphism t1 = binary_odometer();
    const Decomposition& d = t1.decompose();
    CHECK(d.perm == Perm(std::vector<int>{1, 0}));
    CHECK(d.sections[0].is_identity_node());
    CHECK(d.sections[1].same_node(t1));
}

TEST_CASE("rooted automorphisms act on the first letter only") {
    const Perm sigma = Perm::transposition(8, 0, 1);
    const TreeAutomorphism r = rooted(kOctal, sigma);
    const Decomposition& d = r.decompose();
    CHECK(d.perm == sigma);
    for (int x = 0; x < 8; ++x)
        CHECK(d.sections[x].is_identity_node());
    CHECK(r.apply(v(kOctal, {0, 1, 1})) == v(kOctal, {1, 1, 1}));
}

TEST_CASE("omega element decomposition for a constant sequence") {
    const OmegaSequence omega = OmegaSequence::constant(kOctal, 1);
    const TreeAutomorphism g = rooted(kOctal, Perm::cycle(8));
    const TreeAutomorphism gt = tilde(g, omega);
    const Decomposition& d = gt.decompose();
    CHECK(d.perm.is_identity());
    CHECK(d.sections[0].same_node(gt)); // shift of a constant is itself
    CHECK(d.sections[1].same_node(g));
    for (int x = 2; x < 8; ++x)
        CHECK(d.sections[x].is_identity_node());
}

TEST_CASE("evaluate matches little-endian successor arithmetic") {
    const TreeAutomorphism t1 = binary_odometer();
    CHECK(t1.apply(v(kBinary, {1, 1, 0})) == v(kBinary, {0, 0, 1}));
    CHECK(t1.apply(v(kBinary, {1, 1, 1})) == v(kBinary, {0, 0, 0}));
    const TreeAutomorphism id = identity(kBinary);
    CHECK(id.apply(v(kBinary, {0, 1, 1})) == v(kBinary, {0, 1, 1}));
    CHECK_THROWS_AS(t1.apply(Vertex(kOctal, {3})), AlphabetMismatch);
}

TEST_CASE("composition is evaluation in sequence") {
    const TreeAutomorphism t1 = binary_odometer();
    const TreeAutomorphism t2 = compose(t1, t1);
    // Adding two: trivial root permutation, odometer in both sections.
    const TreeAutomorphism expected = wreath(kBinary, Perm(2), {t1, t1});
    CHECK(equals_exact(t2, expected).is_equal());

    CHECK(equals_exact(compose(t1, inverse(t1)), identity(kBinary)).is_equal());

    const Perm sigma = Perm::cycle(8);
    const TreeAutomorphism r = rooted(kOctal, sigma);
    const TreeAutomorphism b =
        tilde(rooted(kOctal, Perm::transposition(8, 1, 2)), OmegaSequence::constant(kOctal, 1));
    const TreeAutomorphism rb = compose(r, b);
    const Decomposition& d = rb.decompose();
    CHECK(d.perm == sigma * b.root_perm());
    for (int x = 0; x < 8; ++x)
        CHECK(equals_exact(d.sections[x], b.section(x)).is_equal());
}

TEST_CASE("inverse laws") {
    const TreeAutomorphism t1 = binary_odometer();
    CHECK(inverse(t1).apply(v(kBinary, {0})) == v(kBinary, {1}));
    const Perm sigma = Perm::cycle(8);
    CHECK(inverse(rooted(kOctal, sigma)).root_perm() == sigma.inverse());
    std::mt19937 rng(7);
    for (int i = 0; i < 10; ++i) {
        const TreeAutomorphism a = random_octal_element(rng);
        CHECK(equals_exact(inverse(inverse(a)), a).is_equal());
        CHECK(equals_exact(compose(a, inverse(a)), identity(kOctal)).is_equal());
    }
}

TEST_CASE("embed_at fixes everything off the subtree") {
    const Perm sigma = Perm::transposition(8, 0, 1);
    const TreeAutomorphism g = rooted(kOctal, sigma);
    CHECK(embed_at(Vertex(kOctal), g).same_node(g));

    const TreeAutomorphism e = embed_at(v(kOctal, {1}), g);
    CHECK(e.apply(v(kOctal, {1, 0})) == v(kOctal, {1, 1}));
    for (int x = 0; x < 8; ++x)
        CHECK(e.apply(v(kOctal, {2, x})) == v(kOctal, {2, x}));
    CHECK(e.apply(v(kOctal, {1})) == v(kOctal, {1}));

    const Decomposition& d = e.decompose();
    CHECK(d.perm.is_identity());
    CHECK(d.sections[1].same_node(g));
    for (int x = 0; x < 8; ++x)
        if (x != 1)
            CHECK(d.sections[x].is_identity_node());
}

TEST_CASE("embed_at distributes over deeper vertices") {
    const TreeAutomorphism g = rooted(kOctal, Perm::cycle(8));
    const Vertex at = v(kOctal, {3, 5});
    const TreeAutomorphism e = embed_at(at, g);
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> letter(0, 7);
    for (int i = 0; i < 20; ++i) {
        std::vector<int> tail{letter(rng), letter(rng)};
        const Vertex w = v(kOctal, tail);
        CHECK(e.apply(at.concat(w)) == at.concat(g.apply(w)));
    }
}

TEST_CASE("equality separates rooted automorphisms with a shortest witness") {
    const Perm sigma = Perm::transposition(8, 2, 5);
    const Verdict verdict = equals_exact(rooted(kOctal, sigma), identity(kOctal));
    REQUIRE(verdict.is_distinct());
    REQUIRE(verdict.witness.has_value());
    CHECK(verdict.witness->length() == 1);
    const int moved = (*verdict.witness)[0];
    CHECK(sigma[moved] != moved);
}

TEST_CASE("equality of section of omega element and shifted element") {
    const OmegaSequence omega =
        OmegaSequence::eventually_periodic(kOctal, {2}, {1});
    const TreeAutomorphism g = rooted(kOctal, Perm::cycle(8));
    const TreeAutomorphism gt = tilde(g, omega);
    CHECK(equals_exact(gt.section(0), tilde(g, shift(omega, 1))).is_equal());
}

TEST_CASE("up-to-level comparison is inconclusive on equals and finds witnesses") {
    const TreeAutomorphism t1 = binary_odometer();
    const Verdict same = equals_up_to_level(compose(t1, inverse(t1)), identity(kBinary), 6);
    CHECK(same.kind == VerdictKind::Inconclusive);
    CHECK(same.level == 6);
    const Verdict diff = equals_up_to_level(t1, identity(kBinary), 6);
    CHECK(diff.is_distinct());
}

TEST_CASE("homomorphism law on random automatic elements") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
        const TreeAutomorphism a = random_octal_element(rng);
        const TreeAutomorphism b = random_octal_element(rng);
        const TreeAutomorphism ab = compose(a, b);
        std::uniform_int_distribution<int> letter(0, 7);
        for (int len = 0; len <= 6; ++len)
            for (int rep = 0; rep < 40; ++rep) {
                std::vector<int> w(len);
                for (int& x : w)
                    x = letter(rng);
                const Vertex vert = v(kOctal, w);
                CHECK(ab.apply(vert) == a.apply(b.apply(vert)));
            }
    }
}

TEST_CASE("wreath law for compositions") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        const TreeAutomorphism a = random_octal_element(rng);
        const TreeAutomorphism b = random_octal_element(rng);
        const Decomposition& da = a.decompose();
        const Decomposition& db = b.decompose();
        const Decomposition& dab = compose(a, b).decompose();
        CHECK(dab.perm == da.perm * db.perm);
        for (int x = 0; x < 8; ++x) {
            const TreeAutomorphism expected = compose(da.sections[db.perm[x]], db.sections[x]);
            CHECK(!equals_up_to_level(dab.sections[x], expected, 5).is_distinct());
        }
    }
}

TEST_CASE("section and evaluate cohere") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> letter(0, 7);
    for (int trial = 0; trial < 10; ++trial) {
        const TreeAutomorphism a = random_octal_element(rng);
        std::vector<int> prefix(2), tail(3);
        for (int& x : prefix)
            x = letter(rng);
        for (int& x : tail)
            x = letter(rng);
        const Vertex pv = v(kOctal, prefix);
        const Vertex tv = v(kOctal, tail);
        CHECK(a.apply(pv.concat(tv)) == a.apply(pv).concat(a.section(pv).apply(tv)));
    }
}

TEST_CASE("exact equality is an equivalence on the automatic fragment") {
    std::mt19937 rng(31);
    std::vector<TreeAutomorphism> xs;
    for (int i = 0; i < 6; ++i)
        xs.push_back(random_octal_element(rng));
    for (const auto& a : xs) {
        CHECK(equals_exact(a, a).is_equal()); // reflexive
        for (const auto& b : xs) {
            const bool ab = equals_exact(a, b).is_equal();
            const bool ba = equals_exact(b, a).is_equal();
            CHECK(ab == ba); // symmetric
            if (!ab)
                continue;
            for (const auto& c : xs) {
                if (equals_exact(b, c).is_equal())
                    CHECK(equals_exact(a, c).is_equal()); // transitive
            }
        }
    }
}

TEST_CASE("distinct witnesses really separate the actions") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const TreeAutomorphism a = random_octal_element(rng);
        const TreeAutomorphism b = random_octal_element(rng);
        const Verdict verdict = equals_exact(a, b);
        if (verdict.is_distinct())
            CHECK(a.apply(*verdict.witness) != b.apply(*verdict.witness));
    }
}

TEST_CASE("alphabet mismatch is rejected") {
    CHECK_THROWS_AS(compose(identity(kBinary), identity(kOctal)), AlphabetMismatch);
    CHECK_THROWS_AS(equals_exact(identity(kBinary), identity(kOctal)), AlphabetMismatch);
    CHECK_THROWS_AS(embed_at(Vertex(kBinary), identity(kOctal)), AlphabetMismatch);
}

TEST_CASE("concurrent reads of shared nodes are safe") {
    const TreeAutomorphism t1 = binary_odometer();
    const TreeAutomorphism big = compose(t1, compose(t1, t1));
    std::vector<std::thread> threads;
    std::atomic<int> failures{0};
    for (int i = 0; i < 4; ++i)
        threads.emplace_back([&] {
            for (int rep = 0; rep < 200; ++rep) {
                const Vertex in = Vertex::from_point(kBinary, 6, rep % 64);
                const std::int64_t out = big.apply(in).to_point();
                if (out != (rep % 64 + 3) % 64)
                    ++failures;
            }
        });
    for (auto& t : threads)
        t.join();
    CHECK(failures.load() == 0);
}
