#include "arboreal/matrix_actions.hpp"

#include "arboreal/errors.hpp"

#include <deque>

namespace arboreal {

Perm affine_letter_perm(const AffineElement& e) {
    int size = 1;
    for (int i = 0; i < e.n; ++i)
        size *= e.p;
    std::vector<int> images(size);
    for (int letter = 0; letter < size; ++letter) {
        const std::vector<int> digits = letter_digits(e.p, e.n, letter);
        std::vector<int> out(e.n);
        for (int i = 0; i < e.n; ++i) {
            Int y = e.b[i];
            for (int j = 0; j < e.n; ++j)
                y += e.a.at(i, j) * digits[j];
            Int r = y % e.p;
            if (r < 0)
                r += e.p;
            out[i] = static_cast<int>(r);
        }
        images[letter] = digits_letter(e.p, e.n, out);
    }
    return Perm(std::move(images));
}

TreeAutomorphism saff_rooted(const AffineElement& e) {
    if (e.ring != Ring::ModP)
        throw BadParameters("saff_rooted needs a mod-p affine element");
    Alphabet alphabet;
    alphabet.size = 1;
    for (int i = 0; i < e.n; ++i)
        alphabet.size *= e.p;
    alphabet.distinguished = 0;
    return rooted(alphabet, affine_letter_perm(e));
}

TreeAutomorphism saff_padic(const AffineElement& e) {
    if (e.ring != Ring::Integer)
        throw BadParameters("saff_padic needs an integral affine element");
    return from_affine(e);
}

PerfectnessWitness perfectness_witness(int n, int i, int j, int p, int tree_level) {
    if (n < 2)
        throw BadIndices("perfectness witness needs n >= 2");
    if (i < 1 || j < 1 || i >= j || j > n)
        throw BadIndices("perfectness witness needs 1 <= i < j <= n");
    PerfectnessWitness w;
    w.n = n;
    w.i = i;
    w.j = j;
    w.p = p;

    std::vector<Int> minus_ej(n, Int(0));
    minus_ej[j - 1] = -1;
    const AffineElement t_minus(p, n, IntMat::identity(n), minus_ej, Ring::Integer);
    const AffineElement eij(p, n, IntMat::elementary(n, i, j), std::vector<Int>(n, Int(0)),
                            Ring::Integer);
    w.commutator =
        t_minus.compose(eij).compose(t_minus.inverse()).compose(eij.inverse());
    w.target = AffineElement::translation(p, n, unit_vector(n, i), Ring::Integer);
    w.symbolic_equal = w.commutator == w.target;

    const TreeAutomorphism lhs =
        commutator(saff_padic(t_minus), saff_padic(eij));
    const TreeAutomorphism rhs = saff_padic(w.target);
    w.tree_verdict = equals_up_to_level(lhs, rhs, tree_level);
    return w;
}

std::optional<Perm> stabilizer_witness(const PermImage& q, int fixed, int moved) {
    const int degree = q.alphabet.size;
    if (fixed < 0 || fixed >= degree || moved < 0 || moved >= degree || fixed == moved)
        throw BadIndices("stabilizer witness needs two distinct letters");
    // Orbit of `fixed` with explicit transversal; the Schreier generators
    // u(s(pt))^-1 s u(pt) generate the stabilizer, so if none of them moves
    // `moved` then nothing in the stabilizer does.
    std::vector<int> orbit{fixed};
    std::vector<Perm> u(degree);
    std::vector<bool> seen(degree, false);
    seen[fixed] = true;
    u[fixed] = Perm(degree);
    for (std::size_t idx = 0; idx < orbit.size(); ++idx) {
        const int pt = orbit[idx];
        for (const Perm& s : q.generators) {
            const int img = s[pt];
            if (!seen[img]) {
                seen[img] = true;
                u[img] = s * u[pt];
                orbit.push_back(img);
            }
        }
    }
    // Deterministic choice among the qualifying Schreier generators: least
    // moved letter first, then lexicographically least image array.
    std::optional<Perm> best;
    auto least_moved = [](const Perm& g) {
        for (int x = 0; x < g.degree(); ++x)
            if (g[x] != x)
                return x;
        return g.degree();
    };
    for (int pt : orbit)
        for (const Perm& s : q.generators) {
            const Perm schreier = u[s[pt]].inverse() * (s * u[pt]);
            if (schreier[moved] == moved)
                continue;
            if (!best || std::make_pair(least_moved(schreier), schreier.images()) <
                             std::make_pair(least_moved(*best), best->images()))
                best = schreier;
        }
    return best;
}

PropertyHReport property_h_check(const PermImage& q) {
    PropertyHReport report;
    const int degree = q.alphabet.size;
    for (const Perm& g : q.generators)
        if (g.degree() != degree)
            throw DegreeMismatch("permutation image degree differs from alphabet");

    std::vector<bool> reached(degree, false);
    std::deque<int> queue{0};
    reached[0] = true;
    int count = 1;
    while (!queue.empty()) {
        const int pt = queue.front();
        queue.pop_front();
        for (const Perm& g : q.generators) {
            const int img = g[pt];
            if (!reached[img]) {
                reached[img] = true;
                ++count;
                queue.push_back(img);
            }
        }
    }
    report.transitive = count == degree;

    report.pass = report.transitive;
    for (int x = 0; x < degree; ++x)
        for (int y = 0; y < degree; ++y) {
            if (x == y)
                continue;
            auto witness = stabilizer_witness(q, x, y);
            if (!witness)
                report.pass = false;
            report.witnesses.emplace_back(x, y, std::move(witness));
        }
    return report;
}

} // namespace arboreal
