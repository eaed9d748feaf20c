#include "arboreal/amenability.hpp"

#include "arboreal/errors.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace arboreal {

void FiniteGroupModel::finish_init() {
    if (n_ <= 0)
        throw BadParameters("group must be non-empty");
    // Find the identity.
    id_ = -1;
    for (int e = 0; e < n_ && id_ < 0; ++e) {
        bool ok = true;
        for (int a = 0; a < n_ && ok; ++a)
            ok = mul(e, a) == a && mul(a, e) == a;
        if (ok)
            id_ = e;
    }
    if (id_ < 0)
        throw BadParameters("multiplication table has no identity");
    inv_.assign(n_, -1);
    for (int a = 0; a < n_; ++a) {
        for (int b = 0; b < n_; ++b)
            if (mul(a, b) == id_ && mul(b, a) == id_) {
                inv_[a] = b;
                break;
            }
        if (inv_[a] < 0)
            throw BadParameters("element without inverse in table");
    }
    // Associativity spot-check on 100 pseudorandom triples; a full check is
    // cubic and unnecessary for the supported constructors.
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> pick(0, n_ - 1);
    for (int trial = 0; trial < 100; ++trial) {
        const int a = pick(rng), b = pick(rng), c = pick(rng);
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
            throw BadParameters("multiplication table is not associative");
    }
}

FiniteGroupModel FiniteGroupModel::cyclic(int m) {
    if (m < 1)
        throw BadParameters("cyclic group order must be positive");
    FiniteGroupModel g;
    g.n_ = m;
    g.table_.resize(std::size_t(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            g.table_[std::size_t(a) * m + b] = (a + b) % m;
    g.finish_init();
    return g;
}

FiniteGroupModel FiniteGroupModel::from_table(std::vector<std::vector<int>> table) {
    FiniteGroupModel g;
    g.n_ = static_cast<int>(table.size());
    g.table_.reserve(std::size_t(g.n_) * g.n_);
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != g.n_)
            throw BadParameters("multiplication table is not square");
        for (int v : row) {
            if (v < 0 || v >= g.n_)
                throw BadParameters("table entry out of range");
            g.table_.push_back(v);
        }
    }
    g.finish_init();
    return g;
}

FiniteGroupModel FiniteGroupModel::from_permutations(const std::vector<Perm>& generators,
                                                     int element_cap) {
    if (generators.empty())
        throw BadParameters("permutation group needs at least one generator");
    const int degree = generators.front().degree();
    for (const auto& g : generators)
        if (g.degree() != degree)
            throw DegreeMismatch("generator degrees differ");
    std::vector<Perm> elements{Perm(degree)};
    std::map<Perm, int> index{{elements[0], 0}};
    for (std::size_t i = 0; i < elements.size(); ++i)
        for (const auto& g : generators) {
            Perm next = g * elements[i];
            if (index.emplace(next, static_cast<int>(elements.size())).second) {
                elements.push_back(std::move(next));
                if (static_cast<int>(elements.size()) > element_cap)
                    throw CapExceeded("permutation group enumeration exceeded cap");
            }
        }
    FiniteGroupModel model;
    model.n_ = static_cast<int>(elements.size());
    model.table_.resize(std::size_t(model.n_) * model.n_);
    for (int a = 0; a < model.n_; ++a)
        for (int b = 0; b < model.n_; ++b)
            model.table_[std::size_t(a) * model.n_ + b] = index.at(elements[a] * elements[b]);
    model.finish_init();
    return model;
}

FiniteGroupModel FiniteGroupModel::direct_product(const FiniteGroupModel& a,
                                                  const FiniteGroupModel& b) {
    FiniteGroupModel g;
    g.n_ = a.size() * b.size();
    g.table_.resize(std::size_t(g.n_) * g.n_);
    auto code = [&](int x, int y) { return x * b.size() + y; };
    for (int x1 = 0; x1 < a.size(); ++x1)
        for (int y1 = 0; y1 < b.size(); ++y1)
            for (int x2 = 0; x2 < a.size(); ++x2)
                for (int y2 = 0; y2 < b.size(); ++y2)
                    g.table_[std::size_t(code(x1, y1)) * g.n_ + code(x2, y2)] =
                        code(a.mul(x1, x2), b.mul(y1, y2));
    g.finish_init();
    return g;
}

RationalMeasure::RationalMeasure(std::map<int, Rat> weights) : weights_(std::move(weights)) {
    if (weights_.empty())
        throw BadParameters("measure needs non-empty support");
    Rat total = 0;
    for (const auto& [element, weight] : weights_) {
        if (weight <= 0)
            throw BadParameters("measure weights must be positive");
        total += weight;
    }
    if (total != 1)
        throw BadParameters("measure weights must sum to one");
}

RationalMeasure RationalMeasure::uniform(const std::vector<int>& support) {
    if (support.empty())
        throw BadParameters("uniform measure needs non-empty support");
    std::map<int, Rat> w;
    const Rat unit(1, static_cast<long long>(support.size()));
    for (int x : support)
        if (!w.emplace(x, unit).second)
            throw BadParameters("duplicate element in support");
    return RationalMeasure(std::move(w));
}

RationalMeasure RationalMeasure::dirac(int element) {
    return RationalMeasure({{element, Rat(1)}});
}

Rat RationalMeasure::at(int element) const {
    auto it = weights_.find(element);
    return it == weights_.end() ? Rat(0) : it->second;
}

bool RationalMeasure::is_symmetric(const FiniteGroupModel& g) const {
    for (const auto& [element, weight] : weights_)
        if (at(g.inv(element)) != weight)
            return false;
    return true;
}

Rat reiter_norm(const FiniteGroupModel& g, const RationalMeasure& mu, int element) {
    // Only points of supp(mu) and g^-1 supp(mu) contribute.
    std::set<int> points;
    const int ginv = g.inv(element);
    for (const auto& [x, weight] : mu.weights()) {
        points.insert(x);
        points.insert(g.mul(ginv, x));
    }
    Rat total = 0;
    for (int x : points) {
        const Rat diff = mu.at(g.mul(element, x)) - mu.at(x);
        total += diff < 0 ? -diff : diff;
    }
    return total;
}

namespace {

// |S*F| <= (1+eps)|F| with S* = S + identity, compared exactly in
// integers. Folding the identity in makes the condition equivalent to the
// isoperimetric bound |boundary| <= eps |F| for symmetric S.
bool folner_ok(long long sf, long long f, const Rat& eps) {
    const Int lhs = Int(sf) * denominator(eps);
    const Int rhs = Int(f) * (denominator(eps) + numerator(eps));
    return lhs <= rhs;
}

} // namespace

std::optional<FolnerCertificate> folner_search(const FiniteGroupModel& g,
                                               const std::vector<int>& s, const Rat& eps,
                                               int size_cap) {
    if (s.empty())
        throw BadParameters("Folner search needs a non-empty multiplier set");
    if (eps <= 0)
        throw BadParameters("epsilon must be positive");
    const int n = g.size();
    if (size_cap < 0 || size_cap > n)
        size_cap = n;

    std::vector<int> s_star = s;
    if (std::find(s_star.begin(), s_star.end(), g.identity_element()) == s_star.end())
        s_star.push_back(g.identity_element());

    if (n <= 24) {
        // Exhaustive search over subsets in increasing cardinality; left
        // translation tables as bitmasks keep each candidate cheap.
        std::vector<std::vector<int>> smul(s_star.size(), std::vector<int>(n));
        for (std::size_t si = 0; si < s_star.size(); ++si)
            for (int x = 0; x < n; ++x)
                smul[si][x] = g.mul(s_star[si], x);
        for (int k = 1; k <= size_cap; ++k) {
            // Lexicographically ordered k-combinations of 0..n-1.
            std::vector<int> comb(k);
            for (int i = 0; i < k; ++i)
                comb[i] = i;
            while (true) {
                std::uint32_t sf = 0;
                for (int x : comb)
                    for (std::size_t si = 0; si < s_star.size(); ++si)
                        sf |= 1u << smul[si][x];
                const long long sf_size = __builtin_popcount(sf);
                if (folner_ok(sf_size, k, eps)) {
                    FolnerCertificate cert;
                    cert.s = s;
                    cert.eps = eps;
                    cert.f = comb;
                    cert.sf_size = sf_size;
                    cert.minimal = true;
                    return cert;
                }
                int i = k - 1;
                while (i >= 0 && comb[i] == n - k + i)
                    --i;
                if (i < 0)
                    break;
                ++comb[i];
                for (int j = i + 1; j < k; ++j)
                    comb[j] = comb[j - 1] + 1;
            }
        }
        return std::nullopt;
    }

    // Ball growth heuristic; not certified minimal.
    std::set<int> ball{g.identity_element()};
    while (true) {
        std::set<int> sf;
        for (int x : ball)
            for (int si : s_star)
                sf.insert(g.mul(si, x));
        if (folner_ok(static_cast<long long>(sf.size()), static_cast<long long>(ball.size()),
                      eps)) {
            if (static_cast<int>(ball.size()) > size_cap)
                return std::nullopt;
            FolnerCertificate cert;
            cert.s = s;
            cert.eps = eps;
            cert.f.assign(ball.begin(), ball.end());
            cert.sf_size = static_cast<long long>(sf.size());
            cert.minimal = false;
            return cert;
        }
        std::set<int> grown = ball;
        for (int x : ball)
            for (int si : s) {
                grown.insert(g.mul(si, x));
                grown.insert(g.mul(g.inv(si), x));
            }
        if (grown == ball)
            return std::nullopt; // stuck in a proper subgroup shell
        ball = std::move(grown);
    }
}

Rat boundary_ratio(const FiniteGroupModel& g, const std::vector<int>& s,
                   const std::vector<int>& e) {
    if (e.empty())
        throw BadParameters("boundary needs a non-empty set");
    std::set<int> sset(s.begin(), s.end());
    for (int x : sset)
        if (!sset.count(g.inv(x)))
            throw NotSymmetric("multiplier set is not symmetric");
    std::set<int> eset(e.begin(), e.end());
    std::set<int> boundary;
    for (int x : eset)
        for (int si : sset) {
            const int y = g.mul(si, x);
            if (!eset.count(y))
                boundary.insert(y);
        }
    return Rat(static_cast<long long>(boundary.size()), static_cast<long long>(eset.size()));
}

RationalMeasure folner_to_reiter(const FiniteGroupModel& g, const std::vector<int>& e) {
    (void)g;
    return RationalMeasure::uniform(e);
}

std::vector<int> reiter_levelset(const FiniteGroupModel& g, const RationalMeasure& mu,
                                 const std::vector<int>& s, const Rat& eps_prime) {
    Rat defect = 0;
    for (int si : s)
        defect += reiter_norm(g, mu, si);
    if (!(defect < eps_prime))
        throw PreconditionFailed("total Reiter defect must be below epsilon'");

    // Distinct thresholds are the distinct weights, scanned from above.
    std::set<Rat, std::greater<Rat>> thresholds;
    for (const auto& [element, weight] : mu.weights())
        thresholds.insert(weight);
    for (const Rat& t : thresholds) {
        std::vector<int> level;
        for (const auto& [element, weight] : mu.weights())
            if (weight >= t)
                level.push_back(element);
        std::set<int> eset(level.begin(), level.end());
        std::set<int> boundary;
        for (int x : level)
            for (int si : s) {
                const int y = g.mul(si, x);
                if (!eset.count(y))
                    boundary.insert(y);
            }
        if (Rat(static_cast<long long>(boundary.size())) <=
            eps_prime * Rat(static_cast<long long>(level.size())))
            return level;
    }
    throw InvariantViolation("no level set satisfies the isoperimetric bound");
}

RationalMeasure pushforward(const FiniteGroupModel& g, const FiniteGroupModel& h,
                            const std::vector<int>& hom, const RationalMeasure& mu) {
    if (static_cast<int>(hom.size()) != g.size())
        throw NotHomomorphism("homomorphism table has wrong length");
    for (int v : hom)
        if (v < 0 || v >= h.size())
            throw NotHomomorphism("homomorphism image out of range");
    for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b)
            if (hom[g.mul(a, b)] != h.mul(hom[a], hom[b]))
                throw NotHomomorphism("image table is not multiplicative");

    std::map<int, Rat> weights;
    for (const auto& [element, weight] : mu.weights())
        weights[hom[element]] += weight;
    for (auto it = weights.begin(); it != weights.end();)
        it = it->second == 0 ? weights.erase(it) : std::next(it);
    RationalMeasure out(std::move(weights));

    if (out.support_size() > mu.support_size())
        throw InvariantViolation("pushforward enlarged the support");
    for (int a = 0; a < g.size(); ++a)
        if (reiter_norm(h, out, hom[a]) > reiter_norm(g, mu, a))
            throw InvariantViolation("pushforward increased a Reiter norm");
    return out;
}

KestenResult kesten_return(const FiniteGroupModel& g, const RationalMeasure& mu, int n_max) {
    if (n_max < 1)
        throw BadParameters("n_max must be at least 1");
    if (!mu.is_symmetric(g))
        throw NotSymmetric("random walk measure must be symmetric");

    KestenResult result;
    // Dense convolution powers; supports stay inside G.
    std::vector<Rat> power(g.size(), Rat(0));
    power[g.identity_element()] = 1;
    auto convolve = [&](const std::vector<Rat>& left) {
        std::vector<Rat> out(g.size(), Rat(0));
        for (int x = 0; x < g.size(); ++x) {
            if (left[x] == 0)
                continue;
            for (const auto& [y, weight] : mu.weights())
                out[g.mul(x, y)] += left[x] * weight;
        }
        return out;
    };
    for (int step = 1; step <= 2 * n_max; ++step) {
        power = convolve(power);
        if (step % 2 == 0)
            result.p2n.push_back(power[g.identity_element()]);
    }
    for (int n = 1; n <= n_max; ++n) {
        const Rat p = result.p2n[n - 1];
        // Largest k/1000 with (k/1000)^(2n) <= p.
        const unsigned long e = 2UL * static_cast<unsigned long>(n);
        long lo = 0, hi = 1000;
        while (lo < hi) {
            const long mid = (lo + hi + 1) / 2;
            if (rat_pow(Rat(mid, 1000), e) <= p)
                lo = mid;
            else
                hi = mid - 1;
        }
        result.root_brackets.emplace_back(Rat(lo, 1000), Rat(lo + 1, 1000));
    }
    return result;
}

int m_profile(const std::vector<std::pair<FiniteGroupModel, std::vector<std::vector<int>>>>&
                  groups_with_sets,
              const Rat& eps, int k) {
    int worst = 0;
    for (const auto& [group, sets] : groups_with_sets)
        for (const auto& s : sets) {
            if (static_cast<int>(s.size()) > k)
                throw BadParameters("candidate set exceeds the size bound");
            const auto cert = folner_search(group, s, eps);
            if (!cert)
                throw InvariantViolation("whole group always certifies; search failed");
            worst = std::max(worst, static_cast<int>(cert->f.size()));
        }
    return worst;
}

} // namespace arboreal
