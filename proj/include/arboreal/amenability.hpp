#pragma once

#include "arboreal/numeric.hpp"
#include "arboreal/perm.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace arboreal {

/// Finite group given by its multiplication table. Elements are the
/// indices 0..size-1.
class FiniteGroupModel {
public:
    static FiniteGroupModel cyclic(int m);
    static FiniteGroupModel from_table(std::vector<std::vector<int>> table);
    static FiniteGroupModel from_permutations(const std::vector<Perm>& generators,
                                              int element_cap = 100000);
    static FiniteGroupModel direct_product(const FiniteGroupModel& a, const FiniteGroupModel& b);

    int size() const { return n_; }
    int identity_element() const { return id_; }
    int mul(int a, int b) const { return table_[std::size_t(a) * n_ + b]; }
    int inv(int a) const { return inv_[a]; }

private:
    FiniteGroupModel() = default;
    int n_ = 0;
    int id_ = 0;
    std::vector<int> table_; // row-major
    std::vector<int> inv_;

    void finish_init(); // identity, inverses, associativity spot-check
};

/// Finitely supported probability measure with exact positive rational
/// weights summing to one.
class RationalMeasure {
public:
    explicit RationalMeasure(std::map<int, Rat> weights);
    static RationalMeasure uniform(const std::vector<int>& support);
    static RationalMeasure dirac(int element);

    const std::map<int, Rat>& weights() const { return weights_; }
    Rat at(int element) const;
    std::size_t support_size() const { return weights_.size(); }
    bool is_symmetric(const FiniteGroupModel& g) const;

private:
    std::map<int, Rat> weights_;
};

/// || lambda*_g(mu) - mu ||_1 computed exactly; lambda*_g(mu)({x}) = mu({gx}).
Rat reiter_norm(const FiniteGroupModel& g, const RationalMeasure& mu, int element);

struct FolnerCertificate {
    std::vector<int> s;
    Rat eps;
    std::vector<int> f;
    long long sf_size = 0;
    bool minimal = false; // true when found by exhaustive search

    // |SF| <= (1+eps)|F| holds by construction.
};

/// Smallest F with |SF| <= (1+eps)|F|. Exhaustive over all subsets for
/// |G| <= 24 (certified minimal); greedy ball growth beyond that (flagged
/// non-minimal). Returns nullopt only when size_cap cuts the search short.
std::optional<FolnerCertificate> folner_search(const FiniteGroupModel& g,
                                               const std::vector<int>& s, const Rat& eps,
                                               int size_cap = -1);

/// |SE \ E| / |E| for symmetric S.
Rat boundary_ratio(const FiniteGroupModel& g, const std::vector<int>& s,
                   const std::vector<int>& e);

/// Uniform measure on E; its Reiter norms equal |g^-1 E delta E| / |E|.
RationalMeasure folner_to_reiter(const FiniteGroupModel& g, const std::vector<int>& e);

/// Some level set E_mu(t) with |boundary| <= eps' |E|, given that the total
/// Reiter defect over S is below eps'. Existence is guaranteed; failure to
/// find one raises InvariantViolation.
std::vector<int> reiter_levelset(const FiniteGroupModel& g, const RationalMeasure& mu,
                                 const std::vector<int>& s, const Rat& eps_prime);

/// Pushforward along a verified homomorphism (given as an image table).
/// Asserts exactly that no Reiter norm grows and the support cannot.
RationalMeasure pushforward(const FiniteGroupModel& g, const FiniteGroupModel& h,
                            const std::vector<int>& hom, const RationalMeasure& mu);

struct KestenResult {
    std::vector<Rat> p2n;                          // p_2, p_4, ...
    std::vector<std::pair<Rat, Rat>> root_brackets; // isolating 2n-th root intervals
};

/// Exact return probabilities of the mu-random walk at even times, via
/// convolution powers in the group algebra; roots are bracketed to 1e-3.
KestenResult kesten_return(const FiniteGroupModel& g, const RationalMeasure& mu, int n_max);

/// Empirical lower bound for the uniformity profile m(eps, k): the largest
/// minimal Folner size over the given groups and candidate generating sets
/// (all of size <= k).
int m_profile(const std::vector<std::pair<FiniteGroupModel, std::vector<std::vector<int>>>>&
                  groups_with_sets,
              const Rat& eps, int k);

} // namespace arboreal
