#include "arboreal/permgrp.hpp"

#include "arboreal/errors.hpp"
#include "arboreal/omega.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace arboreal {

Perm level_project(const TreeAutomorphism& a, int level) {
    if (level < 0)
        throw BadParameters("level must be non-negative");
    std::int64_t degree = 1;
    for (int i = 0; i < level; ++i)
        degree *= a.alphabet().size;
    std::vector<int> images(degree);
    for (std::int64_t point = 0; point < degree; ++point) {
        const Vertex v = Vertex::from_point(a.alphabet(), level, point);
        images[point] = static_cast<int>(a.apply(v).to_point());
    }
    return Perm(std::move(images));
}

void LevelGroup::Layer::recompute_orbit(int degree) {
    orbit.clear();
    sv_gen.assign(degree, -2);
    sv_from.assign(degree, -1);
    u.clear();
    uinv.clear();
    orbit.push_back(beta);
    sv_gen[beta] = -1;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        const int p = orbit[i];
        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
            const int q = gens[gi][p];
            if (sv_gen[q] == -2) {
                sv_gen[q] = static_cast<int>(gi);
                sv_from[q] = p;
                orbit.push_back(q);
            }
        }
    }
}

Perm LevelGroup::Layer::transversal(int point) const {
    // Walk the Schreier vector back to beta.
    Perm out(static_cast<int>(sv_gen.size()));
    int p = point;
    while (sv_gen[p] != -1) {
        out = out * gens[sv_gen[p]];
        p = sv_from[p];
    }
    // out maps beta to point after reversing the walk order below.
    // The walk composed generators from the point side, which already
    // yields u with u(beta) = point when multiplied in this order.
    return out;
}

LevelGroup::LevelGroup(std::vector<Perm> generators) : generators_(std::move(generators)) {
    if (generators_.empty())
        throw BadParameters("a permutation group needs at least one generator");
    degree_ = generators_.front().degree();
    for (const auto& g : generators_)
        if (g.degree() != degree_)
            throw DegreeMismatch("generator degrees differ");
    build();
    materialize_transversals();
}

void LevelGroup::seed_generator(const Perm& g) {
    if (g.is_identity())
        return;
    std::size_t lev = 0;
    while (true) {
        if (lev == layers_.size()) {
            Layer layer;
            for (int p = 0; p < degree_; ++p)
                if (g[p] != p) {
                    layer.beta = p;
                    break;
                }
            layers_.push_back(std::move(layer));
        }
        layers_[lev].gens.push_back(g);
        if (g[layers_[lev].beta] != layers_[lev].beta)
            break;
        ++lev;
    }
}

std::pair<Perm, std::size_t> LevelGroup::strip(Perm g, std::size_t from) const {
    for (std::size_t lev = from; lev < layers_.size(); ++lev) {
        const Layer& layer = layers_[lev];
        const int image = g[layer.beta];
        if (image == layer.beta)
            continue;
        if (!layer.in_orbit(image))
            return {std::move(g), lev};
        g = layer.transversal(image).inverse() * g;
    }
    return {std::move(g), layers_.size()};
}

void LevelGroup::build() {
    for (const auto& g : generators_)
        seed_generator(g);
    if (layers_.empty())
        return; // trivial group
    for (auto& layer : layers_)
        layer.recompute_orbit(degree_);

    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(layers_.size()) - 1;
    while (i >= 0) {
        layers_[i].recompute_orbit(degree_);
        bool restart = false;
        const std::size_t orbit_size = layers_[i].orbit.size();
        const std::size_t gen_count = layers_[i].gens.size();
        for (std::size_t oi = 0; oi < orbit_size && !restart; ++oi) {
            const int p = layers_[i].orbit[oi];
            const Perm up = layers_[i].transversal(p);
            for (std::size_t gi = 0; gi < gen_count && !restart; ++gi) {
                const Perm s = layers_[i].gens[gi];
                const int q = s[p];
                // Skip the tree edge that defined q: its Schreier generator
                // is trivial by construction.
                if (layers_[i].sv_gen[q] == static_cast<int>(gi) && layers_[i].sv_from[q] == p)
                    continue;
                Perm schreier = layers_[i].transversal(q).inverse() * (s * up);
                if (schreier.is_identity())
                    continue;
                auto [residue, stop] = strip(std::move(schreier), i + 1);
                if (residue.is_identity())
                    continue;
                if (stop == layers_.size()) {
                    Layer fresh;
                    for (int point = 0; point < degree_; ++point)
                        if (residue[point] != point) {
                            fresh.beta = point;
                            break;
                        }
                    layers_.push_back(std::move(fresh));
                }
                for (std::size_t k = i + 1; k <= stop; ++k) {
                    layers_[k].gens.push_back(residue);
                    layers_[k].recompute_orbit(degree_);
                }
                i = static_cast<std::ptrdiff_t>(stop);
                restart = true;
            }
        }
        if (!restart)
            --i;
    }
}

void LevelGroup::materialize_transversals() {
    for (auto& layer : layers_) {
        layer.u.assign(degree_, Perm());
        layer.uinv.assign(degree_, Perm());
        for (int p : layer.orbit) {
            layer.u[p] = layer.transversal(p);
            layer.uinv[p] = layer.u[p].inverse();
        }
    }
}

Int LevelGroup::order() const {
    Int result = 1;
    for (const auto& layer : layers_)
        result *= static_cast<unsigned long>(layer.orbit.size());
    return result;
}

bool LevelGroup::contains(const Perm& g) const {
    if (g.degree() != degree_)
        throw DegreeMismatch("membership query with wrong degree");
    Perm r = g;
    for (const auto& layer : layers_) {
        const int image = r[layer.beta];
        if (image == layer.beta)
            continue;
        if (!layer.in_orbit(image))
            return false;
        r = layer.uinv[image] * r;
    }
    return r.is_identity();
}

std::vector<int> LevelGroup::base() const {
    std::vector<int> b;
    b.reserve(layers_.size());
    for (const auto& layer : layers_)
        b.push_back(layer.beta);
    return b;
}

std::vector<Perm> LevelGroup::strong_generators() const {
    std::vector<Perm> out;
    for (const auto& layer : layers_)
        for (const auto& g : layer.gens)
            if (std::find(out.begin(), out.end(), g) == out.end())
                out.push_back(g);
    return out;
}

std::vector<std::vector<int>> LevelGroup::orbits() const {
    std::vector<int> owner(degree_, -1);
    std::vector<std::vector<int>> result;
    for (int start = 0; start < degree_; ++start) {
        if (owner[start] != -1)
            continue;
        std::vector<int> orbit{start};
        owner[start] = static_cast<int>(result.size());
        for (std::size_t i = 0; i < orbit.size(); ++i)
            for (const auto& g : generators_) {
                const int q = g[orbit[i]];
                if (owner[q] == -1) {
                    owner[q] = owner[start];
                    orbit.push_back(q);
                }
            }
        std::sort(orbit.begin(), orbit.end());
        result.push_back(std::move(orbit));
    }
    return result;
}

bool LevelGroup::is_transitive() const {
    return orbits().size() == 1;
}

Int wreath_order(int alphabet_size, const Int& q_order, int level) {
    if (level < 0)
        throw BadParameters("level must be non-negative");
    if (alphabet_size < 2)
        throw BadParameters("alphabet needs at least two letters");
    // exponent = 1 + |X| + ... + |X|^(level-1)
    Int exponent = 0;
    Int power = 1;
    for (int i = 0; i < level; ++i) {
        exponent += power;
        power *= alphabet_size;
    }
    Int result = 1;
    Int base = q_order;
    Int e = exponent;
    while (e > 0) {
        if ((e & 1) != 0)
            result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

LevelGroup derived_subgroup(const LevelGroup& g) {
    const auto& gens = g.generators();
    std::vector<Perm> kgens;
    auto add_if_new = [&](const Perm& candidate) {
        if (candidate.is_identity())
            return false;
        if (std::find(kgens.begin(), kgens.end(), candidate) != kgens.end())
            return false;
        kgens.push_back(candidate);
        return true;
    };
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            const Perm c =
                gens[i] * gens[j] * gens[i].inverse() * gens[j].inverse();
            add_if_new(c);
        }
    if (kgens.empty())
        return LevelGroup({Perm(g.degree())});

    // Normal closure: conjugate the current generating set by the group
    // generators, sifting each conjugate, until nothing new appears.
    while (true) {
        LevelGroup k(kgens);
        bool grew = false;
        const std::size_t snapshot = kgens.size();
        for (std::size_t i = 0; i < snapshot && !grew; ++i)
            for (const auto& h : gens) {
                const Perm c = h * kgens[i] * h.inverse();
                if (!k.contains(c) && add_if_new(c)) {
                    grew = true;
                    break;
                }
            }
        if (!grew)
            return k;
    }
}

EqualImageReport equal_image_check(const GroupSpec& spec, int level) {
    const auto& gens = group_generators(spec);
    EqualImageReport report;
    report.level = level;
    if (level == 0) {
        report.order = 1;
        report.expected = 1;
        report.match = true;
        return report;
    }
    std::vector<Perm> level1;
    for (const auto& g : gens)
        level1.push_back(level_project(g, 1));
    const Int q_order = LevelGroup(level1).order();
    std::vector<Perm> projected;
    for (const auto& g : gens)
        projected.push_back(level_project(g, level));
    report.order = LevelGroup(projected).order();
    report.expected = wreath_order(spec.alphabet.size, q_order, level);
    report.match = report.order == report.expected;
    return report;
}

} // namespace arboreal
