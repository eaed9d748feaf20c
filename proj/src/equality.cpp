#include "arboreal/equality.hpp"

#include "arboreal/errors.hpp"
#include "arboreal/mealy.hpp"

#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace arboreal {

std::string Verdict::to_string() const {
    switch (kind) {
    case VerdictKind::Equal:
        return "Equal";
    case VerdictKind::Distinct:
        return "Distinct" + (witness ? witness->to_string() : std::string());
    case VerdictKind::Inconclusive:
        return "Inconclusive(" + std::to_string(level) + ")";
    }
    return "?";
}

namespace {

struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
        return std::hash<std::uint64_t>()(p.first * 0x9e3779b97f4a7c15ULL ^ p.second);
    }
};

struct PairState {
    TreeAutomorphism a, b;
    std::vector<int> path;
};

} // namespace

Verdict equals_exact(const TreeAutomorphism& a, const TreeAutomorphism& b,
                     std::size_t pair_cap) {
    if (!(a.alphabet() == b.alphabet()))
        throw AlphabetMismatch("comparing automorphisms over different alphabets");
    if (a.same_node(b))
        return {VerdictKind::Equal, std::nullopt, 0};

    const int size = a.alphabet().size;
    std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash> visited;
    std::deque<PairState> queue;
    visited.insert({a.id(), b.id()});
    queue.push_back({a, b, {}});

    while (!queue.empty()) {
        PairState cur = std::move(queue.front());
        queue.pop_front();
        const Decomposition& da = cur.a.decompose();
        const Decomposition& db = cur.b.decompose();
        for (int x = 0; x < size; ++x)
            if (da.perm[x] != db.perm[x]) {
                std::vector<int> w = cur.path;
                w.push_back(x);
                return {VerdictKind::Distinct, Vertex(a.alphabet(), std::move(w)),
                        static_cast<int>(cur.path.size()) + 1};
            }
        for (int x = 0; x < size; ++x) {
            const TreeAutomorphism& ca = da.sections[x];
            const TreeAutomorphism& cb = db.sections[x];
            if (ca.same_node(cb))
                continue;
            if (visited.insert({ca.id(), cb.id()}).second) {
                if (visited.size() > pair_cap)
                    throw CapExceeded("pair closure exceeded cap " + std::to_string(pair_cap));
                std::vector<int> w = cur.path;
                w.push_back(x);
                queue.push_back({ca, cb, std::move(w)});
            }
        }
    }
    return {VerdictKind::Equal, std::nullopt, 0};
}

Verdict equals_up_to_level(const TreeAutomorphism& a, const TreeAutomorphism& b, int level) {
    if (!(a.alphabet() == b.alphabet()))
        throw AlphabetMismatch("comparing automorphisms over different alphabets");
    if (level < 0)
        throw BadParameters("level must be non-negative");
    if (a.same_node(b) || level == 0)
        return {VerdictKind::Inconclusive, std::nullopt, level};

    const int size = a.alphabet().size;
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, int, PairHash> best_depth;
    struct Item {
        TreeAutomorphism a, b;
        int depth;
        std::vector<int> path;
    };
    std::deque<Item> queue;
    best_depth[{a.id(), b.id()}] = 0;
    queue.push_back({a, b, 0, {}});

    while (!queue.empty()) {
        Item cur = std::move(queue.front());
        queue.pop_front();
        const Decomposition& da = cur.a.decompose();
        const Decomposition& db = cur.b.decompose();
        for (int x = 0; x < size; ++x)
            if (da.perm[x] != db.perm[x]) {
                std::vector<int> w = cur.path;
                w.push_back(x);
                return {VerdictKind::Distinct, Vertex(a.alphabet(), std::move(w)), cur.depth + 1};
            }
        if (cur.depth + 1 >= level)
            continue;
        for (int x = 0; x < size; ++x) {
            const TreeAutomorphism& ca = da.sections[x];
            const TreeAutomorphism& cb = db.sections[x];
            if (ca.same_node(cb))
                continue;
            const auto key = std::make_pair(ca.id(), cb.id());
            auto it = best_depth.find(key);
            if (it != best_depth.end() && it->second <= cur.depth + 1)
                continue;
            best_depth[key] = cur.depth + 1;
            std::vector<int> w = cur.path;
            w.push_back(x);
            queue.push_back({ca, cb, cur.depth + 1, std::move(w)});
        }
    }
    return {VerdictKind::Inconclusive, std::nullopt, level};
}

bool is_identity(const TreeAutomorphism& a, std::size_t cap) {
    if (a.is_identity_node())
        return true;
    const ClosureResult closure = state_closure(a, cap);
    const MealyAutomaton& m = *closure.machine;
    return m.identity() && *m.identity() == m.root();
}

} // namespace arboreal
