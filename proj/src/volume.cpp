#include "arboreal/volume.hpp"

#include "arboreal/equality.hpp"
#include "arboreal/errors.hpp"

#include <unordered_map>

namespace arboreal {

namespace {

struct FixKey {
    std::uint64_t node;
    int level;
    bool operator==(const FixKey&) const = default;
};

struct FixKeyHash {
    std::size_t operator()(const FixKey& k) const {
        return std::hash<std::uint64_t>()(k.node * 0x9e3779b97f4a7c15ULL + k.level);
    }
};

Int fixed_count_memo(const TreeAutomorphism& a, int level,
                     std::unordered_map<FixKey, Int, FixKeyHash>& memo) {
    if (level == 0)
        return 1;
    if (a.is_identity_node()) {
        Int total = 1;
        for (int i = 0; i < level; ++i)
            total *= a.alphabet().size;
        return total;
    }
    const FixKey key{a.id(), level};
    auto it = memo.find(key);
    if (it != memo.end())
        return it->second;
    const Decomposition& d = a.decompose();
    Int total = 0;
    for (int x = 0; x < a.alphabet().size; ++x)
        if (d.perm[x] == x)
            total += fixed_count_memo(d.sections[x], level - 1, memo);
    memo.emplace(key, total);
    return total;
}

// True when the section is certainly the identity. Sections that close
// under a small cap are decided exactly; for the rest a depth probe is
// used, which is the documented contract for streamed sequences.
bool proven_identity(const TreeAutomorphism& a,
                     std::unordered_map<FixKey, Int, FixKeyHash>& memo) {
    if (a.is_identity_node())
        return true;
    try {
        return is_identity(a, 256);
    } catch (const CapExceeded&) {
        Int full = 1;
        for (int i = 0; i < 4; ++i)
            full *= a.alphabet().size;
        return fixed_count_memo(a, 4, memo) == full;
    }
}

} // namespace

Int fixed_count(const TreeAutomorphism& a, int level) {
    if (level < 0)
        throw BadParameters("level must be non-negative");
    std::unordered_map<FixKey, Int, FixKeyHash> memo;
    return fixed_count_memo(a, level, memo);
}

Rat exact_volume(const MealyAutomaton& raw) {
    const MealyAutomaton machine = raw.collapsed();
    if (machine.identity() && *machine.identity() == machine.root())
        return Rat(0);

    // Indices of the non-identity states.
    std::vector<int> row_of(machine.size(), -1);
    std::vector<int> states;
    for (int s = 0; s < machine.size(); ++s) {
        if (machine.identity() && *machine.identity() == s)
            continue;
        row_of[s] = static_cast<int>(states.size());
        states.push_back(s);
    }

    // F(s) = (1/|X|) (#fixed letters with identity child
    //                 + sum over fixed letters with live child of F(child)).
    // After the identity collapse I - M is nonsingular: a cycle of total
    // coefficient one would be a family of all-letters-fixed states with
    // all children inside the family, which the collapse removed.
    const int size = machine.alphabet().size;
    const std::size_t m = states.size();
    std::vector<std::vector<Rat>> lhs(m, std::vector<Rat>(m, Rat(0)));
    std::vector<Rat> rhs(m, Rat(0));
    const Rat unit(1, size);
    for (std::size_t r = 0; r < m; ++r) {
        const int s = states[r];
        lhs[r][r] = 1;
        for (int x = 0; x < size; ++x) {
            if (machine.output(s)[x] != x)
                continue;
            const int child = machine.next(s, x);
            if (machine.identity() && *machine.identity() == child)
                rhs[r] += unit;
            else
                lhs[r][row_of[child]] -= unit;
        }
    }
    const std::vector<Rat> f = solve_linear_system(std::move(lhs), std::move(rhs));
    return Rat(1) - f[row_of[machine.root()]];
}

VolumeResult support_volume(const TreeAutomorphism& a, std::size_t cap, int probe_level) {
    VolumeResult result;
    try {
        const ClosureResult closure = state_closure(a, cap);
        result.value = exact_volume(*closure.machine);
        result.exact = true;
        result.lower = result.value;
        result.upper = result.value;
        result.probe_level = 0;
        return result;
    } catch (const CapExceeded&) {
        // Fall through to finite bounds.
    }
    std::unordered_map<FixKey, Int, FixKeyHash> memo;
    Int points = 1;
    for (int i = 0; i < probe_level; ++i)
        points *= a.alphabet().size;
    result.exact = false;
    result.probe_level = probe_level;
    result.lower = Rat(1) - Rat(fixed_count_memo(a, probe_level, memo), points);

    // Count level vertices that are fixed and whose section is proven
    // identity: their entire subtrees stay fixed at every deeper level.
    std::unordered_map<FixKey, Int, FixKeyHash> id_memo;
    auto count_settled = [&](auto&& self, const TreeAutomorphism& node, int depth) -> Int {
        if (depth == 0)
            return proven_identity(node, memo) ? Int(1) : Int(0);
        const FixKey key{node.id(), depth};
        auto it = id_memo.find(key);
        if (it != id_memo.end())
            return it->second;
        Int total = 0;
        const Decomposition& d = node.decompose();
        for (int x = 0; x < node.alphabet().size; ++x)
            if (d.perm[x] == x)
                total += self(self, d.sections[x], depth - 1);
        id_memo.emplace(key, total);
        return total;
    };
    result.upper = Rat(1) - Rat(count_settled(count_settled, a, probe_level), points);
    result.value = result.lower;
    return result;
}

std::vector<int> recover_subset(const Rat& vol, int base, const Rat& weight) {
    if (base < 3)
        throw BadParameters("subset recovery needs base >= 3");
    if (weight <= 0)
        throw BadParameters("weight must be positive");
    if (vol < 0)
        throw NotRepresentable("volume must be non-negative");
    Rat r = vol / weight;
    std::vector<int> subset;
    int prev = 0;
    while (r != 0) {
        // Smallest index n with base^-n <= r; the tail bound for base >= 3
        // forces n = min(S) when r is of the stated form.
        int n = prev + 1;
        Rat term = rat_pow(Rat(1, base), static_cast<unsigned long>(n));
        while (term > r) {
            ++n;
            term /= base;
            if (n > 100000)
                throw NotRepresentable("no finite subset reproduces this volume");
        }
        // Full geometric tail from n: equality means an infinite subset.
        const Rat tail = term * base / (base - 1);
        if (r >= tail)
            throw NotRepresentable("volume is not a finite sum of powers of the base");
        subset.push_back(n);
        r -= term;
        if (r < 0)
            throw NotRepresentable("greedy extraction overshot");
        prev = n;
    }
    return subset;
}

} // namespace arboreal
