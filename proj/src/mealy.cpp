#include "arboreal/mealy.hpp"

#include "arboreal/errors.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace arboreal {

namespace {

std::uint64_t next_machine_uid() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

} // namespace

MealyAutomaton::MealyAutomaton(Alphabet alphabet, std::vector<Perm> output,
                               std::vector<std::vector<int>> next, int root,
                               std::optional<int> identity, std::vector<std::string> names)
    : alphabet_(alphabet), output_(std::move(output)), next_(std::move(next)), root_(root),
      identity_(identity), names_(std::move(names)), uid_(next_machine_uid()) {
    alphabet_.validate();
    const int n = size();
    if (n == 0)
        throw BadParameters("automaton needs at least one state");
    if (static_cast<int>(next_.size()) != n)
        throw BadParameters("automaton output/transition tables disagree");
    for (int s = 0; s < n; ++s) {
        if (output_[s].degree() != alphabet_.size)
            throw BadParameters("state output degree differs from alphabet size");
        if (static_cast<int>(next_[s].size()) != alphabet_.size)
            throw BadParameters("transition arity differs from alphabet size");
        for (int t : next_[s])
            if (t < 0 || t >= n)
                throw BadParameters("transition target out of range");
    }
    if (root_ < 0 || root_ >= n)
        throw BadParameters("root state out of range");
    if (identity_) {
        const int s = *identity_;
        if (s < 0 || s >= n)
            throw BadParameters("identity state out of range");
        if (!output_[s].is_identity())
            throw BadParameters("identity state must have trivial output");
        for (int x = 0; x < alphabet_.size; ++x)
            if (next_[s][x] != s)
                throw BadParameters("identity state must have self-transitions");
    }
    if (names_.empty()) {
        names_.resize(n);
        for (int s = 0; s < n; ++s)
            names_[s] = (identity_ && *identity_ == s) ? "id" : "s" + std::to_string(s);
    } else if (static_cast<int>(names_.size()) != n) {
        throw BadParameters("state name list has wrong length");
    }
    trim();
}

void MealyAutomaton::trim() {
    const int n = size();
    std::vector<int> order;
    std::vector<int> index(n, -1);
    order.push_back(root_);
    index[root_] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int x = 0; x < alphabet_.size; ++x) {
            const int t = next_[order[i]][x];
            if (index[t] < 0) {
                index[t] = static_cast<int>(order.size());
                order.push_back(t);
            }
        }
    if (static_cast<int>(order.size()) == n)
        return;
    std::vector<Perm> output;
    std::vector<std::vector<int>> next;
    std::vector<std::string> names;
    for (int s : order) {
        output.push_back(std::move(output_[s]));
        names.push_back(std::move(names_[s]));
        std::vector<int> row(alphabet_.size);
        for (int x = 0; x < alphabet_.size; ++x)
            row[x] = index[next_[s][x]];
        next.push_back(std::move(row));
    }
    output_ = std::move(output);
    next_ = std::move(next);
    names_ = std::move(names);
    root_ = 0;
    if (identity_)
        identity_ = index[*identity_] >= 0 ? std::optional<int>(index[*identity_]) : std::nullopt;
}

std::vector<bool> MealyAutomaton::identity_classes() const {
    const int n = size();
    std::vector<bool> flagged(n);
    for (int s = 0; s < n; ++s)
        flagged[s] = output_[s].is_identity();
    bool changed = true;
    while (changed) {
        changed = false;
        for (int s = 0; s < n; ++s) {
            if (!flagged[s])
                continue;
            for (int x = 0; x < alphabet_.size; ++x)
                if (!flagged[next_[s][x]]) {
                    flagged[s] = false;
                    changed = true;
                    break;
                }
        }
    }
    return flagged;
}

MealyAutomaton MealyAutomaton::collapsed() const {
    const std::vector<bool> id_class = identity_classes();
    const int n = size();
    int id_count = 0;
    for (int s = 0; s < n; ++s)
        id_count += id_class[s] ? 1 : 0;
    if (id_count == 0)
        return *this;
    if (identity_ && id_count == 1 && id_class[*identity_])
        return *this;

    std::vector<int> index(n, -1);
    int next_index = 0;
    for (int s = 0; s < n; ++s)
        if (!id_class[s])
            index[s] = next_index++;
    const int id_index = next_index;
    for (int s = 0; s < n; ++s)
        if (id_class[s])
            index[s] = id_index;

    std::vector<Perm> output;
    std::vector<std::vector<int>> next;
    std::vector<std::string> names;
    for (int s = 0; s < n; ++s) {
        if (id_class[s])
            continue;
        output.push_back(output_[s]);
        names.push_back(names_[s] == "id" ? "s" + std::to_string(index[s]) : names_[s]);
        std::vector<int> row(alphabet_.size);
        for (int x = 0; x < alphabet_.size; ++x)
            row[x] = index[next_[s][x]];
        next.push_back(std::move(row));
    }
    output.push_back(Perm(alphabet_.size));
    next.push_back(std::vector<int>(alphabet_.size, id_index));
    names.push_back("id");
    return MealyAutomaton(alphabet_, std::move(output), std::move(next), index[root_], id_index,
                          std::move(names));
}

int MealyAutomaton::state_at(const Vertex& v) const {
    if (!(v.alphabet() == alphabet_))
        throw AlphabetMismatch("vertex over a different alphabet");
    int s = root_;
    for (int i = 0; i < v.length(); ++i)
        s = next_[s][v[i]];
    return s;
}

std::vector<Int> MealyAutomaton::census(int max_level) const {
    const std::vector<bool> id_class = identity_classes();
    std::vector<Int> counts(size(), Int(0));
    counts[root_] = 1;
    std::vector<Int> theta;
    for (int level = 0; level <= max_level; ++level) {
        Int total = 0;
        for (int s = 0; s < size(); ++s)
            if (!id_class[s])
                total += counts[s];
        theta.push_back(total);
        if (level == max_level)
            break;
        std::vector<Int> next_counts(size(), Int(0));
        for (int s = 0; s < size(); ++s) {
            if (counts[s] == 0)
                continue;
            for (int x = 0; x < alphabet_.size; ++x)
                next_counts[next_[s][x]] += counts[s];
        }
        counts = std::move(next_counts);
    }
    return theta;
}

std::string MealyAutomaton::to_text() const {
    std::ostringstream os;
    os << "alphabet " << alphabet_.size << "\n";
    for (int s = 0; s < size(); ++s) {
        if (identity_ && *identity_ == s)
            continue;
        os << "state " << names_[s] << " perm " << output_[s].to_string() << " children";
        for (int x = 0; x < alphabet_.size; ++x)
            os << ' ' << names_[next_[s][x]];
        os << "\n";
    }
    os << "root " << names_[root_] << "\n";
    return os.str();
}

MealyAutomaton MealyAutomaton::parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

MealyAutomaton MealyAutomaton::parse(std::istream& in) {
    std::string line;
    int alphabet_size = -1;
    struct RawState {
        std::string name;
        std::vector<int> perm;
        std::vector<std::string> children;
    };
    std::vector<RawState> states;
    std::string root_name;
    bool have_root = false;

    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head) || head[0] == '#')
            continue;
        const std::string where = " (line " + std::to_string(line_no) + ")";
        if (head == "alphabet") {
            if (alphabet_size != -1)
                throw ParseError("duplicate alphabet directive" + where);
            if (!(ls >> alphabet_size) || alphabet_size < 2)
                throw ParseError("bad alphabet size" + where);
        } else if (head == "state") {
            if (alphabet_size == -1)
                throw ParseError("state before alphabet directive" + where);
            RawState rs;
            std::string kw;
            if (!(ls >> rs.name))
                throw ParseError("missing state name" + where);
            if (rs.name == "id")
                throw ParseError("the name 'id' is reserved for the identity state" + where);
            if (!(ls >> kw) || kw != "perm")
                throw ParseError("expected 'perm'" + where);
            for (int x = 0; x < alphabet_size; ++x) {
                int v;
                if (!(ls >> v))
                    throw ParseError("permutation has wrong arity" + where);
                rs.perm.push_back(v);
            }
            if (!(ls >> kw) || kw != "children")
                throw ParseError("expected 'children'" + where);
            for (int x = 0; x < alphabet_size; ++x) {
                std::string child;
                if (!(ls >> child))
                    throw ParseError("children list has wrong arity" + where);
                rs.children.push_back(child);
            }
            std::string extra;
            if (ls >> extra)
                throw ParseError("trailing tokens after state line" + where);
            states.push_back(std::move(rs));
        } else if (head == "root") {
            if (have_root)
                throw ParseError("duplicate root directive" + where);
            if (!(ls >> root_name))
                throw ParseError("missing root name" + where);
            have_root = true;
        } else {
            throw ParseError("unknown directive '" + head + "'" + where);
        }
    }
    if (alphabet_size == -1)
        throw ParseError("missing alphabet directive");
    if (!have_root)
        throw ParseError("missing root directive");

    std::map<std::string, int> index;
    for (std::size_t i = 0; i < states.size(); ++i)
        if (!index.emplace(states[i].name, static_cast<int>(i)).second)
            throw ParseError("duplicate state name '" + states[i].name + "'");

    bool needs_id = root_name == "id";
    for (const auto& rs : states)
        for (const auto& child : rs.children)
            needs_id = needs_id || child == "id";
    const int id_index = static_cast<int>(states.size());
    if (needs_id)
        index.emplace("id", id_index);

    auto resolve = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end())
            throw ParseError("unknown state name '" + name + "'");
        return it->second;
    };

    Alphabet alphabet;
    alphabet.size = alphabet_size;
    alphabet.distinguished = 0;
    std::vector<Perm> output;
    std::vector<std::vector<int>> next;
    std::vector<std::string> names;
    for (const auto& rs : states) {
        try {
            output.push_back(Perm(rs.perm));
        } catch (const InputError&) {
            throw ParseError("state '" + rs.name + "' output is not a permutation");
        }
        std::vector<int> row;
        for (const auto& child : rs.children)
            row.push_back(resolve(child));
        next.push_back(std::move(row));
        names.push_back(rs.name);
    }
    std::optional<int> identity;
    if (needs_id) {
        output.push_back(Perm(alphabet_size));
        next.push_back(std::vector<int>(alphabet_size, id_index));
        names.push_back("id");
        identity = id_index;
    }
    return MealyAutomaton(alphabet, std::move(output), std::move(next), resolve(root_name),
                          identity, std::move(names));
}

ClosureResult state_closure(const TreeAutomorphism& a, std::size_t cap) {
    if (cap < 1)
        throw BadParameters("closure cap must be positive");
    std::vector<TreeAutomorphism> nodes;
    std::vector<Vertex> witnesses;
    std::unordered_map<std::uint64_t, int> index;

    nodes.push_back(a);
    witnesses.push_back(Vertex(a.alphabet()));
    index.emplace(a.id(), 0);

    std::vector<Perm> output;
    std::vector<std::vector<int>> next;

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Decomposition& d = nodes[i].decompose();
        output.push_back(d.perm);
        std::vector<int> row(a.alphabet().size);
        for (int x = 0; x < a.alphabet().size; ++x) {
            const TreeAutomorphism& child = d.sections[x];
            auto it = index.find(child.id());
            if (it == index.end()) {
                if (nodes.size() >= cap)
                    throw CapExceeded("state closure exceeded cap " + std::to_string(cap));
                it = index.emplace(child.id(), static_cast<int>(nodes.size())).first;
                nodes.push_back(child);
                witnesses.push_back(witnesses[i].child(x));
            }
            row[x] = it->second;
        }
        next.push_back(std::move(row));
    }

    MealyAutomaton raw(a.alphabet(), std::move(output), std::move(next), 0);
    const std::vector<bool> id_class = raw.identity_classes();
    MealyAutomaton collapsed = raw.collapsed();

    // Remap representatives and witnesses onto the collapsed machine.
    ClosureResult result;
    result.state_nodes.assign(collapsed.size(), identity(a.alphabet()));
    result.witnesses.assign(collapsed.size(), Vertex(a.alphabet()));
    std::vector<bool> seen(collapsed.size(), false);
    int cursor = 0;
    for (std::size_t s = 0; s < nodes.size(); ++s) {
        if (id_class[s])
            continue;
        result.state_nodes[cursor] = nodes[s];
        result.witnesses[cursor] = witnesses[s];
        seen[cursor] = true;
        ++cursor;
    }
    if (collapsed.identity()) {
        // Shortest witness among the merged identity states.
        Vertex best = Vertex(a.alphabet());
        bool found = false;
        for (std::size_t s = 0; s < nodes.size(); ++s)
            if (id_class[s] && (!found || witnesses[s].length() < best.length())) {
                best = witnesses[s];
                found = true;
            }
        result.witnesses[*collapsed.identity()] = best;
        seen[*collapsed.identity()] = true;
    }
    (void)seen;
    result.machine = std::make_shared<const MealyAutomaton>(std::move(collapsed));
    return result;
}

std::string ActivityClass::to_string() const {
    switch (tag) {
    case Tag::Bounded:
        return "Bounded";
    case Tag::Polynomial:
        return "Polynomial(" + std::to_string(degree) + ")";
    case Tag::Exponential:
        return "Exponential";
    }
    return "?";
}

namespace {

// Tarjan strongly connected components over the non-identity sub-diagram.
struct SccContext {
    const std::vector<std::vector<int>>& adj;
    std::vector<int> index, low, comp;
    std::vector<bool> on_stack;
    std::vector<int> stack;
    int counter = 0, comps = 0;

    explicit SccContext(const std::vector<std::vector<int>>& adjacency)
        : adj(adjacency), index(adjacency.size(), -1), low(adjacency.size(), 0),
          comp(adjacency.size(), -1), on_stack(adjacency.size(), false) {}

    void run(int start) {
        // Iterative Tarjan; recursion depth can reach the state count.
        struct Frame {
            int v;
            std::size_t edge;
        };
        std::vector<Frame> frames{{start, 0}};
        index[start] = low[start] = counter++;
        stack.push_back(start);
        on_stack[start] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < adj[f.v].size()) {
                const int w = adj[f.v][f.edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = comps;
                        if (w == f.v)
                            break;
                    }
                    ++comps;
                }
                const int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
};

} // namespace

ActivityClass activity_class(const MealyAutomaton& m) {
    const std::vector<bool> id_class = m.identity_classes();
    if (id_class[m.root()])
        return ActivityClass::bounded();

    const int n = m.size();
    // Sub-diagram on non-identity states, edges with letter multiplicity.
    std::vector<std::vector<int>> adj(n);          // distinct successors
    std::vector<std::map<int, int>> multi(n);      // successor -> multiplicity
    for (int s = 0; s < n; ++s) {
        if (id_class[s])
            continue;
        for (int x = 0; x < m.alphabet().size; ++x) {
            const int t = m.next(s, x);
            if (id_class[t])
                continue;
            if (multi[s][t]++ == 0)
                adj[s].push_back(t);
        }
    }

    // Restrict to states reachable from the root inside the sub-diagram.
    std::vector<bool> reachable(n, false);
    std::deque<int> queue{m.root()};
    reachable[m.root()] = true;
    while (!queue.empty()) {
        const int s = queue.front();
        queue.pop_front();
        for (int t : adj[s])
            if (!reachable[t]) {
                reachable[t] = true;
                queue.push_back(t);
            }
    }

    SccContext scc(adj);
    for (int s = 0; s < n; ++s)
        if (reachable[s] && scc.index[s] == -1)
            scc.run(s);

    // A strongly connected component is a single simple cycle exactly when
    // its internal edge count (with multiplicity) equals its vertex count.
    std::vector<int> comp_size(scc.comps, 0), comp_edges(scc.comps, 0);
    for (int s = 0; s < n; ++s) {
        if (!reachable[s])
            continue;
        comp_size[scc.comp[s]] += 1;
        for (const auto& [t, mult] : multi[s])
            if (reachable[t] && scc.comp[t] == scc.comp[s])
                comp_edges[scc.comp[s]] += mult;
    }
    for (int c = 0; c < scc.comps; ++c)
        if (comp_edges[c] > comp_size[c])
            return ActivityClass::exponential();

    // Condensation DAG; count the maximum number of cyclic components on a
    // path starting at the root's component.
    std::vector<std::vector<int>> dag(scc.comps);
    for (int s = 0; s < n; ++s) {
        if (!reachable[s])
            continue;
        for (int t : adj[s])
            if (reachable[t] && scc.comp[t] != scc.comp[s])
                dag[scc.comp[s]].push_back(scc.comp[t]);
    }
    std::vector<int> best(scc.comps, -1);
    auto dfs = [&](auto&& self, int c) -> int {
        if (best[c] >= 0)
            return best[c];
        int deepest = 0;
        for (int d : dag[c])
            deepest = std::max(deepest, self(self, d));
        best[c] = deepest + (comp_edges[c] == comp_size[c] ? 1 : 0);
        return best[c];
    };
    const int cycles_on_path = dfs(dfs, scc.comp[m.root()]);
    if (cycles_on_path <= 1)
        return ActivityClass::bounded();
    return ActivityClass::polynomial(cycles_on_path - 1);
}

} // namespace arboreal
