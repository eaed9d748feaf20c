#include "arboreal/tree_automorphism.hpp"

#include "arboreal/errors.hpp"
#include "arboreal/mealy.hpp"

#include <atomic>
#include <mutex>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace arboreal {

struct AutomorphismNode {
    std::uint64_t id = 0;
    Alphabet alphabet;
    BackendKind kind = BackendKind::Rooted;

    Perm perm;                                // Rooted, Wreath
    std::vector<TreeAutomorphism> children;   // Wreath sections, Product factors, Inverse inner
    AffineElement affine;                     // Affine
    std::optional<OmegaSequence> seq;         // Omega (inner element is children[0])
    std::shared_ptr<const MealyAutomaton> machine; // Automaton
    int state = -1;

    mutable std::mutex mu;
    mutable std::optional<Decomposition> decomp;
};

namespace {

std::atomic<std::size_t> g_closure_cap{4096};

// Hash-consing registry. Nodes are retained for the process lifetime;
// the working sets here are desk-scale.
struct Interner {
    std::mutex mu;
    std::unordered_map<std::string, std::shared_ptr<const AutomorphismNode>> table;
    std::uint64_t next_id = 1;

    static Interner& instance() {
        static Interner interner;
        return interner;
    }
};

std::string alphabet_prefix(const Alphabet& alphabet) {
    return "a" + std::to_string(alphabet.size) + "." + std::to_string(alphabet.distinguished) + "|";
}

} // namespace

struct NodeFactory {
    static TreeAutomorphism wrap(std::shared_ptr<const AutomorphismNode> node) {
        return TreeAutomorphism(std::move(node));
    }
    static const std::shared_ptr<const AutomorphismNode>& node(const TreeAutomorphism& a) {
        return a.node_;
    }

    template <typename Builder>
    static TreeAutomorphism intern(const std::string& key, Builder&& build) {
        auto& interner = Interner::instance();
        std::lock_guard<std::mutex> lock(interner.mu);
        auto it = interner.table.find(key);
        if (it != interner.table.end())
            return wrap(it->second);
        auto node = std::make_shared<AutomorphismNode>();
        build(*node);
        node->id = interner.next_id++;
        interner.table.emplace(key, node);
        return wrap(node);
    }
};

std::size_t default_closure_cap() { return g_closure_cap.load(); }
std::size_t default_pair_cap() {
    const std::size_t c = g_closure_cap.load();
    return c > (1u << 16) ? SIZE_MAX : c * c;
}
int default_level_bound() { return 8; }
void set_default_closure_cap(std::size_t cap) {
    if (cap == 0)
        throw BadParameters("cap must be positive");
    g_closure_cap.store(cap);
}

const Alphabet& TreeAutomorphism::alphabet() const { return node_->alphabet; }
BackendKind TreeAutomorphism::kind() const { return node_->kind; }
std::uint64_t TreeAutomorphism::id() const { return node_->id; }

bool TreeAutomorphism::is_identity_node() const {
    return node_->kind == BackendKind::Rooted && node_->perm.is_identity();
}

const AffineElement& TreeAutomorphism::affine_payload() const {
    if (node_->kind != BackendKind::Affine)
        throw Error("not an affine-backed automorphism");
    return node_->affine;
}

const OmegaSequence& TreeAutomorphism::omega_payload() const {
    if (node_->kind != BackendKind::Omega)
        throw Error("not an omega-backed automorphism");
    return *node_->seq;
}

const std::vector<TreeAutomorphism>& TreeAutomorphism::factors() const {
    if (node_->kind != BackendKind::Product)
        throw Error("not a product-backed automorphism");
    return node_->children;
}

TreeAutomorphism identity(const Alphabet& alphabet) {
    return rooted(alphabet, Perm(alphabet.size));
}

TreeAutomorphism rooted(const Alphabet& alphabet, const Perm& perm) {
    alphabet.validate();
    if (perm.degree() != alphabet.size)
        throw AlphabetMismatch("rooted permutation degree differs from alphabet size");
    const std::string key = alphabet_prefix(alphabet) + "R:" + perm.to_string();
    return NodeFactory::intern(key, [&](AutomorphismNode& n) {
        n.alphabet = alphabet;
        n.kind = BackendKind::Rooted;
        n.perm = perm;
    });
}

TreeAutomorphism wreath(const Alphabet& alphabet, const Perm& perm,
                        std::vector<TreeAutomorphism> sections) {
    alphabet.validate();
    if (perm.degree() != alphabet.size ||
        sections.size() != static_cast<std::size_t>(alphabet.size))
        throw AlphabetMismatch("wreath data does not match the alphabet");
    bool trivial = perm.is_identity();
    for (const auto& s : sections) {
        if (!(s.alphabet() == alphabet))
            throw AlphabetMismatch("wreath section over a different alphabet");
        trivial = trivial && s.is_identity_node();
    }
    if (trivial)
        return identity(alphabet);
    std::ostringstream key;
    key << alphabet_prefix(alphabet) << "W:" << perm.to_string() << ":";
    for (const auto& s : sections)
        key << s.id() << ',';
    return NodeFactory::intern(key.str(), [&](AutomorphismNode& n) {
        n.alphabet = alphabet;
        n.kind = BackendKind::Wreath;
        n.perm = perm;
        n.children = std::move(sections);
    });
}

TreeAutomorphism from_affine(const AffineElement& element) {
    if (element.ring != Ring::Integer)
        throw BadParameters("tree realization of affine elements needs the integer ring");
    Alphabet alphabet;
    alphabet.size = 1;
    for (int i = 0; i < element.n; ++i)
        alphabet.size *= element.p;
    alphabet.distinguished = 0;
    if (element.is_identity())
        return identity(alphabet);
    const std::string key = alphabet_prefix(alphabet) + "F:" + element.key();
    return NodeFactory::intern(key, [&](AutomorphismNode& n) {
        n.alphabet = alphabet;
        n.kind = BackendKind::Affine;
        n.affine = element;
    });
}

TreeAutomorphism tilde(const TreeAutomorphism& g, const OmegaSequence& omega) {
    if (!(g.alphabet() == omega.alphabet()))
        throw AlphabetMismatch("omega sequence over a different alphabet");
    if (g.is_identity_node())
        return identity(g.alphabet());
    const std::string key =
        alphabet_prefix(g.alphabet()) + "O:" + std::to_string(g.id()) + ":" + omega.key();
    return NodeFactory::intern(key, [&](AutomorphismNode& n) {
        n.alphabet = g.alphabet();
        n.kind = BackendKind::Omega;
        n.children = {g};
        n.seq = omega;
    });
}

TreeAutomorphism from_automaton(std::shared_ptr<const MealyAutomaton> machine, int state) {
    if (!machine || state < 0 || state >= machine->size())
        throw BadParameters("automaton state out of range");
    if (machine->identity() && *machine->identity() == state)
        return identity(machine->alphabet());
    const std::string key = alphabet_prefix(machine->alphabet()) + "M:" +
                            std::to_string(machine->uid()) + ":" + std::to_string(state);
    return NodeFactory::intern(key, [&](AutomorphismNode& n) {
        n.alphabet = machine->alphabet();
        n.kind = BackendKind::Automaton;
        n.machine = std::move(machine);
        n.state = state;
    });
}

namespace {

TreeAutomorphism intern_product(const Alphabet& alphabet,
                                std::vector<TreeAutomorphism> factors) {
    std::ostringstream key;
    key << alphabet_prefix(alphabet) << "P:";
    for (const auto& f : factors)
        key << f.id() << ',';
    return NodeFactory::intern(key.str(), [&](AutomorphismNode& n) {
        n.alphabet = alphabet;
        n.kind = BackendKind::Product;
        n.children = std::move(factors);
    });
}

TreeAutomorphism intern_inverse(const TreeAutomorphism& inner) {
    const std::string key =
        alphabet_prefix(inner.alphabet()) + "I:" + std::to_string(inner.id());
    return NodeFactory::intern(key, [&](AutomorphismNode& n) {
        n.alphabet = inner.alphabet();
        n.kind = BackendKind::Inverse;
        n.children = {inner};
    });
}

// Flattens nested products, drops identities, coalesces adjacent rooted and
// adjacent integral-affine factors. The factor list stays a lazy word
// otherwise; no normal form is computed.
void push_factor(std::vector<TreeAutomorphism>& out, const TreeAutomorphism& f) {
    if (f.is_identity_node())
        return;
    if (f.kind() == BackendKind::Product) {
        for (const auto& g : f.factors())
            push_factor(out, g);
        return;
    }
    if (!out.empty()) {
        const TreeAutomorphism& prev = out.back();
        if (prev.kind() == BackendKind::Rooted && f.kind() == BackendKind::Rooted) {
            const Perm merged = prev.root_perm() * f.root_perm();
            out.pop_back();
            if (!merged.is_identity())
                out.push_back(rooted(f.alphabet(), merged));
            return;
        }
        if (prev.kind() == BackendKind::Affine && f.kind() == BackendKind::Affine) {
            const AffineElement merged = prev.affine_payload().compose(f.affine_payload());
            out.pop_back();
            const TreeAutomorphism m = from_affine(merged);
            if (!m.is_identity_node())
                out.push_back(m);
            return;
        }
    }
    out.push_back(f);
}

} // namespace

TreeAutomorphism compose(std::vector<TreeAutomorphism> word) {
    if (word.empty())
        throw BadParameters("empty composition word");
    const Alphabet alphabet = word.front().alphabet();
    std::vector<TreeAutomorphism> factors;
    for (const auto& f : word) {
        if (!(f.alphabet() == alphabet))
            throw AlphabetMismatch("composing automorphisms over different alphabets");
        push_factor(factors, f);
    }
    if (factors.empty())
        return identity(alphabet);
    if (factors.size() == 1)
        return factors.front();
    return intern_product(alphabet, std::move(factors));
}

TreeAutomorphism compose(const TreeAutomorphism& a, const TreeAutomorphism& b) {
    return compose(std::vector<TreeAutomorphism>{a, b});
}

TreeAutomorphism inverse(const TreeAutomorphism& a) {
    switch (a.kind()) {
    case BackendKind::Rooted:
        return rooted(a.alphabet(), a.root_perm().inverse());
    case BackendKind::Wreath: {
        const Decomposition& d = a.decompose();
        const Perm inv = d.perm.inverse();
        std::vector<TreeAutomorphism> sections;
        sections.reserve(d.sections.size());
        for (int x = 0; x < a.alphabet().size; ++x)
            sections.push_back(inverse(d.sections[inv[x]]));
        return wreath(a.alphabet(), inv, std::move(sections));
    }
    case BackendKind::Affine:
        return from_affine(a.affine_payload().inverse());
    case BackendKind::Omega:
        return tilde(inverse(NodeFactory::node(a)->children[0]), a.omega_payload());
    case BackendKind::Product: {
        const auto& fs = a.factors();
        std::vector<TreeAutomorphism> word;
        word.reserve(fs.size());
        for (auto it = fs.rbegin(); it != fs.rend(); ++it)
            word.push_back(inverse(*it));
        return compose(std::move(word));
    }
    case BackendKind::Inverse:
        return NodeFactory::node(a)->children[0];
    case BackendKind::Automaton:
        return intern_inverse(a);
    }
    throw Error("unreachable backend kind");
}

TreeAutomorphism commutator(const TreeAutomorphism& a, const TreeAutomorphism& b) {
    return compose({a, b, inverse(a), inverse(b)});
}

TreeAutomorphism conjugate(const TreeAutomorphism& h, const TreeAutomorphism& g) {
    return compose({h, g, inverse(h)});
}

TreeAutomorphism embed_at(const Vertex& v, const TreeAutomorphism& g) {
    if (!(v.alphabet() == g.alphabet()))
        throw AlphabetMismatch("embedding vertex over a different alphabet");
    TreeAutomorphism result = g;
    const Alphabet& alphabet = g.alphabet();
    for (int i = v.length() - 1; i >= 0; --i) {
        std::vector<TreeAutomorphism> sections(alphabet.size, identity(alphabet));
        sections[v[i]] = result;
        result = wreath(alphabet, Perm(alphabet.size), std::move(sections));
    }
    return result;
}

namespace {

Decomposition compute_decomposition(const AutomorphismNode& node) {
    const Alphabet& alphabet = node.alphabet;
    const int size = alphabet.size;
    Decomposition d;
    switch (node.kind) {
    case BackendKind::Rooted:
        d.perm = node.perm;
        d.sections.assign(size, identity(alphabet));
        return d;
    case BackendKind::Wreath:
        d.perm = node.perm;
        d.sections = node.children;
        return d;
    case BackendKind::Affine: {
        const AffineElement& e = node.affine;
        std::vector<int> images(size);
        d.sections.reserve(size);
        for (int letter = 0; letter < size; ++letter) {
            const std::vector<int> digits = letter_digits(e.p, e.n, letter);
            std::vector<Int> y = e.b;
            for (int i = 0; i < e.n; ++i)
                for (int j = 0; j < e.n; ++j)
                    y[i] += e.a.at(i, j) * digits[j];
            std::vector<int> out_digits(e.n);
            std::vector<Int> carry(e.n);
            for (int i = 0; i < e.n; ++i) {
                Int r = y[i] % e.p;
                if (r < 0)
                    r += e.p;
                out_digits[i] = static_cast<int>(r);
                carry[i] = (y[i] - r) / e.p;
            }
            images[letter] = digits_letter(e.p, e.n, out_digits);
            d.sections.push_back(
                from_affine(AffineElement(e.p, e.n, e.a, std::move(carry), Ring::Integer)));
        }
        d.perm = Perm(std::move(images));
        return d;
    }
    case BackendKind::Omega: {
        const OmegaSequence& seq = *node.seq;
        const TreeAutomorphism& inner = node.children[0];
        d.perm = Perm(size);
        d.sections.assign(size, identity(alphabet));
        d.sections[alphabet.distinguished] = tilde(inner, shift(seq, 1));
        d.sections[seq.head()] = inner;
        return d;
    }
    case BackendKind::Product: {
        const auto& fs = node.children;
        std::vector<const Decomposition*> parts;
        parts.reserve(fs.size());
        for (const auto& f : fs)
            parts.push_back(&f.decompose());
        std::vector<int> images(size);
        d.sections.reserve(size);
        for (int letter = 0; letter < size; ++letter) {
            std::vector<TreeAutomorphism> word(fs.size(), identity(alphabet));
            int cur = letter;
            for (int j = static_cast<int>(fs.size()) - 1; j >= 0; --j) {
                word[j] = parts[j]->sections[cur];
                cur = parts[j]->perm[cur];
            }
            images[letter] = cur;
            d.sections.push_back(compose(std::move(word)));
        }
        d.perm = Perm(std::move(images));
        return d;
    }
    case BackendKind::Inverse: {
        const Decomposition& inner = node.children[0].decompose();
        d.perm = inner.perm.inverse();
        d.sections.reserve(size);
        for (int letter = 0; letter < size; ++letter)
            d.sections.push_back(inverse(inner.sections[d.perm[letter]]));
        return d;
    }
    case BackendKind::Automaton: {
        const MealyAutomaton& m = *node.machine;
        d.perm = m.output(node.state);
        d.sections.reserve(size);
        for (int letter = 0; letter < size; ++letter)
            d.sections.push_back(from_automaton(node.machine, m.next(node.state, letter)));
        return d;
    }
    }
    throw Error("unreachable backend kind");
}

} // namespace

const Decomposition& TreeAutomorphism::decompose() const {
    const AutomorphismNode& n = *node_;
    std::lock_guard<std::mutex> lock(n.mu);
    if (!n.decomp)
        n.decomp = compute_decomposition(n);
    return *n.decomp;
}

TreeAutomorphism TreeAutomorphism::section(int letter) const {
    if (letter < 0 || letter >= alphabet().size)
        throw LetterOutOfRange("section letter out of range");
    return decompose().sections[letter];
}

TreeAutomorphism TreeAutomorphism::section(const Vertex& vertex) const {
    if (!(vertex.alphabet() == alphabet()))
        throw AlphabetMismatch("section vertex over a different alphabet");
    TreeAutomorphism cur = *this;
    for (int i = 0; i < vertex.length(); ++i)
        cur = cur.section(vertex[i]);
    return cur;
}

Vertex TreeAutomorphism::apply(const Vertex& vertex) const {
    if (!(vertex.alphabet() == alphabet()))
        throw AlphabetMismatch("applying automorphism to a vertex over a different alphabet");
    std::vector<int> out;
    out.reserve(vertex.length());
    TreeAutomorphism cur = *this;
    for (int i = 0; i < vertex.length(); ++i) {
        const Decomposition& d = cur.decompose();
        out.push_back(d.perm[vertex[i]]);
        cur = d.sections[vertex[i]];
    }
    return Vertex(alphabet(), std::move(out));
}

} // namespace arboreal
