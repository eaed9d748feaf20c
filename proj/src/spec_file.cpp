#include "arboreal/spec_file.hpp"

#include "arboreal/errors.hpp"
#include "arboreal/matrix_actions.hpp"

#include <fstream>
#include <sstream>

namespace arboreal {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

// generator value forms:
//   rooted A = <matrix> b = <vector>
//   padic  A = <matrix> b = <vector>
//   tilde omega = "<seq>" <base form>
TreeAutomorphism parse_generator(const std::string& value, int p, int n,
                                 const Alphabet& alphabet) {
    const std::string text = trim(value);
    if (text.rfind("tilde", 0) == 0) {
        std::string rest = trim(text.substr(5));
        if (rest.rfind("omega", 0) != 0)
            throw ParseError("tilde generator needs omega = \"...\": " + value);
        rest = trim(rest.substr(5));
        if (rest.empty() || rest[0] != '=')
            throw ParseError("tilde generator needs omega = \"...\": " + value);
        rest = trim(rest.substr(1));
        if (rest.empty() || rest[0] != '"')
            throw ParseError("omega literal must be quoted: " + value);
        const std::size_t close = rest.find('"', 1);
        if (close == std::string::npos)
            throw ParseError("unterminated omega literal: " + value);
        const OmegaSequence omega = OmegaSequence::parse(alphabet, rest.substr(1, close - 1));
        const TreeAutomorphism base = parse_generator(rest.substr(close + 1), p, n, alphabet);
        return tilde(base, omega);
    }
    bool rooted_form = false;
    std::string rest;
    if (text.rfind("rooted", 0) == 0) {
        rooted_form = true;
        rest = text.substr(6);
    } else if (text.rfind("padic", 0) == 0) {
        rest = text.substr(5);
    } else {
        throw ParseError("generator must be rooted, padic, or tilde: " + value);
    }
    const std::size_t apos = rest.find("A");
    const std::size_t bpos = rest.rfind(" b");
    if (apos == std::string::npos || bpos == std::string::npos || bpos <= apos)
        throw ParseError("generator needs A = ... b = ...: " + value);
    auto after_equals = [&](std::string part, const char* what) {
        part = trim(part);
        if (part.empty() || part[0] != '=')
            throw ParseError(std::string("expected '=' after ") + what + ": " + value);
        return trim(part.substr(1));
    };
    const std::string matrix_text = after_equals(rest.substr(apos + 1, bpos - apos - 1), "A");
    const std::string vector_text = after_equals(trim(rest.substr(bpos + 2)), "b");
    const IntMat a = parse_int_matrix(matrix_text);
    const std::vector<Int> b = parse_int_vector(vector_text);
    if (a.n != n || static_cast<int>(b.size()) != n)
        throw ParseError("generator dimensions do not match n: " + value);
    if (rooted_form)
        return saff_rooted(AffineElement(p, n, a, b, Ring::ModP));
    return saff_padic(AffineElement(p, n, a, b, Ring::Integer));
}

bool known_analysis(const std::string& name) {
    return name == "level-order" || name == "activity" || name == "property-h";
}

} // namespace

std::optional<int> GroupSpecFile::requested_level() const {
    for (const auto& line : analyses) {
        std::istringstream ls(line);
        std::string name;
        int level;
        if (ls >> name && name == "level-order" && ls >> level)
            return level;
    }
    return std::nullopt;
}

GroupSpecFile parse_group_spec_file(const std::string& text) {
    std::istringstream in(text);
    std::string line;

    std::string preset_name;
    int p = 0, n = 0;
    std::vector<std::string> omega_literals;
    std::vector<std::string> generator_values;
    std::vector<std::string> analyses;

    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value on line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "preset") {
            if (!preset_name.empty())
                throw ParseError("duplicate preset key");
            preset_name = value;
        } else if (key == "p") {
            p = std::stoi(value);
        } else if (key == "n") {
            n = std::stoi(value);
        } else if (key == "omega") {
            omega_literals.push_back(strip_quotes(value));
        } else if (key == "generator") {
            generator_values.push_back(value);
        } else if (key == "analysis") {
            std::istringstream as(value);
            std::string name;
            as >> name;
            if (!known_analysis(name))
                throw ParseError("unknown analysis '" + name + "'");
            analyses.push_back(value);
        } else {
            throw ParseError("unknown key '" + key + "' on line " + std::to_string(line_no));
        }
    }
    if (preset_name.empty())
        throw ParseError("missing preset key");
    if (p <= 0 || n <= 0)
        throw ParseError("missing or invalid p / n");

    Alphabet alphabet;
    alphabet.size = 1;
    for (int i = 0; i < n; ++i)
        alphabet.size *= p;
    alphabet.distinguished = 0;

    std::vector<OmegaSequence> omegas;
    for (const auto& literal : omega_literals)
        omegas.push_back(OmegaSequence::parse(alphabet, literal));

    GroupSpecFile file;
    file.analyses = std::move(analyses);
    if (preset_name == "A" || preset_name == "Gamma" || preset_name == "M") {
        if (!generator_values.empty())
            throw ParseError("presets do not take explicit generators");
        const PresetTag tag = preset_name == "A"       ? PresetTag::A
                              : preset_name == "Gamma" ? PresetTag::Gamma
                                                       : PresetTag::M;
        file.spec = make_preset(tag, p, n, std::move(omegas));
    } else if (preset_name == "custom") {
        std::vector<TreeAutomorphism> generators;
        for (const auto& value : generator_values)
            generators.push_back(parse_generator(value, p, n, alphabet));
        file.spec = make_custom(alphabet, std::move(generators), std::move(omegas));
        file.spec.p = p;
        file.spec.n = n;
    } else {
        throw ParseError("unknown preset '" + preset_name + "'");
    }
    return file;
}

GroupSpecFile load_group_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open spec file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_group_spec_file(buffer.str());
}

FiniteGroupModel parse_finite_group(const std::string& text) {
    std::istringstream in(text);
    std::string head;
    if (!(in >> head))
        throw ParseError("empty group description");
    if (head == "cyclic") {
        int m;
        if (!(in >> m))
            throw ParseError("cyclic needs an order");
        return FiniteGroupModel::cyclic(m);
    }
    if (head == "table") {
        int n;
        if (!(in >> n) || n < 1)
            throw ParseError("table needs a positive size");
        std::vector<std::vector<int>> rows(n, std::vector<int>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!(in >> rows[i][j]))
                    throw ParseError("table row is too short");
        return FiniteGroupModel::from_table(std::move(rows));
    }
    if (head == "perm-group") {
        std::vector<Perm> gens;
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string kw;
            if (!(ls >> kw))
                continue;
            if (kw != "perm")
                throw ParseError("expected 'perm' line in perm-group");
            std::vector<int> images;
            int v;
            while (ls >> v)
                images.push_back(v);
            try {
                gens.push_back(Perm(images));
            } catch (const InputError&) {
                throw ParseError("bad permutation line: " + line);
            }
        }
        if (gens.empty())
            throw ParseError("perm-group needs at least one perm line");
        return FiniteGroupModel::from_permutations(gens);
    }
    throw ParseError("unknown group form '" + head + "'");
}

FiniteGroupModel load_finite_group(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open group file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_finite_group(buffer.str());
}

RationalMeasure parse_measure(const std::string& text) {
    std::istringstream in(text);
    std::string token;
    std::map<int, Rat> weights;
    while (in >> token) {
        const std::size_t colon = token.find(':');
        if (colon == std::string::npos)
            throw ParseError("measure atoms look like element:weight, got " + token);
        int element;
        try {
            element = std::stoi(token.substr(0, colon));
        } catch (const std::exception&) {
            throw ParseError("bad element in measure atom " + token);
        }
        weights[element] = weights.count(element)
                               ? weights[element] + parse_rational(token.substr(colon + 1))
                               : parse_rational(token.substr(colon + 1));
    }
    if (weights.empty())
        throw ParseError("empty measure literal");
    return RationalMeasure(std::move(weights));
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string token;
    auto flush = [&] {
        if (token.empty())
            return;
        try {
            out.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw ParseError("bad integer '" + token + "' in list");
        }
        token.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t')
            flush();
        else
            token += c;
    }
    flush();
    return out;
}

} // namespace arboreal
