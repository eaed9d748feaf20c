#include "arboreal/cli.hpp"

#include "arboreal/equality.hpp"
#include "arboreal/errors.hpp"
#include "arboreal/matrix_actions.hpp"
#include "arboreal/mealy.hpp"
#include "arboreal/omega.hpp"
#include "arboreal/permgrp.hpp"
#include "arboreal/spec_file.hpp"
#include "arboreal/volume.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace arboreal::cli {

namespace {

struct SpecOptions {
    std::string spec_path;
    std::string preset = "A";
    int p = 2;
    int n = 3;
    std::vector<std::string> omegas;
};

void add_spec_options(CLI::App* cmd, SpecOptions& opt) {
    cmd->add_option("--spec", opt.spec_path, "group-spec file");
    cmd->add_option("--preset", opt.preset, "A | Gamma | M")->check(CLI::IsMember({"A", "Gamma", "M"}));
    cmd->add_option("--p", opt.p, "prime modulus");
    cmd->add_option("--n", opt.n, "matrix dimension");
    cmd->add_option("--omega", opt.omegas,
                    "sequence literal \"pre;period\" (repeatable, integer letter codes)");
}

GroupSpecFile resolve_spec(const SpecOptions& opt) {
    if (!opt.spec_path.empty())
        return load_group_spec_file(opt.spec_path);
    Alphabet alphabet;
    alphabet.size = 1;
    for (int i = 0; i < opt.n; ++i)
        alphabet.size *= opt.p;
    alphabet.distinguished = 0;
    std::vector<OmegaSequence> omegas;
    for (const auto& literal : opt.omegas)
        omegas.push_back(OmegaSequence::parse(alphabet, literal));
    const PresetTag tag = opt.preset == "A"       ? PresetTag::A
                          : opt.preset == "Gamma" ? PresetTag::Gamma
                                                  : PresetTag::M;
    GroupSpecFile file;
    file.spec = make_preset(tag, opt.p, opt.n, std::move(omegas));
    return file;
}

std::string preset_name(PresetTag tag) {
    switch (tag) {
    case PresetTag::A:
        return "A";
    case PresetTag::Gamma:
        return "Gamma";
    case PresetTag::M:
        return "M";
    case PresetTag::Custom:
        return "custom";
    }
    return "?";
}

std::string rat_str(const Rat& value, int decimal_digits) {
    if (decimal_digits > 0)
        return decimal_string(value, decimal_digits);
    std::ostringstream os;
    os << value;
    return os.str();
}

// Pseudorandom rooted elements of the affine action over F_p, used by the
// randomized witness driver. Deterministic for a fixed seed.
TreeAutomorphism random_rooted_affine(std::mt19937& rng, int p, int n) {
    IntMat a = IntMat::identity(n);
    std::uniform_int_distribution<int> index(1, n);
    std::uniform_int_distribution<int> sign(0, 1);
    for (int step = 0; step < 2 * n; ++step) {
        const int i = index(rng), j = index(rng);
        if (i != j)
            a = a * IntMat::elementary(n, i, j, sign(rng) ? Int(1) : Int(-1));
    }
    std::uniform_int_distribution<int> digit(0, p - 1);
    std::vector<Int> b(n);
    for (auto& e : b)
        e = digit(rng);
    return saff_rooted(AffineElement(p, n, std::move(a), std::move(b), Ring::ModP));
}

TreeAutomorphism random_h(std::mt19937& rng, int p, int n, int head) {
    const std::vector<int> head_digits = letter_digits(p, n, head);
    while (true) {
        IntMat c = IntMat::identity(n);
        std::uniform_int_distribution<int> index(1, n);
        std::uniform_int_distribution<int> sign(0, 1);
        for (int step = 0; step < 2 * n; ++step) {
            const int i = index(rng), j = index(rng);
            if (i != j)
                c = c * IntMat::elementary(n, i, j, sign(rng) ? Int(1) : Int(-1));
        }
        std::vector<Int> b(n);
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            Int image = 0;
            for (int j = 0; j < n; ++j)
                image += c.at(i, j) * head_digits[j];
            b[i] = head_digits[i] - image;
            b[i] = ((b[i] % p) + p) % p;
            nonzero = nonzero || b[i] != 0;
        }
        if (!nonzero)
            continue;
        return saff_rooted(AffineElement(p, n, std::move(c), std::move(b), Ring::ModP));
    }
}

int cmd_level_order(const SpecOptions& opt, int level, std::ostream& out) {
    const GroupSpecFile file = resolve_spec(opt);
    if (level < 0)
        level = file.requested_level().value_or(1);
    out << "preset " << preset_name(file.spec.preset) << " p " << file.spec.p << " n "
        << file.spec.n << "\n";
    out << "level " << level << "\n";
    const EqualImageReport report = equal_image_check(file.spec, level);
    out << "order " << report.order << "\n";
    out << "expected " << report.expected << "\n";
    out << (report.match ? "MATCH" : "MISMATCH") << "\n";
    return report.match ? 0 : 1;
}

int cmd_volume(const std::string& family, const std::string& set_text, int p, int n,
               int alphabet_size, const std::string& omega_literal,
               const std::string& automaton_path, int decimal_digits, std::ostream& out) {
    if (!automaton_path.empty()) {
        std::ifstream in(automaton_path);
        if (!in)
            throw InputError("cannot open automaton file: " + automaton_path);
        const MealyAutomaton machine = MealyAutomaton::parse(in);
        out << rat_str(exact_volume(machine), decimal_digits) << "\n";
        return 0;
    }
    const std::vector<int> subset = parse_int_list(set_text);
    TreeAutomorphism element = [&] {
        if (family == "commutator" || family == "prop6")
            return commutator_family_element(p, n, subset);
        if (family == "substitution" || family == "thm5") {
            Alphabet alphabet{alphabet_size, 0};
            alphabet.validate();
            const OmegaSequence omega =
                OmegaSequence::parse(alphabet, omega_literal.empty() ? "1" : omega_literal);
            const TreeAutomorphism t = rooted(alphabet, Perm::cycle(alphabet.size));
            return substitution_family_element(t, omega, default_substitution_letters(omega, subset));
        }
        throw InputError("unknown volume family '" + family + "'");
    }();
    const VolumeResult result = support_volume(element);
    if (result.exact) {
        out << rat_str(result.value, decimal_digits) << "\n";
    } else {
        out << "lower " << rat_str(result.lower, decimal_digits) << "\n";
        out << "upper " << rat_str(result.upper, decimal_digits) << "\n";
    }
    return 0;
}

int cmd_witness_perfectness(int n, int i, int j, int p, std::ostream& out) {
    const PerfectnessWitness w = perfectness_witness(n, i, j, p);
    out << "commutator " << w.commutator.to_string() << "\n";
    out << "target " << w.target.to_string() << "\n";
    out << "symbolic " << (w.symbolic_equal ? "Equal" : "Distinct") << "\n";
    out << "tree " << w.tree_verdict.to_string() << "\n";
    out << "verdict " << (w.equal() ? "Equal" : "Distinct") << "\n";
    return w.equal() ? 0 : 1;
}

int cmd_witness_rist(const SpecOptions& opt, int count, unsigned seed, std::ostream& out) {
    Alphabet alphabet;
    alphabet.size = 1;
    for (int i = 0; i < opt.n; ++i)
        alphabet.size *= opt.p;
    alphabet.distinguished = 0;
    std::vector<OmegaSequence> omegas;
    for (const auto& literal : opt.omegas)
        omegas.push_back(OmegaSequence::parse(alphabet, literal));
    if (omegas.empty())
        omegas.push_back(OmegaSequence::constant(alphabet, 1));

    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, omegas.size() - 1);
    int passed = 0;
    for (int trial = 0; trial < count; ++trial) {
        const OmegaSequence& omega = omegas[pick(rng)];
        const TreeAutomorphism k = random_rooted_affine(rng, opt.p, opt.n);
        const TreeAutomorphism g = random_rooted_affine(rng, opt.p, opt.n);
        const TreeAutomorphism h = random_h(rng, opt.p, opt.n, omega.head());
        if (rist_witness(k, g, h, omega).verdict.is_equal())
            ++passed;
    }
    out << "rist " << passed << "/" << count << " Equal\n";

    int slide_passed = 0;
    for (int trial = 0; trial < count; ++trial) {
        const OmegaSequence& omega = omegas[pick(rng)];
        const TreeAutomorphism g = random_rooted_affine(rng, opt.p, opt.n);
        if (slide_identity(g, omega).verdict.is_equal())
            ++slide_passed;
    }
    out << "slide " << slide_passed << "/" << count << " Equal\n";
    return (passed == count && slide_passed == count) ? 0 : 1;
}

int cmd_activity(const SpecOptions& opt, const std::string& automaton_path, std::ostream& out) {
    if (!automaton_path.empty()) {
        std::ifstream in(automaton_path);
        if (!in)
            throw InputError("cannot open automaton file: " + automaton_path);
        const MealyAutomaton machine = MealyAutomaton::parse(in);
        out << "class " << activity_class(machine).to_string() << "\n";
        return 0;
    }
    const GroupSpecFile file = resolve_spec(opt);
    const auto& gens = group_generators(file.spec);
    bool all_bounded_automatic = true;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        try {
            const ClosureResult c = state_closure(gens[i]);
            const ActivityClass cls = activity_class(*c.machine);
            out << "generator " << i << " states " << c.machine->size() << " class "
                << cls.to_string() << "\n";
            if (!(cls == ActivityClass::bounded()))
                all_bounded_automatic = false;
        } catch (const CapExceeded&) {
            out << "generator " << i << " not witnessed automatic within cap\n";
            all_bounded_automatic = false;
        }
    }
    // Bounded plus automatic generators place the group inside a class
    // known to be amenable; the certificate records the verified hypothesis.
    out << "certificate " << (all_bounded_automatic ? "bounded-automatic" : "none") << "\n";
    return all_bounded_automatic ? 0 : 1;
}

int cmd_closure(const SpecOptions& opt, int generator_index, bool odometer,
                const std::string& a_text, const std::string& b_text, bool padic_form,
                const std::string& tilde_omega, const std::string& out_path,
                std::ostream& out) {
    TreeAutomorphism element = [&]() -> TreeAutomorphism {
        if (odometer) {
            if (opt.n != 1)
                throw InputError("--odometer uses n = 1");
            return saff_padic(AffineElement::translation(opt.p, 1, {Int(1)}, Ring::Integer));
        }
        if (!a_text.empty() || !b_text.empty()) {
            const IntMat a = parse_int_matrix(a_text.empty() ? "[[1]]" : a_text);
            std::vector<Int> b;
            if (b_text.empty())
                b.assign(a.n, Int(0));
            else
                b = parse_int_vector(b_text);
            TreeAutomorphism base =
                padic_form
                    ? saff_padic(AffineElement(opt.p, a.n, a, b, Ring::Integer))
                    : saff_rooted(AffineElement(opt.p, a.n, a, b, Ring::ModP));
            if (!tilde_omega.empty())
                base = tilde(base, OmegaSequence::parse(base.alphabet(), tilde_omega));
            return base;
        }
        const GroupSpecFile file = resolve_spec(opt);
        const auto& gens = group_generators(file.spec);
        if (generator_index < 0 || generator_index >= static_cast<int>(gens.size()))
            throw InputError("generator index out of range");
        return gens[generator_index];
    }();
    const ClosureResult closure = state_closure(element);
    const std::string text = closure.machine->to_text();
    if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file)
            throw InputError("cannot open output file: " + out_path);
        file << text;
        out << "states " << closure.machine->size() << " written " << out_path << "\n";
    } else {
        out << text;
    }
    return 0;
}

int cmd_folner(const std::string& group_path, int cyclic_order, const std::string& gens_text,
               const std::string& eps_text, int size_cap, bool verbose, std::ostream& out) {
    const FiniteGroupModel group = cyclic_order > 0 ? FiniteGroupModel::cyclic(cyclic_order)
                                                    : load_finite_group(group_path);
    const std::vector<int> s = parse_int_list(gens_text);
    const Rat eps = parse_rational(eps_text);
    const auto cert = folner_search(group, s, eps, size_cap);
    if (!cert) {
        out << "none\n";
        return 0;
    }
    out << cert->f.size() << "\n";
    if (verbose) {
        out << "F";
        for (int x : cert->f)
            out << ' ' << x;
        out << "\nexpanded " << cert->sf_size << (cert->minimal ? " minimal" : " heuristic")
            << "\n";
    }
    return 0;
}

int cmd_kesten(const std::string& group_path, int cyclic_order, const std::string& measure_text,
               int n_max, std::ostream& out) {
    const FiniteGroupModel group = cyclic_order > 0 ? FiniteGroupModel::cyclic(cyclic_order)
                                                    : load_finite_group(group_path);
    const RationalMeasure mu = parse_measure(measure_text);
    const KestenResult result = kesten_return(group, mu, n_max);
    for (int i = 0; i < n_max; ++i) {
        out << "p_" << 2 * (i + 1) << " " << result.p2n[i] << "\n";
        out << "root_" << 2 * (i + 1) << " [" << result.root_brackets[i].first << ","
            << result.root_brackets[i].second << "]\n";
    }
    return 0;
}

int cmd_property_h(const SpecOptions& opt, const std::string& perms_path, std::ostream& out) {
    PermImage image{Alphabet{2, 0}, {}};
    if (!perms_path.empty()) {
        std::ifstream in(perms_path);
        if (!in)
            throw InputError("cannot open permutation file: " + perms_path);
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string kw;
            if (!(ls >> kw))
                continue;
            if (kw != "perm")
                throw ParseError("expected 'perm' lines");
            std::vector<int> images;
            int v;
            while (ls >> v)
                images.push_back(v);
            image.generators.push_back(Perm(images));
        }
        if (image.generators.empty())
            throw InputError("no permutations found");
        image.alphabet = Alphabet{image.generators.front().degree(), 0};
    } else {
        const GroupSpecFile file = resolve_spec(opt);
        image = level_one_image(file.spec);
    }
    const PropertyHReport report = property_h_check(image);
    out << "transitive " << (report.transitive ? "yes" : "no") << "\n";
    int found = 0;
    for (const auto& [x, y, witness] : report.witnesses)
        found += witness ? 1 : 0;
    out << "pairs " << found << "/" << report.witnesses.size() << "\n";
    out << "property-h " << (report.pass ? "PASS" : "FAIL") << "\n";
    return report.pass ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact calculus for rooted-tree automorphisms: wreath decompositions, "
                 "finite-state closures, level quotients, support volumes, and a finite "
                 "amenability lab"};
    app.name("arboreal");
    app.require_subcommand(1);

    // Restore the process-wide default cap on the way out; run() may be
    // invoked repeatedly in one process (tests, embedding).
    struct CapGuard {
        std::size_t saved = default_closure_cap();
        ~CapGuard() { set_default_closure_cap(saved); }
    } cap_guard;

    if (const char* cap_env = std::getenv("ARBOREAL_CAP")) {
        try {
            set_default_closure_cap(static_cast<std::size_t>(std::stoull(cap_env)));
        } catch (const std::exception&) {
            err << "bad ARBOREAL_CAP value\n";
            return 2;
        }
    }
    std::size_t cap_flag = 0;
    app.add_option("--cap", cap_flag, "override the state-closure cap");

    SpecOptions level_spec;
    int level = -1;
    auto* level_cmd = app.add_subcommand(
        "level-order", "exact order of the level image against the iterated wreath product");
    add_spec_options(level_cmd, level_spec);
    level_cmd->add_option("--level", level, "tree level");

    std::string vol_family = "prop6", vol_set, vol_omega, vol_automaton;
    int vol_p = 2, vol_n = 3, vol_alphabet = 8, vol_decimal = 0;
    auto* vol_cmd = app.add_subcommand("volume", "exact support volumes");
    vol_cmd->add_option("--family", vol_family, "commutator (alias prop6) | substitution (alias thm5)");
    vol_cmd->add_option("--set", vol_set, "subset of positive positions, e.g. 1,3");
    vol_cmd->add_option("--p", vol_p, "prime (prop6)");
    vol_cmd->add_option("--n", vol_n, "dimension (prop6)");
    vol_cmd->add_option("--alphabet", vol_alphabet, "alphabet size (thm5)");
    vol_cmd->add_option("--omega", vol_omega, "base sequence literal (thm5)");
    vol_cmd->add_option("--automaton", vol_automaton, "automaton file to evaluate instead");
    vol_cmd->add_option("--decimal", vol_decimal, "print this many decimal digits");

    bool wit_perfectness = false, wit_rist = false;
    SpecOptions wit_spec;
    int wit_i = 1, wit_j = 2, wit_count = 100;
    unsigned wit_seed = 1;
    auto* wit_cmd = app.add_subcommand("witness", "explicit identity witnesses");
    wit_cmd->add_flag("--perfectness", wit_perfectness, "commutator-translation identity");
    wit_cmd->add_flag("--rist", wit_rist, "randomized rigid-stabilizer witnesses");
    add_spec_options(wit_cmd, wit_spec);
    wit_cmd->add_option("--i", wit_i, "row index");
    wit_cmd->add_option("--j", wit_j, "column index");
    wit_cmd->add_option("--count", wit_count, "number of randomized instances");
    wit_cmd->add_option("--seed", wit_seed, "random seed");

    SpecOptions act_spec;
    std::string act_automaton;
    auto* act_cmd = app.add_subcommand("activity", "activity classes and the amenability "
                                                   "hypothesis certificate");
    add_spec_options(act_cmd, act_spec);
    act_cmd->add_option("--automaton", act_automaton, "automaton file to classify instead");

    SpecOptions clo_spec;
    int clo_generator = 0;
    bool clo_odometer = false, clo_padic = false;
    std::string clo_a, clo_b, clo_tilde, clo_out;
    auto* clo_cmd = app.add_subcommand("closure", "emit the finite-state closure of an element");
    add_spec_options(clo_cmd, clo_spec);
    clo_cmd->add_option("--generator", clo_generator, "index into the spec generators");
    clo_cmd->add_flag("--odometer", clo_odometer, "the +1 odometer on the p-adic line");
    clo_cmd->add_flag("--padic", clo_padic, "interpret --A/--b over the integers");
    clo_cmd->add_option("--A", clo_a, "matrix literal [[...],...]");
    clo_cmd->add_option("--b", clo_b, "vector literal [...]");
    clo_cmd->add_option("--tilde-omega", clo_tilde, "wrap the element as an omega-element");
    clo_cmd->add_option("--out", clo_out, "write the automaton to this file");

    std::string fol_group, fol_gens = "1", fol_eps = "1/2";
    int fol_cyclic = 0, fol_cap = -1;
    bool fol_verbose = false;
    auto* fol_cmd = app.add_subcommand("folner", "minimal Folner sets in finite groups");
    fol_cmd->add_option("--group", fol_group, "group file (cyclic/table/perm-group)");
    fol_cmd->add_option("--cyclic", fol_cyclic, "cyclic group order");
    fol_cmd->add_option("--gens", fol_gens, "multiplier elements, e.g. 1,11");
    fol_cmd->add_option("--eps", fol_eps, "rational epsilon, e.g. 1/2");
    fol_cmd->add_option("--size-cap", fol_cap, "largest candidate size");
    fol_cmd->add_flag("--verbose", fol_verbose, "also print the set");

    std::string kes_group, kes_measure;
    int kes_cyclic = 0, kes_nmax = 5;
    auto* kes_cmd = app.add_subcommand("kesten", "exact return probabilities of random walks");
    kes_cmd->add_option("--group", kes_group, "group file");
    kes_cmd->add_option("--cyclic", kes_cyclic, "cyclic group order");
    kes_cmd->add_option("--measure", kes_measure, "measure literal x:p ...")->required();
    kes_cmd->add_option("--nmax", kes_nmax, "number of even times");

    SpecOptions ph_spec;
    std::string ph_perms;
    auto* ph_cmd = app.add_subcommand("property-h", "transitivity plus stabilizer witnesses");
    add_spec_options(ph_cmd, ph_spec);
    ph_cmd->add_option("--perms", ph_perms, "file of 'perm ...' lines");

    for (CLI::App* sub : {level_cmd, vol_cmd, wit_cmd, act_cmd, clo_cmd, fol_cmd, kes_cmd, ph_cmd})
        sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("arboreal");
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (cap_flag > 0)
            set_default_closure_cap(cap_flag);
        if (level_cmd->parsed())
            return cmd_level_order(level_spec, level, out);
        if (vol_cmd->parsed())
            return cmd_volume(vol_family, vol_set, vol_p, vol_n, vol_alphabet, vol_omega,
                              vol_automaton, vol_decimal, out);
        if (wit_cmd->parsed()) {
            if (wit_perfectness == wit_rist)
                throw InputError("choose exactly one of --perfectness / --rist");
            if (wit_perfectness)
                return cmd_witness_perfectness(wit_spec.n, wit_i, wit_j, wit_spec.p, out);
            return cmd_witness_rist(wit_spec, wit_count, wit_seed, out);
        }
        if (act_cmd->parsed())
            return cmd_activity(act_spec, act_automaton, out);
        if (clo_cmd->parsed())
            return cmd_closure(clo_spec, clo_generator, clo_odometer, clo_a, clo_b, clo_padic,
                               clo_tilde, clo_out, out);
        if (fol_cmd->parsed())
            return cmd_folner(fol_group, fol_cyclic, fol_gens, fol_eps, fol_cap, fol_verbose,
                              out);
        if (kes_cmd->parsed())
            return cmd_kesten(kes_group, kes_cyclic, kes_measure, kes_nmax, out);
        if (ph_cmd->parsed())
            return cmd_property_h(ph_spec, ph_perms, out);
        err << "no subcommand\n";
        return 2;
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << "\n";
        return 1;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace arboreal::cli
