// fmerge: command-line front end for the merging engine.
//
//   fmerge merge  -f profile.txt -o f1 [--format dnf|models|table]
//   fmerge forget "S & T & P" --vars S,T,P
//   fmerge dilate "p & q" -n 1
//   fmerge equiv "p -> q" "!p | q"
//   fmerge check -o f1 --postulates IC0,IC1,A1 --trials 300 --seed 42 [--report out.json]

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmerge/fmerge.hpp"

namespace {

using namespace fmerge;

enum Exit : int {
    ok = 0,
    violation = 1,
    parse_error = 2,
    invalid_input = 3,
    inconsistent_constraint = 4,
    not_equivalent = 5,
};

constexpr std::size_t merge_warn_vars = 16;

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

void print_models(const ModelSet& m, const std::string& format) {
    if (format == "dnf") {
        std::cout << print(to_dnf(m)) << '\n';
        return;
    }
    const Vocabulary& v = m.vocabulary();
    if (format == "table") {
        std::cout << join(v.names(), " ") << '\n';
        for (std::size_t i = 0; i < m.size(); ++i) {
            auto w = m.at(i);
            for (std::size_t j = 0; j < v.size(); ++j) std::cout << (j ? " " : "") << w.value(j);
            std::cout << '\n';
        }
        return;
    }
    for (std::size_t i = 0; i < m.size(); ++i) std::cout << to_string(m.at(i)) << '\n';
}

// A formula given inline, or the conjunction of the kb lines of a profile
// file together with its declared variables.
struct Subject {
    Formula formula;
    Vocabulary vocabulary;
};

Subject load_subject(const std::optional<std::string>& inline_formula,
                     const std::optional<std::string>& file) {
    if (file) {
        ProfileFile pf = read_profile_file(*file);
        Formula f = Formula::conjunction(pf.kbs);
        return {f, unite(variables(f), pf.declared)};
    }
    if (!inline_formula) throw std::invalid_argument("give a formula or --input FILE");
    Formula f = parse(*inline_formula);
    return {f, variables(f)};
}

template <typename Body>
int guarded(Body&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return parse_error;
    } catch (const InconsistentKnowledgeBase& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return invalid_input;
    } catch (const VocabularyCapExceeded& e) {
        std::cerr << "invalid input: " << e.what() << " (raise it with --max-vocab)\n";
        return invalid_input;
    } catch (const InconsistentFormula& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return invalid_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invalid_input;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Belief merging with variable forgetting"};
    app.require_subcommand(1);

    std::size_t max_vocab = Limits{}.max_vars;
    app.add_option("--max-vocab", max_vocab, "Enumeration cap on vocabulary size")
        ->capture_default_str();

    // merge
    auto* merge_cmd = app.add_subcommand("merge", "Merge the knowledge bases of a profile file");
    std::string merge_file;
    std::string merge_op = "sigma";
    std::string merge_format = "dnf";
    merge_cmd->add_option("-f,--input", merge_file, "Profile file")->required();
    merge_cmd->add_option("-o,--operator", merge_op, "sigma|max|gmax|f1|f2 (or *_forget)")
        ->capture_default_str();
    merge_cmd->add_option("--format", merge_format, "dnf|models|table")
        ->check(CLI::IsMember({"dnf", "models", "table"}))
        ->capture_default_str();
    merge_cmd->add_option("--max-vocab", max_vocab, "Enumeration cap on vocabulary size");

    // forget
    auto* forget_cmd = app.add_subcommand("forget", "Forget variables from a formula");
    std::optional<std::string> forget_formula, forget_file;
    std::string forget_vars;
    forget_cmd->add_option("formula", forget_formula, "Formula text");
    forget_cmd->add_option("-f,--input", forget_file, "Profile file (its kb lines are conjoined)");
    forget_cmd->add_option("--vars", forget_vars, "Comma-separated variables")->required();
    forget_cmd->add_option("--max-vocab", max_vocab, "Enumeration cap on vocabulary size");

    // dilate
    auto* dilate_cmd = app.add_subcommand("dilate", "Distance-n dilation of a formula");
    std::optional<std::string> dilate_formula, dilate_file;
    std::size_t dilate_n = 1;
    dilate_cmd->add_option("formula", dilate_formula, "Formula text");
    dilate_cmd->add_option("-f,--input", dilate_file, "Profile file (its kb lines are conjoined)");
    dilate_cmd->add_option("-n", dilate_n, "Dalal radius")->required();
    dilate_cmd->add_option("--max-vocab", max_vocab, "Enumeration cap on vocabulary size");

    // equiv
    auto* equiv_cmd = app.add_subcommand("equiv", "Test two formulas for logical equivalence");
    std::string equiv_a, equiv_b;
    equiv_cmd->add_option("first", equiv_a)->required();
    equiv_cmd->add_option("second", equiv_b)->required();
    equiv_cmd->add_option("--max-vocab", max_vocab, "Enumeration cap on vocabulary size");

    // check
    auto* check_cmd = app.add_subcommand("check", "Randomized postulate checks for an operator");
    std::string check_op;
    std::string check_postulates;
    std::size_t trials = 300;
    Bounds bounds;
    std::optional<std::string> report_path;
    check_cmd->add_option("op", check_op, "sigma|max|gmax|f1|f2 (or *_forget)");
    check_cmd->add_option("-o,--operator", check_op, "Same as the positional operator");
    check_cmd->add_option("--postulates", check_postulates, "Comma-separated (default: all)");
    check_cmd->add_option("--trials", trials)->capture_default_str();
    check_cmd->add_option("--max-vars", bounds.max_vars)->capture_default_str();
    check_cmd->add_option("--max-kbs", bounds.max_kbs)->capture_default_str();
    check_cmd->add_option("--seed", bounds.seed)->capture_default_str();
    check_cmd->add_option("--report", report_path, "Write a JSON report here");
    check_cmd->add_option("--max-vocab", max_vocab, "Enumeration cap on vocabulary size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage errors share the invalid-input exit code; --help still exits 0.
        return app.exit(e) == 0 ? int{ok} : int{invalid_input};
    }
    const Limits limits{max_vocab};

    if (*merge_cmd) {
        return guarded([&] {
            auto op = parse_operator(merge_op);
            if (!op) throw std::invalid_argument("unknown operator '" + merge_op + "'");
            Profile profile = read_profile_file(merge_file).to_profile(limits);
            if (profile.vocabulary().size() > merge_warn_vars)
                std::cerr << "warning: " << profile.vocabulary().size()
                          << " variables; enumeration is exponential\n";
            MergeResult r = merge(*op, profile);
            print_models(r.model_set, merge_format);
            std::cerr << "operator: " << to_string(r.op) << '\n';
            std::cerr << "vocabulary: " << join(profile.vocabulary().names(), ", ") << '\n';
            std::cerr << "models: " << r.model_set.size() << '\n';
            if (r.k) std::cerr << "k: " << *r.k << '\n';
            if (r.tuple) {
                std::vector<std::string> parts;
                for (auto c : *r.tuple) parts.push_back(std::to_string(c));
                std::cerr << "T: (" << join(parts, ", ") << ")\n";
            }
            if (r.family) std::cerr << "FS: " << to_string(*r.family) << '\n';
            if (r.degenerate) {
                std::cerr << "warning: the constraint is inconsistent; result is false\n";
                return int{inconsistent_constraint};
            }
            return int{ok};
        });
    }

    if (*forget_cmd) {
        return guarded([&] {
            Subject s = load_subject(forget_formula, forget_file);
            Vocabulary vars(split_list(forget_vars));
            for (const auto& name : vars)
                if (!is_identifier(name)) throw ParseError(1, 1, name, "invalid variable name");
            Formula result = forget(s.formula, vars);
            ModelSet m = models(result, subtract(s.vocabulary, vars), limits);
            print_models(m, "dnf");
            std::cout << "models: " << m.size() << '\n';
            return int{ok};
        });
    }

    if (*dilate_cmd) {
        return guarded([&] {
            Subject s = load_subject(dilate_formula, dilate_file);
            ModelSet m = dilation_models(s.formula, dilate_n, s.vocabulary, limits);
            print_models(m, "dnf");
            std::cout << "models: " << m.size() << '\n';
            return int{ok};
        });
    }

    if (*equiv_cmd) {
        return guarded([&] {
            Formula a = parse(equiv_a);
            Formula b = parse(equiv_b);
            Vocabulary v = unite(variables(a), variables(b));
            ModelSet ma = models(a, v, limits);
            ModelSet mb = models(b, v, limits);
            if (ma == mb) {
                std::cout << "equivalent\n";
                return int{ok};
            }
            std::cout << "not equivalent\n";
            for (Assignment w = 0; w < (Assignment{1} << v.size()); ++w) {
                if (ma.contains(w) != mb.contains(w)) {
                    std::cout << "distinguishing model: " << to_string(Interpretation(v, w))
                              << (ma.contains(w) ? " (satisfies the first only)"
                                                 : " (satisfies the second only)")
                              << '\n';
                    break;
                }
            }
            return int{not_equivalent};
        });
    }

    if (*check_cmd) {
        return guarded([&] {
            if (check_op.empty()) throw std::invalid_argument("check needs an operator");
            auto op = parse_operator(check_op);
            if (!op) throw std::invalid_argument("unknown operator '" + check_op + "'");
            std::vector<Postulate> posts;
            if (check_postulates.empty()) {
                posts.assign(all_postulates.begin(), all_postulates.end());
            } else {
                for (const auto& name : split_list(check_postulates)) {
                    auto p = parse_postulate(name);
                    if (!p) throw std::invalid_argument("unknown postulate '" + name + "'");
                    posts.push_back(*p);
                }
            }
            if (bounds.max_vars == 0 || bounds.max_kbs == 0 || trials == 0)
                throw std::invalid_argument("--trials, --max-vars and --max-kbs must be positive");

            nlohmann::json report = nlohmann::json::array();
            bool all_claims_hold = true;
            std::cout << "operator " << to_string(*op) << ", " << trials << " trials, max-vars "
                      << bounds.max_vars << ", max-kbs " << bounds.max_kbs << ", seed "
                      << bounds.seed << '\n';
            for (Postulate p : posts) {
                CheckReport r = check_randomized(p, *op, trials, bounds, limits);
                const Claim claim = claimed(*op, p);
                std::string note;
                switch (claim) {
                case Claim::holds:
                    note = "claimed to hold";
                    if (r.verdict == Verdict::fail) {
                        note += "; VIOLATED";
                        all_claims_hold = false;
                    }
                    break;
                case Claim::fails:
                    note = r.verdict == Verdict::fail ? "claimed to fail; witness found"
                                                      : "claimed to fail; no witness found (inconclusive)";
                    break;
                case Claim::unclaimed: note = "no claim"; break;
                }
                std::cout << to_string(p) << "\t" << to_string(r.verdict) << "\t"
                          << r.violation_count << "/" << r.trials << " violations\t" << note
                          << '\n';
                if (!r.violations.empty()) {
                    const auto& w = r.violations.front();
                    std::cout << "  first witness (trial " << w.trial << "):\n";
                    std::istringstream lines(write_profile_file(
                        {w.instance.profile, w.instance.constraint, w.instance.vocabulary}));
                    for (std::string line; std::getline(lines, line);)
                        std::cout << "    " << line << '\n';
                    if (!w.instance.second_profile.empty()) {
                        std::cout << "  second profile:\n";
                        std::istringstream more(write_profile_file(
                            {w.instance.second_profile,
                             w.instance.second_constraint == Formula::constant(true)
                                 ? std::nullopt
                                 : std::optional<Formula>(w.instance.second_constraint),
                             {}}));
                        for (std::string line; std::getline(more, line);)
                            std::cout << "    " << line << '\n';
                    }
                }
                report.push_back(to_json(r));
            }
            if (report_path) {
                std::ofstream out(*report_path);
                if (!out) throw std::runtime_error("cannot write '" + *report_path + "'");
                out << report.dump(2) << '\n';
            }
            return all_claims_hold ? int{ok} : int{violation};
        });
    }
    return ok;
}
