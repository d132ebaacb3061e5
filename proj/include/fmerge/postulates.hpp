#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "formula.hpp"
#include "generators.hpp"
#include "merging.hpp"
#include "profile_file.hpp"
#include "semantics.hpp"
#include "syntax.hpp"

namespace fmerge {

// =============================================================================
// Postulate identifiers and the claimed verdict matrix
// =============================================================================

enum class Postulate { IC0, IC1, IC2, IC3, IC4, IC5, IC6, IC7, IC8, Maj, MI, A1, A2 };

inline constexpr std::array all_postulates{
    Postulate::IC0, Postulate::IC1, Postulate::IC2, Postulate::IC3, Postulate::IC4,
    Postulate::IC5, Postulate::IC6, Postulate::IC7, Postulate::IC8, Postulate::Maj,
    Postulate::MI,  Postulate::A1,  Postulate::A2,
};

inline std::string_view to_string(Postulate p) {
    static constexpr std::array<std::string_view, 13> names{
        "IC0", "IC1", "IC2", "IC3", "IC4", "IC5", "IC6", "IC7", "IC8", "Maj", "MI", "A1", "A2"};
    return names[static_cast<std::size_t>(p)];
}

inline std::optional<Postulate> parse_postulate(std::string_view s) {
    for (auto p : all_postulates)
        if (to_string(p) == s) return p;
    return std::nullopt;
}

/// What the operator is known to do for a postulate.
enum class Claim { holds, fails, unclaimed };

inline Claim claimed(Operator op, Postulate p) {
    using P = Postulate;
    auto in = [p](std::initializer_list<P> ps) {
        return std::find(ps.begin(), ps.end(), p) != ps.end();
    };
    switch (op) {
    case Operator::sigma:
    case Operator::sigma_forget:
        if (in({P::IC0, P::IC1, P::IC2, P::IC3, P::IC4, P::IC5, P::IC6, P::IC7, P::IC8, P::Maj}))
            return Claim::holds;
        return Claim::unclaimed;
    case Operator::max:
    case Operator::max_forget:
        if (in({P::IC0, P::IC1, P::IC2, P::IC3, P::IC4, P::IC5, P::IC7, P::IC8, P::MI}))
            return Claim::holds;
        if (in({P::IC6, P::Maj})) return Claim::fails;
        return Claim::unclaimed;
    case Operator::gmax:
    case Operator::gmax_forget:
        if (in({P::IC0, P::IC1, P::IC2, P::IC3, P::IC4, P::IC5, P::IC6, P::IC7, P::IC8}))
            return Claim::holds;
        return Claim::unclaimed;
    case Operator::f1:
        if (in({P::IC0, P::IC1, P::IC2, P::IC3, P::IC4, P::IC7, P::IC8, P::MI, P::A1, P::A2}))
            return Claim::holds;
        if (in({P::IC5, P::IC6})) return Claim::fails;
        return Claim::unclaimed;
    case Operator::f2:
        if (in({P::IC0, P::IC1, P::IC2, P::IC3, P::IC4, P::IC7, P::MI, P::A1, P::A2}))
            return Claim::holds;
        if (p == P::IC8) return Claim::fails;
        return Claim::unclaimed;
    }
    return Claim::unclaimed;
}

// =============================================================================
// Instances
// =============================================================================

class MalformedInstance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The objects a postulate quantifies over. Unused fields keep their defaults.
struct Instance {
    Postulate postulate = Postulate::IC0;
    /// Shared working vocabulary of every profile built from the instance.
    Vocabulary vocabulary;
    /// Φ, Φ1, or the pair {φ, φ'} for IC4.
    std::vector<Formula> profile;
    /// Φ2 for IC3 (the equivalent profile), IC5, IC6, Maj and MI.
    std::vector<Formula> second_profile;
    /// μ or μ1.
    Formula constraint;
    /// μ2 for IC3 (the equivalent constraint), IC7 and IC8.
    Formula second_constraint;
    /// A1: positions of the subgroup entailing the literal.
    /// A2: positions of the KBs entailing the literal and its negation.
    std::vector<std::size_t> marked;
    Formula literal;
};

/// Outcome of one postulate check together with the two model sets compared.
struct Evidence {
    bool holds = true;
    ModelSet lhs;
    ModelSet rhs;
};

namespace detail {

inline bool is_literal(const Formula& f) {
    return f.kind() == Kind::atom ||
           (f.kind() == Kind::negation && f.children()[0].kind() == Kind::atom);
}

inline const std::string& literal_variable(const Formula& f) {
    return f.kind() == Kind::atom ? f.name() : f.children()[0].name();
}

class Evaluator {
public:
    /// Works over the declared vocabulary widened by every variable the instance mentions.
    Evaluator(Operator op, const Instance& inst, const Limits& limits)
        : op_(op), limits_(limits) {
        std::vector<Formula> all = inst.profile;
        all.insert(all.end(), inst.second_profile.begin(), inst.second_profile.end());
        all.insert(all.end(), {inst.constraint, inst.second_constraint, inst.literal});
        vocabulary_ = unite(inst.vocabulary, variables(all));
        check_cap(vocabulary_, limits_);
    }

    ModelSet merged(std::vector<Formula> kbs, const Formula& mu) const {
        return merge(op_, Profile(std::move(kbs), mu, vocabulary_, limits_)).model_set;
    }

    ModelSet mods(const Formula& f) const { return models(f, vocabulary_, limits_); }

    ModelSet conj_models(std::span<const Formula> fs) const {
        ModelSet acc = ModelSet::all(vocabulary_, limits_);
        for (const auto& f : fs) acc = acc & mods(f);
        return acc;
    }

    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }

private:
    Operator op_;
    Limits limits_;
    Vocabulary vocabulary_;
};

// Multiset bijection between pairwise-equivalent formulas.
inline bool equivalent_profiles(const Evaluator& ev, std::span<const Formula> a,
                                std::span<const Formula> b) {
    if (a.size() != b.size()) return false;
    std::vector<ModelSet> rest;
    for (const auto& f : b) rest.push_back(ev.mods(f));
    for (const auto& f : a) {
        ModelSet m = ev.mods(f);
        auto it = std::find(rest.begin(), rest.end(), m);
        if (it == rest.end()) return false;
        rest.erase(it);
    }
    return true;
}

inline void require(bool cond, const char* what) {
    if (!cond) throw MalformedInstance(what);
}

}  // namespace detail

/// Maximum repetition tried for the majority postulate.
inline constexpr std::size_t majority_bound = 8;
/// Repetitions sampled for majority independence.
inline constexpr std::array<std::size_t, 2> independence_samples{2, 3};

/// Evaluates the postulate's implication on `inst`. A false antecedent holds.
inline Evidence evaluate(Postulate post, Operator op, const Instance& inst,
                         const Limits& limits = {}) {
    using detail::require;
    require(!inst.profile.empty(), "instance has an empty profile");
    const detail::Evaluator ev(op, inst, limits);
    const Formula& mu = inst.constraint;
    const ModelSet none(ev.vocabulary(), {});
    Evidence e{true, none, none};

    switch (post) {
    case Postulate::IC0:
        e.lhs = ev.merged(inst.profile, mu);
        e.rhs = ev.mods(mu);
        e.holds = e.lhs.subset_of(e.rhs);
        return e;
    case Postulate::IC1:
        e.lhs = ev.merged(inst.profile, mu);
        e.rhs = ev.mods(mu);
        e.holds = e.rhs.empty() || !e.lhs.empty();
        return e;
    case Postulate::IC2: {
        std::vector<Formula> all = inst.profile;
        all.push_back(mu);
        e.rhs = ev.conj_models(all);
        if (e.rhs.empty()) return e;
        e.lhs = ev.merged(inst.profile, mu);
        e.holds = e.lhs == e.rhs;
        return e;
    }
    case Postulate::IC3:
        require(!inst.second_profile.empty(), "IC3 needs a second profile");
        if (!detail::equivalent_profiles(ev, inst.profile, inst.second_profile) ||
            !(ev.mods(mu) == ev.mods(inst.second_constraint)))
            return e;
        e.lhs = ev.merged(inst.profile, mu);
        e.rhs = ev.merged(inst.second_profile, inst.second_constraint);
        e.holds = e.lhs == e.rhs;
        return e;
    case Postulate::IC4: {
        require(inst.profile.size() == 2, "IC4 needs a two-KB profile");
        const ModelSet mu_m = ev.mods(mu);
        const ModelSet a = ev.mods(inst.profile[0]);
        const ModelSet b = ev.mods(inst.profile[1]);
        if (!a.subset_of(mu_m) || !b.subset_of(mu_m)) return e;
        const ModelSet merged = ev.merged(inst.profile, mu);
        e.lhs = merged & a;
        e.rhs = merged & b;
        e.holds = e.lhs.empty() || !e.rhs.empty();
        return e;
    }
    case Postulate::IC5:
    case Postulate::IC6: {
        require(!inst.second_profile.empty(), "IC5/IC6 need a second profile");
        const ModelSet both =
            ev.merged(inst.profile, mu) & ev.merged(inst.second_profile, mu);
        const ModelSet joined = ev.merged(concat(inst.profile, inst.second_profile), mu);
        if (post == Postulate::IC5) {
            e.lhs = both;
            e.rhs = joined;
            e.holds = both.subset_of(joined);
        } else {
            e.lhs = joined;
            e.rhs = both;
            e.holds = both.empty() || joined.subset_of(both);
        }
        return e;
    }
    case Postulate::IC7:
    case Postulate::IC8: {
        const Formula& mu2 = inst.second_constraint;
        const ModelSet restricted = ev.merged(inst.profile, mu) & ev.mods(mu2);
        const ModelSet combined = ev.merged(inst.profile, Formula::conjunction({mu, mu2}));
        if (post == Postulate::IC7) {
            e.lhs = restricted;
            e.rhs = combined;
            e.holds = restricted.subset_of(combined);
        } else {
            e.lhs = combined;
            e.rhs = restricted;
            e.holds = restricted.empty() || combined.subset_of(restricted);
        }
        return e;
    }
    case Postulate::Maj: {
        require(!inst.second_profile.empty(), "Maj needs a second profile");
        e.rhs = ev.merged(inst.second_profile, mu);
        for (std::size_t n = 1; n <= majority_bound; ++n) {
            e.lhs = ev.merged(concat(inst.profile, inst.second_profile, n), mu);
            if (e.lhs.subset_of(e.rhs)) return e;
        }
        e.holds = false;
        return e;
    }
    case Postulate::MI: {
        require(!inst.second_profile.empty(), "MI needs a second profile");
        e.rhs = ev.merged(concat(inst.profile, inst.second_profile), mu);
        for (std::size_t n : independence_samples) {
            e.lhs = ev.merged(concat(inst.profile, inst.second_profile, n), mu);
            if (!(e.lhs == e.rhs)) {
                e.holds = false;
                return e;
            }
        }
        return e;
    }
    case Postulate::A1: {
        require(detail::is_literal(inst.literal), "A1 needs a literal");
        require(!inst.marked.empty(), "A1 needs a nonempty subgroup");
        const std::string& var = detail::literal_variable(inst.literal);
        std::vector<bool> in_group(inst.profile.size(), false);
        for (std::size_t i : inst.marked) {
            require(i < inst.profile.size(), "A1 subgroup index out of range");
            in_group[i] = true;
        }
        const ModelSet lit = ev.mods(inst.literal);
        const ModelSet mu_m = ev.mods(mu);
        if ((mu_m & lit).empty()) return e;
        for (std::size_t i = 0; i < inst.profile.size(); ++i) {
            if (in_group[i] && !ev.mods(inst.profile[i]).subset_of(lit)) return e;
            if (!in_group[i] && variables(inst.profile[i]).contains(var)) return e;
        }
        e.lhs = ev.merged(inst.profile, mu);
        e.rhs = lit & mu_m;
        e.holds = e.lhs.subset_of(e.rhs);
        return e;
    }
    case Postulate::A2: {
        require(detail::is_literal(inst.literal), "A2 needs a literal");
        require(inst.marked.size() == 2 && inst.marked[0] < inst.profile.size() &&
                    inst.marked[1] < inst.profile.size(),
                "A2 needs two KB positions");
        const ModelSet lit = ev.mods(inst.literal);
        const ModelSet neg = ev.mods(Formula::negation(inst.literal));
        if (!ev.mods(inst.profile[inst.marked[0]]).subset_of(lit) ||
            !ev.mods(inst.profile[inst.marked[1]]).subset_of(neg))
            return e;
        e.lhs = ev.merged(inst.profile, mu);
        e.rhs = lit;
        e.holds = !e.lhs.subset_of(lit) && !e.lhs.subset_of(neg);
        return e;
    }
    }
    throw MalformedInstance("unknown postulate");
}

inline bool check(Postulate post, Operator op, const Instance& inst, const Limits& limits = {}) {
    return evaluate(post, op, inst, limits).holds;
}

// =============================================================================
// Random instances
// =============================================================================

struct Bounds {
    std::size_t max_vars = 4;
    std::size_t max_kbs = 3;
    std::uint64_t seed = 42;
    /// A1/A2 only: draw μ over the variables other than the literal's.
    bool literal_free_constraint = false;
};

namespace detail {

inline std::vector<Formula> random_profile(Rng& rng, const Vocabulary& v, std::size_t n) {
    std::vector<Formula> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_dnf(rng, v));
    return out;
}

inline Formula random_constraint(Rng& rng, const Vocabulary& v) {
    return rng.chance(1, 4) ? Formula::constant(true) : random_dnf(rng, v);
}

inline Assignment random_assignment(Rng& rng, const Vocabulary& v) {
    return v.empty() ? 0 : static_cast<Assignment>(rng.below(std::size_t{1} << v.size()));
}

// `f & extra`, or a term through a model of `extra` when that is inconsistent.
inline Formula consistent_with(Rng& rng, const Formula& f, const Formula& extra,
                               const Vocabulary& v, const Limits& limits) {
    Formula g = Formula::conjunction({f, extra});
    ModelSet m = models(g, v, limits);
    if (!m.empty()) return g;
    ModelSet em = models(extra, v, limits);
    return Formula::conjunction({random_term_through(rng, v, em.members()[rng.below(em.size())]), extra});
}

inline std::pair<std::size_t, std::size_t> split_sizes(Rng& rng, std::size_t max_kbs) {
    const std::size_t total = std::max<std::size_t>(2, max_kbs);
    const std::size_t a = rng.between(1, total - 1);
    const std::size_t b = rng.between(1, total - a);
    return {a, b};
}

}  // namespace detail

/// Random instance meeting `post`'s preconditions; identical for equal seeds.
/// Every knowledge base and constraint is consistent.
inline Instance generate_instance(Postulate post, const Bounds& bounds, std::uint64_t seed,
                                  const Limits& limits = {}) {
    if (bounds.max_vars == 0 || bounds.max_kbs == 0)
        throw std::invalid_argument("bounds need at least one variable and one knowledge base");
    check_cap(standard_vocabulary(bounds.max_vars), limits);
    Rng rng(seed);
    Instance inst;
    inst.postulate = post;
    inst.vocabulary = standard_vocabulary(rng.between(std::min<std::size_t>(2, bounds.max_vars),
                                                      bounds.max_vars));
    const Vocabulary& v = inst.vocabulary;
    inst.constraint = detail::random_constraint(rng, v);
    inst.second_constraint = Formula::constant(true);
    const std::size_t n = rng.between(1, bounds.max_kbs);

    switch (post) {
    case Postulate::IC0:
    case Postulate::IC1:
        inst.profile = detail::random_profile(rng, v, n);
        break;
    case Postulate::IC2: {
        inst.profile = detail::random_profile(rng, v, n);
        std::vector<Formula> all = inst.profile;
        all.push_back(inst.constraint);
        if (models(Formula::conjunction(all), v, limits).empty()) {
            const Assignment w = detail::random_assignment(rng, v);
            for (auto& kb : inst.profile)
                kb = Formula::disjunction({kb, random_term_through(rng, v, w)});
            inst.constraint =
                Formula::disjunction({inst.constraint, random_term_through(rng, v, w)});
        }
        break;
    }
    case Postulate::IC3: {
        inst.profile = detail::random_profile(rng, v, n);
        for (const auto& kb : inst.profile) inst.second_profile.push_back(random_rewrite(rng, kb));
        rng.shuffle(inst.second_profile);
        inst.second_constraint = random_rewrite(rng, inst.constraint);
        break;
    }
    case Postulate::IC4:
        for (int i = 0; i < 2; ++i)
            inst.profile.push_back(
                detail::consistent_with(rng, random_dnf(rng, v), inst.constraint, v, limits));
        break;
    case Postulate::IC5:
    case Postulate::IC6:
    case Postulate::Maj:
    case Postulate::MI: {
        auto [a, b] = detail::split_sizes(rng, bounds.max_kbs);
        inst.profile = detail::random_profile(rng, v, a);
        inst.second_profile = detail::random_profile(rng, v, b);
        break;
    }
    case Postulate::IC7:
    case Postulate::IC8:
        inst.profile = detail::random_profile(rng, v, n);
        inst.second_constraint = random_dnf(rng, v);
        if (models(Formula::conjunction({inst.constraint, inst.second_constraint}), v, limits).empty()) {
            ModelSet m1 = models(inst.constraint, v, limits);
            inst.second_constraint = Formula::disjunction(
                {inst.second_constraint,
                 random_term_through(rng, v, m1.members()[rng.below(m1.size())])});
        }
        break;
    case Postulate::A1: {
        const std::string var = v[rng.below(v.size())];
        inst.literal = literal(var, rng.coin());
        const Vocabulary others = subtract(v, Vocabulary{var});
        const std::size_t group = rng.between(1, n);
        for (std::size_t i = 0; i < n; ++i) {
            Formula base = random_dnf(rng, others);
            inst.profile.push_back(i < group ? Formula::conjunction({base, inst.literal}) : base);
        }
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        rng.shuffle(order);
        std::vector<Formula> shuffled(n);
        for (std::size_t i = 0; i < n; ++i) {
            shuffled[order[i]] = inst.profile[i];
            if (i < group) inst.marked.push_back(order[i]);
        }
        std::sort(inst.marked.begin(), inst.marked.end());
        inst.profile = std::move(shuffled);
        const Vocabulary& mu_vars = bounds.literal_free_constraint ? others : v;
        if (bounds.literal_free_constraint) inst.constraint = detail::random_constraint(rng, others);
        while (models(Formula::conjunction({inst.constraint, inst.literal}), v, limits).empty())
            inst.constraint = detail::random_constraint(rng, mu_vars);
        break;
    }
    case Postulate::A2: {
        const std::size_t m = std::max<std::size_t>(2, n);
        const std::string var = v[rng.below(v.size())];
        inst.literal = literal(var, rng.coin());
        if (bounds.literal_free_constraint)
            inst.constraint = detail::random_constraint(rng, subtract(v, Vocabulary{var}));
        const Formula negated = Formula::negation(inst.literal);
        inst.profile = detail::random_profile(rng, v, m);
        std::size_t i = rng.below(m);
        std::size_t j = rng.below(m - 1);
        if (j >= i) ++j;
        inst.profile[i] = detail::consistent_with(rng, inst.profile[i], inst.literal, v, limits);
        inst.profile[j] = detail::consistent_with(rng, inst.profile[j], negated, v, limits);
        inst.marked = {i, j};
        break;
    }
    }
    return inst;
}

// =============================================================================
// Randomized checking and reports
// =============================================================================

enum class Verdict { pass, fail, bounded_pass };

inline std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::bounded_pass: return "bounded-pass";
    }
    return "?";
}

struct Violation {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    Instance instance;
    Evidence evidence;
};

struct CheckReport {
    Postulate postulate = Postulate::IC0;
    Operator op = Operator::sigma;
    std::size_t trials = 0;
    std::size_t violation_count = 0;
    /// The first violations found, at most `stored_violation_limit`.
    std::vector<Violation> violations;
    Verdict verdict = Verdict::pass;
};

inline constexpr std::size_t stored_violation_limit = 16;

/// Runs `budget` seeded trials. Trial i uses `derive_seed(bounds.seed, i)`.
inline CheckReport check_randomized(Postulate post, Operator op, std::size_t budget,
                                    const Bounds& bounds, const Limits& limits = {}) {
    CheckReport report;
    report.postulate = post;
    report.op = op;
    report.trials = budget;
    for (std::size_t i = 0; i < budget; ++i) {
        const std::uint64_t seed = derive_seed(bounds.seed, i);
        Instance inst = generate_instance(post, bounds, seed, limits);
        Evidence e = evaluate(post, op, inst, limits);
        if (e.holds) continue;
        ++report.violation_count;
        if (report.violations.size() < stored_violation_limit)
            report.violations.push_back({i, seed, std::move(inst), std::move(e)});
    }
    if (report.violation_count > 0)
        report.verdict = Verdict::fail;
    else if (post == Postulate::Maj || post == Postulate::MI)
        report.verdict = Verdict::bounded_pass;
    return report;
}

// ---- serialization ----------------------------------------------------------

inline nlohmann::json models_to_json(const ModelSet& m) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) out.push_back(to_string(m.at(i)));
    return out;
}

inline nlohmann::json to_json(const Instance& inst) {
    nlohmann::json j;
    j["postulate"] = std::string(to_string(inst.postulate));
    j["vars"] = inst.vocabulary.names();
    j["profile"] = write_profile_file({inst.profile, inst.constraint, inst.vocabulary});
    if (!inst.second_profile.empty())
        j["second_profile"] =
            write_profile_file({inst.second_profile, inst.second_constraint, inst.vocabulary});
    j["second_constraint"] = print(inst.second_constraint);
    j["marked"] = inst.marked;
    j["literal"] = print(inst.literal);
    return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
    Instance inst;
    auto post = parse_postulate(j.at("postulate").get<std::string>());
    if (!post) throw MalformedInstance("unknown postulate in serialized instance");
    inst.postulate = *post;
    inst.vocabulary = Vocabulary(j.at("vars").get<std::vector<std::string>>());
    ProfileFile first = parse_profile_file(j.at("profile").get<std::string>());
    inst.profile = std::move(first.kbs);
    inst.constraint = first.constraint_or_true();
    if (j.contains("second_profile"))
        inst.second_profile = parse_profile_file(j.at("second_profile").get<std::string>()).kbs;
    inst.second_constraint = parse(j.at("second_constraint").get<std::string>());
    inst.marked = j.at("marked").get<std::vector<std::size_t>>();
    inst.literal = parse(j.at("literal").get<std::string>());
    return inst;
}

inline nlohmann::json to_json(const CheckReport& r) {
    nlohmann::json j;
    j["postulate"] = std::string(to_string(r.postulate));
    j["operator"] = std::string(to_string(r.op));
    j["trials"] = r.trials;
    j["violation_count"] = r.violation_count;
    j["verdict"] = std::string(to_string(r.verdict));
    j["violations"] = nlohmann::json::array();
    for (const auto& v : r.violations) {
        nlohmann::json vj;
        vj["trial"] = v.trial;
        vj["seed"] = v.seed;
        vj["instance"] = to_json(v.instance);
        vj["lhs"] = models_to_json(v.evidence.lhs);
        vj["rhs"] = models_to_json(v.evidence.rhs);
        j["violations"].push_back(std::move(vj));
    }
    return j;
}

/// Re-evaluates a serialized violation. True when it still violates.
inline bool replay_violation(const nlohmann::json& violation, Operator op,
                             const Limits& limits = {}) {
    Instance inst = instance_from_json(violation.at("instance"));
    return !evaluate(inst.postulate, op, inst, limits).holds;
}

/// True when every stored violation in a serialized report still violates.
inline bool replay_report(const nlohmann::json& report, const Limits& limits = {}) {
    auto op = parse_operator(report.at("operator").get<std::string>());
    if (!op) throw MalformedInstance("unknown operator in report");
    for (const auto& v : report.at("violations"))
        if (!replay_violation(v, *op, limits)) return false;
    return true;
}

}  // namespace fmerge
