#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "formula.hpp"
#include "semantics.hpp"

namespace fmerge {

/// Seed for trial `index` of a run seeded with `master` (splitmix64 mix).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic across platforms: only the raw engine output is used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform-ish integer in [0, n). n must be positive.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    /// Uniform integer in [lo, hi].
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    bool coin() { return (engine_() >> 17) & 1; }
    bool chance(std::size_t num, std::size_t den) { return below(den) < num; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

/// p, q, r, s, t, u, v, w, then x8, x9, …
inline Vocabulary standard_vocabulary(std::size_t n) {
    static const char* base[] = {"p", "q", "r", "s", "t", "u", "v", "w"};
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back(i < 8 ? std::string(base[i]) : "x" + std::to_string(i));
    return Vocabulary(std::move(names));
}

inline Formula literal(const std::string& var, bool positive) {
    Formula a = Formula::atom(var);
    return positive ? a : Formula::negation(a);
}

/// Conjunction of one or more literals on distinct variables; `true` over an
/// empty vocabulary.
inline Formula random_term(Rng& rng, const Vocabulary& v) {
    if (v.empty()) return Formula::constant(true);
    std::vector<Formula> lits;
    for (const auto& name : v)
        if (rng.coin()) lits.push_back(literal(name, rng.coin()));
    if (lits.empty()) lits.push_back(literal(v[rng.below(v.size())], rng.coin()));
    return Formula::conjunction(std::move(lits));
}

/// Disjunction of 1..max_terms random terms. Always consistent.
inline Formula random_dnf(Rng& rng, const Vocabulary& v, std::size_t max_terms = 3) {
    std::vector<Formula> terms;
    const std::size_t n = rng.between(1, max_terms);
    for (std::size_t i = 0; i < n; ++i) terms.push_back(random_term(rng, v));
    return Formula::disjunction(std::move(terms));
}

/// A term satisfied by assignment `w` over `v`: a nonempty random subset of its literals.
inline Formula random_term_through(Rng& rng, const Vocabulary& v, Assignment w) {
    if (v.empty()) return Formula::constant(true);
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (rng.coin()) lits.push_back(literal(v[i], (w & bit_of(i, v.size())) != 0));
    if (lits.empty()) {
        std::size_t i = rng.below(v.size());
        lits.push_back(literal(v[i], (w & bit_of(i, v.size())) != 0));
    }
    return Formula::conjunction(std::move(lits));
}

/// Arbitrary formula using every connective, of depth at most `depth`.
inline Formula random_formula(Rng& rng, const Vocabulary& v, std::size_t depth) {
    if (depth == 0 || v.empty() || rng.chance(1, 4)) {
        if (v.empty() || rng.chance(1, 12)) return Formula::constant(rng.coin());
        return Formula::atom(v[rng.below(v.size())]);
    }
    switch (rng.below(6)) {
    case 0: return Formula::negation(random_formula(rng, v, depth - 1));
    case 1:
    case 2: {
        std::vector<Formula> ops;
        const std::size_t n = rng.between(2, 3);
        for (std::size_t i = 0; i < n; ++i) ops.push_back(random_formula(rng, v, depth - 1));
        return rng.coin() ? Formula::conjunction(std::move(ops)) : Formula::disjunction(std::move(ops));
    }
    case 3:
    case 4:
        return Formula::implication(random_formula(rng, v, depth - 1), random_formula(rng, v, depth - 1));
    default:
        return Formula::equivalence(random_formula(rng, v, depth - 1), random_formula(rng, v, depth - 1));
    }
}

/// Random formula with at least one model over `v`. Falls back to a term.
inline Formula random_consistent_formula(Rng& rng, const Vocabulary& v, std::size_t depth,
                                         const Limits& limits = {}) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Formula f = random_formula(rng, v, depth);
        if (!models(f, v, limits).empty()) return f;
    }
    return random_term(rng, v);
}

/// Equivalent formula built by double negation, De Morgan and
/// implication/biconditional expansion at random positions.
inline Formula random_rewrite(Rng& rng, const Formula& f) {
    std::vector<Formula> kids;
    for (const auto& c : f.children()) kids.push_back(random_rewrite(rng, c));
    Formula g = f;
    switch (f.kind()) {
    case Kind::negation: g = Formula::negation(kids[0]); break;
    case Kind::conjunction: g = Formula::conjunction(kids); break;
    case Kind::disjunction: g = Formula::disjunction(kids); break;
    case Kind::implication: g = Formula::implication(kids[0], kids[1]); break;
    case Kind::equivalence: g = Formula::equivalence(kids[0], kids[1]); break;
    default: break;
    }
    if (!rng.chance(1, 3)) return g;
    switch (g.kind()) {
    case Kind::conjunction:
    case Kind::disjunction: {
        std::vector<Formula> neg;
        for (const auto& c : g.children()) neg.push_back(Formula::negation(c));
        Formula dual = g.kind() == Kind::conjunction ? Formula::disjunction(std::move(neg))
                                                     : Formula::conjunction(std::move(neg));
        return Formula::negation(std::move(dual));
    }
    case Kind::implication:
        return Formula::disjunction({Formula::negation(g.children()[0]), g.children()[1]});
    case Kind::equivalence:
        return Formula::conjunction({Formula::implication(g.children()[0], g.children()[1]),
                                     Formula::implication(g.children()[1], g.children()[0])});
    default: return Formula::negation(Formula::negation(g));
    }
}

}  // namespace fmerge
