#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "formula.hpp"

namespace fmerge {

// =============================================================================
// Errors and limits
// =============================================================================

class UnknownVariable : public std::runtime_error {
public:
    explicit UnknownVariable(const std::string& name)
        : std::runtime_error("variable '" + name + "' is not in the vocabulary"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class VocabularyCapExceeded : public std::runtime_error {
public:
    VocabularyCapExceeded(std::size_t size, std::size_t cap)
        : std::runtime_error("vocabulary of " + std::to_string(size) +
                             " variables exceeds the enumeration cap of " + std::to_string(cap)) {}
};

class VocabularyMismatch : public std::invalid_argument {
public:
    VocabularyMismatch() : std::invalid_argument("operands are over different vocabularies") {}
};

/// Raised where a quantity is a minimum over the models of an inconsistent formula.
class InconsistentFormula : public std::domain_error {
public:
    explicit InconsistentFormula(const std::string& what) : std::domain_error(what) {}
};

/// Hard ceiling: assignments are packed in 64 bits.
inline constexpr std::size_t max_supported_vars = 62;

struct Limits {
    std::size_t max_vars = 24;
};

inline void check_cap(const Vocabulary& v, const Limits& limits) {
    const std::size_t cap = std::min(limits.max_vars, max_supported_vars);
    if (v.size() > cap) throw VocabularyCapExceeded(v.size(), cap);
}

// =============================================================================
// Interpretations
// =============================================================================

/// Packed truth assignment. The first variable of the vocabulary is the most
/// significant bit, so increasing integers enumerate assignments in order.
using Assignment = std::uint64_t;

inline Assignment bit_of(std::size_t index, std::size_t width) {
    return Assignment{1} << (width - 1 - index);
}

inline std::size_t dalal(Assignment a, Assignment b) {
    return static_cast<std::size_t>(std::popcount(a ^ b));
}

class Interpretation {
public:
    Interpretation(Vocabulary vocabulary, Assignment bits)
        : vocabulary_(std::move(vocabulary)), bits_(bits) {
        if (vocabulary_.size() < 64 && (bits_ >> vocabulary_.size()) != 0)
            throw std::invalid_argument("assignment has bits outside the vocabulary");
    }

    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    Assignment bits() const noexcept { return bits_; }

    bool value(std::size_t index) const { return (bits_ & bit_of(index, vocabulary_.size())) != 0; }

    bool value(std::string_view name) const {
        auto i = vocabulary_.index_of(name);
        if (!i) throw UnknownVariable(std::string(name));
        return value(*i);
    }

    /// The interpretation agreeing everywhere except on `name`.
    Interpretation switched(std::string_view name) const {
        auto i = vocabulary_.index_of(name);
        if (!i) throw UnknownVariable(std::string(name));
        return {vocabulary_, bits_ ^ bit_of(*i, vocabulary_.size())};
    }

    friend bool operator==(const Interpretation& a, const Interpretation& b) {
        return a.bits_ == b.bits_ && a.vocabulary_ == b.vocabulary_;
    }

private:
    Vocabulary vocabulary_;
    Assignment bits_;
};

/// Hamming distance between two interpretations over the same vocabulary.
inline std::size_t dalal(const Interpretation& a, const Interpretation& b) {
    if (!(a.vocabulary() == b.vocabulary())) throw VocabularyMismatch();
    return dalal(a.bits(), b.bits());
}

/// "p=1 q=0" rendering in vocabulary order.
inline std::string to_string(const Interpretation& w) {
    std::string out;
    for (std::size_t i = 0; i < w.vocabulary().size(); ++i) {
        if (i) out += ' ';
        out += w.vocabulary()[i];
        out += w.value(i) ? "=1" : "=0";
    }
    return out;
}

// =============================================================================
// Model sets
// =============================================================================

/// Set of interpretations over one vocabulary, kept in increasing bit order.
class ModelSet {
public:
    ModelSet() = default;

    ModelSet(Vocabulary vocabulary, std::vector<Assignment> members)
        : vocabulary_(std::move(vocabulary)), members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }

    static ModelSet all(const Vocabulary& v, const Limits& limits = {}) {
        check_cap(v, limits);
        std::vector<Assignment> m(std::size_t{1} << v.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = i;
        return {v, std::move(m)};
    }

    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    std::span<const Assignment> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }

    bool contains(Assignment a) const {
        return std::binary_search(members_.begin(), members_.end(), a);
    }

    bool contains(const Interpretation& w) const {
        if (!(w.vocabulary() == vocabulary_)) throw VocabularyMismatch();
        return contains(w.bits());
    }

    Interpretation at(std::size_t i) const { return {vocabulary_, members_.at(i)}; }

    bool subset_of(const ModelSet& other) const {
        same_vocabulary(other);
        return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                             members_.end());
    }

    friend bool operator==(const ModelSet& a, const ModelSet& b) {
        return a.vocabulary_ == b.vocabulary_ && a.members_ == b.members_;
    }

    friend ModelSet operator&(const ModelSet& a, const ModelSet& b) {
        a.same_vocabulary(b);
        std::vector<Assignment> out;
        std::set_intersection(a.members_.begin(), a.members_.end(), b.members_.begin(),
                              b.members_.end(), std::back_inserter(out));
        return {a.vocabulary_, std::move(out)};
    }

    friend ModelSet operator|(const ModelSet& a, const ModelSet& b) {
        a.same_vocabulary(b);
        std::vector<Assignment> out;
        std::set_union(a.members_.begin(), a.members_.end(), b.members_.begin(), b.members_.end(),
                       std::back_inserter(out));
        return {a.vocabulary_, std::move(out)};
    }

private:
    void same_vocabulary(const ModelSet& other) const {
        if (!(vocabulary_ == other.vocabulary_)) throw VocabularyMismatch();
    }

    Vocabulary vocabulary_;
    std::vector<Assignment> members_;
};

// =============================================================================
// Evaluation
// =============================================================================

/// A formula with atoms resolved to bit positions of a fixed vocabulary.
class CompiledFormula {
public:
    CompiledFormula(const Formula& f, const Vocabulary& v) : width_(v.size()) {
        emit(f, v);
    }

    bool operator()(Assignment a) const { return eval(0, a).first; }

private:
    struct Op {
        Kind kind;
        Assignment mask;      // atom bit, or constant value in bit 0
        std::uint32_t arity;  // number of direct children
        std::uint32_t size;   // ops in this subtree, self included
    };

    std::uint32_t emit(const Formula& f, const Vocabulary& v) {
        const std::size_t at = ops_.size();
        ops_.push_back({f.kind(), 0, static_cast<std::uint32_t>(f.children().size()), 1});
        if (f.kind() == Kind::atom) {
            auto i = v.index_of(f.name());
            if (!i) throw UnknownVariable(f.name());
            ops_[at].mask = bit_of(*i, width_);
        } else if (f.kind() == Kind::constant) {
            ops_[at].mask = f.value() ? 1 : 0;
        }
        std::uint32_t size = 1;
        for (const auto& c : f.children()) size += emit(c, v);
        ops_[at].size = size;
        return size;
    }

    // Returns the value and the index one past the subtree.
    std::pair<bool, std::size_t> eval(std::size_t i, Assignment a) const {
        const Op& op = ops_[i];
        const std::size_t end = i + op.size;
        switch (op.kind) {
        case Kind::constant: return {op.mask != 0, end};
        case Kind::atom: return {(a & op.mask) != 0, end};
        case Kind::negation: return {!eval(i + 1, a).first, end};
        case Kind::conjunction:
        case Kind::disjunction: {
            const bool short_on = op.kind == Kind::disjunction;
            std::size_t j = i + 1;
            for (std::uint32_t k = 0; k < op.arity; ++k) {
                auto [v, next] = eval(j, a);
                if (v == short_on) return {short_on, end};
                j = next;
            }
            return {!short_on, end};
        }
        case Kind::implication: {
            auto [l, next] = eval(i + 1, a);
            return {!l || eval(next, a).first, end};
        }
        case Kind::equivalence: {
            auto [l, next] = eval(i + 1, a);
            return {l == eval(next, a).first, end};
        }
        }
        return {false, end};
    }

    std::size_t width_;
    std::vector<Op> ops_;
};

inline bool evaluate(const Formula& f, const Interpretation& w) {
    return CompiledFormula(f, w.vocabulary())(w.bits());
}

/// Every interpretation over `v` satisfying `f`, by exhaustive enumeration.
inline ModelSet models(const Formula& f, const Vocabulary& v, const Limits& limits = {}) {
    check_cap(v, limits);
    CompiledFormula eval(f, v);
    const Assignment count = Assignment{1} << v.size();
    std::vector<Assignment> out;
    for (Assignment a = 0; a < count; ++a)
        if (eval(a)) out.push_back(a);
    return {v, std::move(out)};
}

inline ModelSet models(const Formula& f, const Limits& limits = {}) {
    return models(f, variables(f), limits);
}

inline bool consistent(const Formula& f, const Limits& limits = {}) {
    return !models(f, limits).empty();
}

// =============================================================================
// Distances
// =============================================================================

inline std::size_t distance(Assignment w, const ModelSet& m) {
    if (m.empty()) throw InconsistentFormula("distance to an empty model set is undefined");
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (Assignment x : m.members()) best = std::min(best, dalal(w, x));
    return best;
}

/// Minimum Dalal distance from `w` to a model of `f` over `w`'s vocabulary.
inline std::size_t distance_to_formula(const Interpretation& w, const Formula& f,
                                       const Limits& limits = {}) {
    ModelSet m = models(f, w.vocabulary(), limits);
    if (m.empty()) throw InconsistentFormula("distance to an inconsistent formula");
    return distance(w.bits(), m);
}

/// Distance from every assignment over the set's vocabulary to the set,
/// indexed by assignment. Breadth-first search on the hypercube.
inline std::vector<std::uint8_t> distance_table(const ModelSet& m) {
    if (m.empty()) throw InconsistentFormula("distance to an empty model set is undefined");
    const std::size_t width = m.vocabulary().size();
    constexpr std::uint8_t unseen = std::numeric_limits<std::uint8_t>::max();
    std::vector<std::uint8_t> dist(std::size_t{1} << width, unseen);
    std::deque<Assignment> queue;
    for (Assignment a : m.members()) {
        dist[a] = 0;
        queue.push_back(a);
    }
    while (!queue.empty()) {
        Assignment a = queue.front();
        queue.pop_front();
        for (std::size_t b = 0; b < width; ++b) {
            Assignment n = a ^ (Assignment{1} << b);
            if (dist[n] == unseen) {
                dist[n] = static_cast<std::uint8_t>(dist[a] + 1);
                queue.push_back(n);
            }
        }
    }
    return dist;
}

/// Minimum pairwise model distance between two formulas over their joint vocabulary.
inline std::size_t formula_distance(const Formula& a, const Formula& b, const Limits& limits = {}) {
    Vocabulary v = unite(variables(a), variables(b));
    ModelSet ma = models(a, v, limits);
    ModelSet mb = models(b, v, limits);
    if (ma.empty() || mb.empty()) throw InconsistentFormula("distance involving an inconsistent formula");
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (Assignment x : ma.members()) best = std::min(best, distance(x, mb));
    return best;
}

// =============================================================================
// Entailment
// =============================================================================

inline bool entails(const Formula& a, const Formula& b, const Limits& limits = {}) {
    Vocabulary v = unite(variables(a), variables(b));
    return models(a, v, limits).subset_of(models(b, v, limits));
}

inline bool equivalent(const Formula& a, const Formula& b, const Limits& limits = {}) {
    Vocabulary v = unite(variables(a), variables(b));
    return models(a, v, limits) == models(b, v, limits);
}

/// Full-minterm disjunction, one minterm per member in increasing bit order.
inline Formula to_dnf(const ModelSet& m) {
    const Vocabulary& v = m.vocabulary();
    std::vector<Formula> atoms;
    atoms.reserve(v.size());
    for (const auto& name : v) atoms.push_back(Formula::atom(name));
    std::vector<Formula> terms;
    terms.reserve(m.size());
    for (Assignment a : m.members()) {
        std::vector<Formula> lits;
        lits.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            lits.push_back((a & bit_of(i, v.size())) ? atoms[i] : Formula::negation(atoms[i]));
        terms.push_back(Formula::conjunction(std::move(lits)));
    }
    return Formula::disjunction(std::move(terms));
}

}  // namespace fmerge
