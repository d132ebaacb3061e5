#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "forgetting.hpp"
#include "formula.hpp"
#include "semantics.hpp"

namespace fmerge {

class InconsistentKnowledgeBase : public std::invalid_argument {
public:
    explicit InconsistentKnowledgeBase(std::size_t index)
        : std::invalid_argument("knowledge base #" + std::to_string(index + 1) + " is inconsistent"),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// =============================================================================
// Profile
// =============================================================================

/// Multiset of consistent knowledge bases plus an integrity constraint.
/// The working vocabulary is every variable mentioned, plus `extra`.
class Profile {
public:
    Profile(std::vector<Formula> kbs, Formula constraint, const Vocabulary& extra = {},
            Limits limits = {})
        : kbs_(std::move(kbs)), constraint_(std::move(constraint)), limits_(limits) {
        if (kbs_.empty()) throw std::invalid_argument("a profile needs at least one knowledge base");
        vocabulary_ = unite(unite(variables(kbs_), variables(constraint_)), extra);
        check_cap(vocabulary_, limits_);
        kb_models_.reserve(kbs_.size());
        for (std::size_t i = 0; i < kbs_.size(); ++i) {
            kb_models_.push_back(models(kbs_[i], vocabulary_, limits_));
            if (kb_models_.back().empty()) throw InconsistentKnowledgeBase(i);
        }
        constraint_models_ = models(constraint_, vocabulary_, limits_);
    }

    std::span<const Formula> kbs() const noexcept { return kbs_; }
    const Formula& constraint() const noexcept { return constraint_; }
    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    const Limits& limits() const noexcept { return limits_; }
    std::size_t size() const noexcept { return kbs_.size(); }

    const ModelSet& kb_models(std::size_t i) const { return kb_models_.at(i); }
    const ModelSet& constraint_models() const noexcept { return constraint_models_; }

    /// Variables of the knowledge bases only.
    Vocabulary kb_variables() const { return variables(kbs_); }

private:
    std::vector<Formula> kbs_;
    Formula constraint_;
    Limits limits_;
    Vocabulary vocabulary_;
    std::vector<ModelSet> kb_models_;
    ModelSet constraint_models_;
};

/// `a ⊔ b^times`: concatenation keeping the multiset multiplicities.
inline std::vector<Formula> concat(std::span<const Formula> a, std::span<const Formula> b,
                                   std::size_t times = 1) {
    std::vector<Formula> out(a.begin(), a.end());
    for (std::size_t t = 0; t < times; ++t) out.insert(out.end(), b.begin(), b.end());
    return out;
}

// =============================================================================
// Results
// =============================================================================

enum class Operator {
    sigma,
    max,
    gmax,
    sigma_forget,
    max_forget,
    gmax_forget,
    f1,
    f2,
};

inline std::string_view to_string(Operator op) {
    switch (op) {
    case Operator::sigma: return "sigma";
    case Operator::max: return "max";
    case Operator::gmax: return "gmax";
    case Operator::sigma_forget: return "sigma_forget";
    case Operator::max_forget: return "max_forget";
    case Operator::gmax_forget: return "gmax_forget";
    case Operator::f1: return "f1";
    case Operator::f2: return "f2";
    }
    return "?";
}

inline std::optional<Operator> parse_operator(std::string_view s) {
    for (auto op : {Operator::sigma, Operator::max, Operator::gmax, Operator::sigma_forget,
                    Operator::max_forget, Operator::gmax_forget, Operator::f1, Operator::f2})
        if (to_string(op) == s) return op;
    return std::nullopt;
}

/// Variable sets selected for forgetting by the f1/f2 operators.
struct ForgettingFamily {
    std::vector<Vocabulary> sets;

    bool contains(const Vocabulary& v) const {
        return std::find(sets.begin(), sets.end(), v) != sets.end();
    }
    friend bool operator==(const ForgettingFamily&, const ForgettingFamily&) = default;
};

inline std::string to_string(const ForgettingFamily& fs) {
    std::string out = "{";
    for (std::size_t i = 0; i < fs.sets.size(); ++i) {
        if (i) out += ", ";
        out += '{';
        for (std::size_t j = 0; j < fs.sets[i].size(); ++j) {
            if (j) out += ',';
            out += fs.sets[i][j];
        }
        out += '}';
    }
    return out + "}";
}

struct MergeResult {
    Operator op;
    ModelSet model_set;
    Formula formula;  // full-minterm DNF of model_set
    /// The constraint was inconsistent; the result is `false`.
    bool degenerate = false;
    /// Least aggregate distance (Σ and Max forms).
    std::optional<std::size_t> k;
    /// Least descending distance tuple (GMax forms).
    std::optional<std::vector<std::size_t>> tuple;
    /// Chosen forgetting sets (f1, f2).
    std::optional<ForgettingFamily> family;
};

namespace detail {

inline MergeResult make_result(Operator op, ModelSet m) {
    MergeResult r{op, {}, to_dnf(m), false, std::nullopt, std::nullopt, std::nullopt};
    r.model_set = std::move(m);
    return r;
}

inline MergeResult degenerate_result(Operator op, const Profile& p) {
    MergeResult r = make_result(op, ModelSet(p.vocabulary(), {}));
    r.degenerate = true;
    return r;
}

inline std::vector<std::vector<std::uint8_t>> distance_tables(const Profile& p) {
    std::vector<std::vector<std::uint8_t>> out;
    out.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out.push_back(distance_table(p.kb_models(i)));
    return out;
}

// Keeps the constraint models with the least key.
template <typename Key, typename KeyOf>
std::pair<ModelSet, Key> minimal_models(const Profile& p, KeyOf&& key_of) {
    std::vector<Assignment> best;
    std::optional<Key> best_key;
    for (Assignment w : p.constraint_models().members()) {
        Key key = key_of(w);
        if (!best_key || key < *best_key) {
            best_key = key;
            best.clear();
        }
        if (key == *best_key) best.push_back(w);
    }
    return {ModelSet(p.vocabulary(), std::move(best)), std::move(*best_key)};
}

}  // namespace detail

// =============================================================================
// Model-based operators
// =============================================================================

/// Constraint models minimising the sum of distances to the knowledge bases.
inline MergeResult merge_sigma(const Profile& p) {
    if (p.constraint_models().empty()) return detail::degenerate_result(Operator::sigma, p);
    const auto tables = detail::distance_tables(p);
    auto [m, k] = detail::minimal_models<std::size_t>(p, [&](Assignment w) {
        std::size_t sum = 0;
        for (const auto& t : tables) sum += t[w];
        return sum;
    });
    MergeResult r = detail::make_result(Operator::sigma, std::move(m));
    r.k = k;
    return r;
}

/// Constraint models minimising the largest distance to a knowledge base.
inline MergeResult merge_max(const Profile& p) {
    if (p.constraint_models().empty()) return detail::degenerate_result(Operator::max, p);
    const auto tables = detail::distance_tables(p);
    auto [m, k] = detail::minimal_models<std::size_t>(p, [&](Assignment w) {
        std::size_t worst = 0;
        for (const auto& t : tables) worst = std::max<std::size_t>(worst, t[w]);
        return worst;
    });
    MergeResult r = detail::make_result(Operator::max, std::move(m));
    r.k = k;
    return r;
}

/// Constraint models whose distance vector, sorted descending, is
/// lexicographically least.
inline MergeResult merge_gmax(const Profile& p) {
    if (p.constraint_models().empty()) return detail::degenerate_result(Operator::gmax, p);
    const auto tables = detail::distance_tables(p);
    using Tuple = std::vector<std::size_t>;
    auto [m, t] = detail::minimal_models<Tuple>(p, [&](Assignment w) {
        Tuple d;
        d.reserve(tables.size());
        for (const auto& tab : tables) d.push_back(tab[w]);
        std::sort(d.begin(), d.end(), std::greater<>());
        return d;
    });
    MergeResult r = detail::make_result(Operator::gmax, std::move(m));
    r.tuple = std::move(t);
    return r;
}

// =============================================================================
// Forgetting-based forms of the distance operators
// =============================================================================

namespace detail {

// reach[i][c] = models of the disjunction of forget(kb_i, V) over all
// V ⊆ vocabulary with |V| = c, each forget computed syntactically.
class ForgetTable {
public:
    explicit ForgetTable(const Profile& p) : vocabulary_(p.vocabulary()) {
        const std::size_t width = vocabulary_.size();
        reach_.assign(p.size(), std::vector<ModelSet>(width + 1, ModelSet(vocabulary_, {})));
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (std::size_t c = 0; c <= width; ++c) {
                ModelSet acc(vocabulary_, {});
                for_each_combination(width, c, [&](std::span<const std::size_t> idx) {
                    std::vector<std::string> vars;
                    for (std::size_t j : idx) vars.push_back(vocabulary_[j]);
                    acc = acc | models(forget_in_order(p.kbs()[i], vars), vocabulary_, p.limits());
                });
                reach_[i][c] = std::move(acc);
            }
        }
    }

    const ModelSet& reach(std::size_t kb, std::size_t c) const { return reach_[kb][c]; }
    std::size_t width() const { return vocabulary_.size(); }

    // Models of ∧_i forget-reach(i, counts[i]) ∧ μ.
    ModelSet conjunction(std::span<const std::size_t> counts, const ModelSet& constraint) const {
        ModelSet acc = constraint;
        for (std::size_t i = 0; i < counts.size() && !acc.empty(); ++i)
            acc = acc & reach_[i][counts[i]];
        return acc;
    }

private:
    Vocabulary vocabulary_;
    std::vector<std::vector<ModelSet>> reach_;
};

// Calls visit for every vector of n counts in [0, width] summing to total.
template <typename Visit>
void for_each_composition(std::size_t n, std::size_t total, std::size_t width, Visit&& visit) {
    std::vector<std::size_t> counts(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
        if (i + 1 == n) {
            if (left <= width) {
                counts[i] = left;
                visit(std::span<const std::size_t>(counts));
            }
            return;
        }
        for (std::size_t c = 0; c <= std::min(left, width); ++c) {
            counts[i] = c;
            rec(i + 1, left - c);
        }
    };
    rec(0, total);
}

// Descending n-tuples over [0, width] in lexicographic order.
inline std::vector<std::vector<std::size_t>> descending_tuples(std::size_t n, std::size_t width) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> t(n);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t bound) {
        if (i == n) {
            out.push_back(t);
            return;
        }
        for (std::size_t c = 0; c <= bound; ++c) {
            t[i] = c;
            rec(i + 1, c);
        }
    };
    rec(0, width);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Σ via forgetting: least k such that the disjunction over
/// |V1|+…+|Vn| = k of ∃V1.φ1 ∧ … ∧ ∃Vn.φn ∧ μ is consistent.
inline MergeResult merge_sigma_forget(const Profile& p) {
    if (p.constraint_models().empty()) return detail::degenerate_result(Operator::sigma_forget, p);
    detail::ForgetTable table(p);
    const std::size_t bound = p.size() * table.width();
    for (std::size_t k = 0; k <= bound; ++k) {
        ModelSet acc(p.vocabulary(), {});
        detail::for_each_composition(p.size(), k, table.width(), [&](std::span<const std::size_t> c) {
            acc = acc | table.conjunction(c, p.constraint_models());
        });
        if (!acc.empty()) {
            MergeResult r = detail::make_result(Operator::sigma_forget, std::move(acc));
            r.k = k;
            return r;
        }
    }
    throw std::logic_error("sigma search exhausted its bound");
}

/// Max via forgetting: least k with every knowledge base forgetting k variables.
inline MergeResult merge_max_forget(const Profile& p) {
    if (p.constraint_models().empty()) return detail::degenerate_result(Operator::max_forget, p);
    detail::ForgetTable table(p);
    for (std::size_t k = 0; k <= table.width(); ++k) {
        std::vector<std::size_t> counts(p.size(), k);
        ModelSet acc = table.conjunction(counts, p.constraint_models());
        if (!acc.empty()) {
            MergeResult r = detail::make_result(Operator::max_forget, std::move(acc));
            r.k = k;
            return r;
        }
    }
    throw std::logic_error("max search exhausted its bound");
}

/// GMax via forgetting: lexicographically least descending tuple T whose
/// permutations, as forgetting cardinalities, give a consistent disjunction.
inline MergeResult merge_gmax_forget(const Profile& p) {
    if (p.constraint_models().empty()) return detail::degenerate_result(Operator::gmax_forget, p);
    detail::ForgetTable table(p);
    for (const auto& tuple : detail::descending_tuples(p.size(), table.width())) {
        std::vector<std::size_t> perm(tuple.rbegin(), tuple.rend());  // ascending start
        ModelSet acc(p.vocabulary(), {});
        do {
            acc = acc | table.conjunction(perm, p.constraint_models());
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!acc.empty()) {
            MergeResult r = detail::make_result(Operator::gmax_forget, std::move(acc));
            r.tuple = tuple;
            return r;
        }
    }
    throw std::logic_error("gmax search exhausted its bound");
}

// =============================================================================
// Shared-forgetting-set operators
// =============================================================================

namespace detail {

// Models of ∧_i forget(kb_i, vars) ∧ μ.
inline ModelSet shared_forget_models(const Profile& p, const std::vector<std::string>& vars) {
    ModelSet acc = p.constraint_models();
    for (std::size_t i = 0; i < p.size() && !acc.empty(); ++i)
        acc = acc & models(forget_in_order(p.kbs()[i], vars), p.vocabulary(), p.limits());
    return acc;
}

inline MergeResult merge_shared(const Profile& p, Operator op, bool inclusion_minimal) {
    MergeResult r = detail::make_result(op, ModelSet(p.vocabulary(), {}));
    r.family = ForgettingFamily{};
    if (p.constraint_models().empty()) {
        r.degenerate = true;
        return r;
    }
    const Vocabulary pool = p.kb_variables();
    std::vector<std::uint64_t> successes;  // as index masks over pool
    ModelSet acc(p.vocabulary(), {});
    for (std::size_t c = 0; c <= pool.size(); ++c) {
        if (!inclusion_minimal && !successes.empty()) break;
        for_each_combination(pool.size(), c, [&](std::span<const std::size_t> idx) {
            std::uint64_t mask = 0;
            for (std::size_t i : idx) mask |= std::uint64_t{1} << i;
            // Supersets of a success succeed too but are not minimal.
            for (auto s : successes)
                if ((s & mask) == s) return;
            std::vector<std::string> vars;
            for (std::size_t i : idx) vars.push_back(pool[i]);
            ModelSet m = shared_forget_models(p, vars);
            if (m.empty()) return;
            successes.push_back(mask);
            r.family->sets.emplace_back(vars);
            acc = acc | m;
        });
    }
    r.formula = to_dnf(acc);
    r.model_set = std::move(acc);
    return r;
}

}  // namespace detail

/// Disjunction over the minimum-cardinality variable sets V whose shared
/// forgetting makes the knowledge bases jointly consistent with μ.
inline MergeResult merge_f1(const Profile& p) {
    return detail::merge_shared(p, Operator::f1, false);
}

/// As merge_f1 with inclusion-minimal instead of cardinality-minimal sets.
inline MergeResult merge_f2(const Profile& p) {
    return detail::merge_shared(p, Operator::f2, true);
}

inline MergeResult merge(Operator op, const Profile& p) {
    switch (op) {
    case Operator::sigma: return merge_sigma(p);
    case Operator::max: return merge_max(p);
    case Operator::gmax: return merge_gmax(p);
    case Operator::sigma_forget: return merge_sigma_forget(p);
    case Operator::max_forget: return merge_max_forget(p);
    case Operator::gmax_forget: return merge_gmax_forget(p);
    case Operator::f1: return merge_f1(p);
    case Operator::f2: return merge_f2(p);
    }
    throw std::invalid_argument("unknown operator");
}

}  // namespace fmerge
