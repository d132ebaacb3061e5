#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "formula.hpp"
#include "semantics.hpp"

namespace fmerge {

/// Forgets a single variable: `f[p:=false] | f[p:=true]`, constant-folded.
/// Absent variables leave `f` untouched.
inline Formula forget(const Formula& f, std::string_view var) {
    if (!variables(f).contains(var)) return f;
    return fold_constants(
        Formula::disjunction({substitute(f, var, false), substitute(f, var, true)}));
}

/// Forgets the variables one at a time in the given order.
inline Formula forget_in_order(const Formula& f, std::span<const std::string> order) {
    Formula out = f;
    for (const auto& var : order) out = forget(out, var);
    return out;
}

/// Existential quantification of `vars` out of `f`, in vocabulary order.
inline Formula forget(const Formula& f, const Vocabulary& vars) {
    return forget_in_order(f, vars.names());
}

/// `m` together with each member's copy with `var` flipped.
inline ModelSet switch_models(const ModelSet& m, std::string_view var) {
    const auto index = m.vocabulary().index_of(var);
    if (!index) throw UnknownVariable(std::string(var));
    const Assignment flip = bit_of(*index, m.vocabulary().size());
    std::vector<Assignment> out(m.members().begin(), m.members().end());
    for (Assignment a : m.members()) out.push_back(a ^ flip);
    return {m.vocabulary(), std::move(out)};
}

/// Interpretations over `v` within Dalal distance `n` of a model of `f`.
inline ModelSet dilation_models(const Formula& f, std::size_t n, const Vocabulary& v,
                                const Limits& limits = {}) {
    ModelSet base = models(f, v, limits);
    if (base.empty()) throw InconsistentFormula("cannot dilate an inconsistent formula");
    if (n == 0) return base;
    auto dist = distance_table(base);
    std::vector<Assignment> out;
    for (Assignment a = 0; a < dist.size(); ++a)
        if (dist[a] <= n) out.push_back(a);
    return {v, std::move(out)};
}

/// Distance-n ball around `f`, as a full-minterm DNF over `v`.
inline Formula dilate(const Formula& f, std::size_t n, const Vocabulary& v,
                      const Limits& limits = {}) {
    return to_dnf(dilation_models(f, n, v, limits));
}

inline Formula dilate(const Formula& f, std::size_t n, const Limits& limits = {}) {
    return dilate(f, n, variables(f), limits);
}

namespace detail {
// Visits every size-k index combination of [0, n) in lexicographic order.
template <typename Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit&& visit) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        visit(std::span<const std::size_t>(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}
}  // namespace detail

/// Dilation by forgetting: the disjunction of `forget(f, V)` over all
/// `V ⊆ Var(f)` with `|V| = min(n, |Var(f)|)`.
inline Formula dilate_via_forgetting(const Formula& f, std::size_t n, const Limits& limits = {}) {
    if (n == 0) throw std::invalid_argument("dilate_via_forgetting needs n >= 1");
    const Vocabulary vars = variables(f);
    if (!consistent(f, limits)) throw InconsistentFormula("cannot dilate an inconsistent formula");
    const std::size_t k = std::min(n, vars.size());
    std::vector<Formula> parts;
    detail::for_each_combination(vars.size(), k, [&](std::span<const std::size_t> idx) {
        std::vector<std::string> chosen;
        for (std::size_t i : idx) chosen.push_back(vars[i]);
        parts.push_back(forget_in_order(f, chosen));
    });
    return fold_constants(Formula::disjunction(std::move(parts)));
}

}  // namespace fmerge
