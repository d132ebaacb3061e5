#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fmerge {

// =============================================================================
// Vocabulary
// =============================================================================

/// Sorted, duplicate-free list of variable names. Copies share storage.
class Vocabulary {
public:
    Vocabulary() : names_(empty_storage()) {}

    explicit Vocabulary(std::vector<std::string> names) {
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
    }

    Vocabulary(std::initializer_list<std::string> names)
        : Vocabulary(std::vector<std::string>(names)) {}

    std::size_t size() const noexcept { return names_->size(); }
    bool empty() const noexcept { return names_->empty(); }
    const std::string& operator[](std::size_t i) const { return (*names_)[i]; }
    auto begin() const noexcept { return names_->begin(); }
    auto end() const noexcept { return names_->end(); }
    const std::vector<std::string>& names() const noexcept { return *names_; }

    std::optional<std::size_t> index_of(std::string_view name) const {
        auto it = std::lower_bound(names_->begin(), names_->end(), name);
        if (it == names_->end() || *it != name) return std::nullopt;
        return static_cast<std::size_t>(it - names_->begin());
    }

    bool contains(std::string_view name) const { return index_of(name).has_value(); }

    bool includes(const Vocabulary& other) const {
        return std::includes(begin(), end(), other.begin(), other.end());
    }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.names_ == b.names_ || *a.names_ == *b.names_;
    }

    friend Vocabulary unite(const Vocabulary& a, const Vocabulary& b) {
        if (a.includes(b)) return a;
        if (b.includes(a)) return b;
        std::vector<std::string> out;
        out.reserve(a.size() + b.size());
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return Vocabulary(std::move(out));
    }

    friend Vocabulary subtract(const Vocabulary& a, const Vocabulary& b) {
        std::vector<std::string> out;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return Vocabulary(std::move(out));
    }

    friend Vocabulary intersect(const Vocabulary& a, const Vocabulary& b) {
        std::vector<std::string> out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return Vocabulary(std::move(out));
    }

private:
    static const std::shared_ptr<const std::vector<std::string>>& empty_storage() {
        static const auto empty = std::make_shared<const std::vector<std::string>>();
        return empty;
    }

    std::shared_ptr<const std::vector<std::string>> names_;
};

inline bool is_identifier(std::string_view s) {
    if (s.empty() || s == "true" || s == "false") return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(s.front())) return false;
    return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
}

// =============================================================================
// Formula
// =============================================================================

enum class Kind : std::uint8_t {
    constant,
    atom,
    negation,
    conjunction,
    disjunction,
    implication,
    equivalence,
};

/// Immutable propositional formula. Nodes are shared between copies.
///
/// Conjunctions and disjunctions are n-ary: nested nodes of the same kind are
/// flattened when constructed, so `(a & b) & c` and `a & (b & c)` both build
/// the three-child conjunction. No other rewriting happens on construction.
class Formula {
public:
    /// The constant `true`.
    Formula();

    static Formula constant(bool value);
    static Formula atom(std::string name);
    static Formula negation(Formula child);
    /// Zero operands give `true`, one operand is returned unchanged.
    static Formula conjunction(std::vector<Formula> operands);
    /// Zero operands give `false`, one operand is returned unchanged.
    static Formula disjunction(std::vector<Formula> operands);
    static Formula implication(Formula lhs, Formula rhs);
    static Formula equivalence(Formula lhs, Formula rhs);

    Kind kind() const noexcept;
    bool value() const;               // constant only
    const std::string& name() const;  // atom only
    std::span<const Formula> children() const noexcept;

    bool is_constant(bool v) const noexcept { return kind() == Kind::constant && value() == v; }

    std::size_t node_count() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula nary(Kind kind, std::vector<Formula> operands);

    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    Kind kind = Kind::constant;
    bool value = true;
    std::string name;
    std::vector<Formula> children;
};

inline Formula::Formula() {
    static const auto top = std::make_shared<const Node>(Node{Kind::constant, true, {}, {}});
    node_ = top;
}

inline Formula Formula::constant(bool value) {
    static const auto top = std::make_shared<const Node>(Node{Kind::constant, true, {}, {}});
    static const auto bottom = std::make_shared<const Node>(Node{Kind::constant, false, {}, {}});
    return Formula(value ? top : bottom);
}

inline Formula Formula::atom(std::string name) {
    if (!is_identifier(name)) throw std::invalid_argument("invalid variable name '" + name + "'");
    return Formula(std::make_shared<const Node>(Node{Kind::atom, false, std::move(name), {}}));
}

inline Formula Formula::negation(Formula child) {
    return Formula(std::make_shared<const Node>(Node{Kind::negation, false, {}, {std::move(child)}}));
}

inline Formula Formula::nary(Kind kind, std::vector<Formula> operands) {
    if (operands.empty()) return constant(kind == Kind::conjunction);
    if (operands.size() == 1) return std::move(operands.front());
    std::vector<Formula> flat;
    flat.reserve(operands.size());
    for (auto& op : operands) {
        if (op.kind() == kind) {
            auto kids = op.children();
            flat.insert(flat.end(), kids.begin(), kids.end());
        } else {
            flat.push_back(std::move(op));
        }
    }
    return Formula(std::make_shared<const Node>(Node{kind, false, {}, std::move(flat)}));
}

inline Formula Formula::conjunction(std::vector<Formula> operands) {
    return nary(Kind::conjunction, std::move(operands));
}

inline Formula Formula::disjunction(std::vector<Formula> operands) {
    return nary(Kind::disjunction, std::move(operands));
}

inline Formula Formula::implication(Formula lhs, Formula rhs) {
    return Formula(std::make_shared<const Node>(
        Node{Kind::implication, false, {}, {std::move(lhs), std::move(rhs)}}));
}

inline Formula Formula::equivalence(Formula lhs, Formula rhs) {
    return Formula(std::make_shared<const Node>(
        Node{Kind::equivalence, false, {}, {std::move(lhs), std::move(rhs)}}));
}

inline Kind Formula::kind() const noexcept { return node_->kind; }

inline bool Formula::value() const {
    if (kind() != Kind::constant) throw std::logic_error("Formula::value on a non-constant");
    return node_->value;
}

inline const std::string& Formula::name() const {
    if (kind() != Kind::atom) throw std::logic_error("Formula::name on a non-atom");
    return node_->name;
}

inline std::span<const Formula> Formula::children() const noexcept { return node_->children; }

inline std::size_t Formula::node_count() const {
    std::size_t n = 1;
    for (const auto& c : children()) n += c.node_count();
    return n;
}

inline bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Kind::constant: return a.value() == b.value();
    case Kind::atom: return a.name() == b.name();
    default: break;
    }
    auto ca = a.children();
    auto cb = b.children();
    return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

// Construction shorthands.
inline Formula operator!(Formula f) { return Formula::negation(std::move(f)); }
inline Formula operator&(Formula a, Formula b) { return Formula::conjunction({std::move(a), std::move(b)}); }
inline Formula operator|(Formula a, Formula b) { return Formula::disjunction({std::move(a), std::move(b)}); }

// =============================================================================
// Syntactic operations
// =============================================================================

namespace detail {
inline void collect_atoms(const Formula& f, std::vector<std::string>& out) {
    if (f.kind() == Kind::atom) {
        out.push_back(f.name());
        return;
    }
    for (const auto& c : f.children()) collect_atoms(c, out);
}

inline Formula rebuild(const Formula& f, std::vector<Formula> kids) {
    switch (f.kind()) {
    case Kind::negation: return Formula::negation(std::move(kids[0]));
    case Kind::conjunction: return Formula::conjunction(std::move(kids));
    case Kind::disjunction: return Formula::disjunction(std::move(kids));
    case Kind::implication: return Formula::implication(std::move(kids[0]), std::move(kids[1]));
    case Kind::equivalence: return Formula::equivalence(std::move(kids[0]), std::move(kids[1]));
    default: return f;
    }
}
}  // namespace detail

/// The atoms occurring in `f`, whether or not `f` semantically depends on them.
inline Vocabulary variables(const Formula& f) {
    std::vector<std::string> names;
    detail::collect_atoms(f, names);
    return Vocabulary(std::move(names));
}

inline Vocabulary variables(std::span<const Formula> fs) {
    std::vector<std::string> names;
    for (const auto& f : fs) detail::collect_atoms(f, names);
    return Vocabulary(std::move(names));
}

/// Replaces every occurrence of atom `var` by the constant `value`.
inline Formula substitute(const Formula& f, std::string_view var, bool value) {
    switch (f.kind()) {
    case Kind::constant: return f;
    case Kind::atom: return f.name() == var ? Formula::constant(value) : f;
    default: break;
    }
    std::vector<Formula> kids;
    kids.reserve(f.children().size());
    bool changed = false;
    for (const auto& c : f.children()) {
        kids.push_back(substitute(c, var, value));
        changed = changed || !(kids.back() == c);
    }
    return changed ? detail::rebuild(f, std::move(kids)) : f;
}

/// Equivalence-preserving constant propagation. Also drops structurally
/// duplicated operands of conjunctions and disjunctions.
inline Formula fold_constants(const Formula& f) {
    switch (f.kind()) {
    case Kind::constant:
    case Kind::atom: return f;
    case Kind::negation: {
        Formula c = fold_constants(f.children()[0]);
        if (c.kind() == Kind::constant) return Formula::constant(!c.value());
        return Formula::negation(std::move(c));
    }
    case Kind::conjunction:
    case Kind::disjunction: {
        const bool absorbing = f.kind() == Kind::disjunction;  // true absorbs |, false absorbs &
        std::vector<Formula> kept;
        for (const auto& c : f.children()) {
            Formula g = fold_constants(c);
            if (g.kind() == Kind::constant) {
                if (g.value() == absorbing) return g;
                continue;
            }
            if (std::find(kept.begin(), kept.end(), g) == kept.end()) kept.push_back(std::move(g));
        }
        return f.kind() == Kind::conjunction ? Formula::conjunction(std::move(kept))
                                             : Formula::disjunction(std::move(kept));
    }
    case Kind::implication: {
        Formula l = fold_constants(f.children()[0]);
        Formula r = fold_constants(f.children()[1]);
        if (l.kind() == Kind::constant) return l.value() ? r : Formula::constant(true);
        if (r.kind() == Kind::constant) return r.value() ? r : fold_constants(Formula::negation(l));
        return Formula::implication(std::move(l), std::move(r));
    }
    case Kind::equivalence: {
        Formula l = fold_constants(f.children()[0]);
        Formula r = fold_constants(f.children()[1]);
        if (l.kind() == Kind::constant) std::swap(l, r);
        if (r.kind() == Kind::constant) {
            if (l.kind() == Kind::constant) return Formula::constant(l.value() == r.value());
            return r.value() ? l : fold_constants(Formula::negation(l));
        }
        return Formula::equivalence(std::move(l), std::move(r));
    }
    }
    return f;
}

}  // namespace fmerge
