#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formula.hpp"
#include "merging.hpp"
#include "syntax.hpp"

namespace fmerge {

/// Line-oriented profile description:
///
///     # comment
///     vars: a, b, c          (optional, widens the vocabulary)
///     constraint: <formula>  (optional, at most once; default true)
///     kb: <formula>          (one per knowledge base, repeat for multiplicity)
struct ProfileFile {
    std::vector<Formula> kbs;
    std::optional<Formula> constraint;
    Vocabulary declared;

    Formula constraint_or_true() const { return constraint.value_or(Formula::constant(true)); }

    Profile to_profile(const Limits& limits = {}) const {
        return Profile(kbs, constraint_or_true(), declared, limits);
    }
};

namespace detail {
inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}
}  // namespace detail

/// `require_kb` = false accepts a file holding only a constraint.
inline ProfileFile parse_profile_file(std::string_view text, bool require_kb = true) {
    ProfileFile out;
    std::vector<std::string> declared;
    std::size_t line_no = 0;
    std::size_t constraint_line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;

        const std::string_view body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto colon = body.find(':');
        const std::size_t indent = static_cast<std::size_t>(body.data() - line.data());
        if (colon == std::string_view::npos)
            throw ParseError(line_no, indent + 1, std::string(body.substr(0, body.find(' '))),
                             "expected 'kb:', 'constraint:' or 'vars:'");
        const std::string_view key = detail::trim(body.substr(0, colon));
        const std::string_view rest = body.substr(colon + 1);
        const std::size_t rest_column = indent + colon + 2;

        if (key == "vars") {
            std::string_view list = rest.substr(0, rest.find('#'));
            std::size_t pos = 0;
            while (pos <= list.size()) {
                std::size_t comma = list.find(',', pos);
                if (comma == std::string_view::npos) comma = list.size();
                std::string_view name = detail::trim(list.substr(pos, comma - pos));
                if (!name.empty()) {
                    if (!is_identifier(name))
                        throw ParseError(line_no, rest_column + pos, std::string(name),
                                         "invalid variable name");
                    declared.emplace_back(name);
                }
                pos = comma + 1;
            }
            continue;
        }
        if (key != "kb" && key != "constraint")
            throw ParseError(line_no, indent + 1, std::string(key), "unknown directive");

        Formula f;
        try {
            f = parse(rest, line_no);
        } catch (const ParseError& e) {
            // Columns from the embedded parse are relative to `rest`.
            const std::size_t col = e.line() == line_no ? e.column() + rest_column - 1 : e.column();
            throw ParseError(e.line(), col, e.token(), e.message());
        }
        if (key == "kb") {
            out.kbs.push_back(std::move(f));
        } else {
            if (out.constraint)
                throw ParseError(line_no, indent + 1, "constraint",
                                 "duplicate constraint (first on line " +
                                     std::to_string(constraint_line) + ")");
            out.constraint = std::move(f);
            constraint_line = line_no;
        }
    }
    if (require_kb && out.kbs.empty()) throw ParseError(line_no, 1, "", "no 'kb:' line");
    out.declared = Vocabulary(std::move(declared));
    return out;
}

inline ProfileFile read_profile_file(const std::filesystem::path& path, bool require_kb = true) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profile_file(buf.str(), require_kb);
}

inline std::string write_profile_file(const ProfileFile& pf) {
    std::string out;
    if (!pf.declared.empty()) {
        out += "vars:";
        for (std::size_t i = 0; i < pf.declared.size(); ++i) {
            out += i ? ", " : " ";
            out += pf.declared[i];
        }
        out += '\n';
    }
    if (pf.constraint) out += "constraint: " + print(*pf.constraint) + '\n';
    for (const auto& kb : pf.kbs) out += "kb: " + print(kb) + '\n';
    return out;
}

}  // namespace fmerge
