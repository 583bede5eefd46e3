#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "agentctl/control/linear_system.hpp"
#include "agentctl/control/polynomial.hpp"

namespace agentctl::agents {

struct ReActStep {
    std::string thought;
    std::string action;
    std::string action_input;
    std::string observation;

    bool operator==(const ReActStep&) const = default;
};

struct FinalAnswer {
    std::string thought;
    std::string text;

    bool operator==(const FinalAnswer&) const = default;
};

using ParsedCompletion = std::variant<ReActStep, FinalAnswer>;

// First Thought/Action/Action Input triple, or the Final Answer if it comes
// before any Action. Labels are case-sensitive and must start a line; prose
// before the first label becomes the thought. ParseFailure when neither
// pattern is present.
ParsedCompletion parse_react(std::string_view completion);

// Inverse of parse_react for well-formed steps (observation not included).
std::string serialize(const ReActStep& step);
std::string serialize(const FinalAnswer& answer);

// One parsed Action Input value.
struct ArgValue {
    enum class Kind { Number, List, Matrix, String };

    Kind kind = Kind::String;
    double number = 0.0;
    std::vector<control::Complex> list;
    control::Matrix matrix;
    std::string text;

    bool is_real_list() const;
    // A number, a real list or a matrix as a matrix; a list becomes a row.
    control::Matrix as_matrix() const;
};

using ArgMap = std::map<std::string, ArgValue>;

// Grammar: name = value (, name = value)*, whitespace-insensitive. A value is
// a number, a [list] (real or complex such as -1+2j), a [[matrix]], a LaTeX
// bmatrix, a quoted string or a bare string. "$" delimiters are ignored.
// ArgParseError names the offending span as "at <begin>..<end>".
ArgMap parse_action_input(std::string_view raw);

}  // namespace agentctl::agents
