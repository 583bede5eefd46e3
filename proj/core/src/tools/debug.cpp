#include "agentctl/tools/debug.hpp"

#include <map>

#include "agentctl/error.hpp"

namespace agentctl::tools {

namespace {

const std::map<std::string, std::string, std::less<>>& shape_table() {
    static const std::map<std::string, std::string, std::less<>> t{
        {"lqr", "lqr expects A n×n, B n×m, Q n×n symmetric and R m×m symmetric."},
        {"acker", "acker expects A n×n, B n×1 and exactly n desired poles."},
        {"place", "place expects A n×n, B n×1 and exactly n desired poles."},
        {"ss", "ss expects A n×n, B n×m, C p×n and D p×m."},
        {"ss2tf", "ss2tf expects A n×n, B n×1, C 1×n and D 1×1."},
        {"ctrb", "ctrb expects A n×n and B n×m."},
        {"closed_loop", "closed_loop expects a state-space system and K m×n."},
    };
    return t;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
    return out;
}

}  // namespace

DebugAdvice debug_advise(std::string_view error_text, const DebugContext& context) {
    DebugAdvice a;
    const auto colon = error_text.find(':');
    a.error_class = std::string(error_text.substr(0, colon == std::string_view::npos ? error_text.size() : colon));
    const auto code = error_code_from_string(a.error_class);
    if (!code) {
        a.error_class = "Unknown";
        a.text = "Unrecognized failure. Re-read the tool description, check every argument against it and retry once.";
        return a;
    }
    a.known = true;
    switch (*code) {
        case ErrorCode::ArgParseError:
            a.text = "Restate the Action Input as `name = value, name = value`. Values are numbers, [lists], "
                     "[[matrix rows]], quoted strings or a system handle such as sys [0]; supply every required argument.";
            break;
        case ErrorCode::ShapeError:
        case ErrorCode::UnsupportedShape: {
            auto it = shape_table().find(context.tool);
            a.text = it != shape_table().end() ? it->second
                                                : "Check the matrix dimensions: A n×n, B n×m, C p×n, D p×m.";
            if (*code == ErrorCode::UnsupportedShape) a.text += " Only single-input single-output problems up to 8 states are supported.";
            break;
        }
        case ErrorCode::UnknownTool:
            a.text = "Use one of the available tools: " + join(context.registry) + ".";
            break;
        case ErrorCode::ParseFailure:
            a.text = "Answer in the required format:\nThought: you should always think about what to do.\n"
                     "Action: the action to take.\nAction Input: the input to the action.\n"
                     "or, when done:\nFinal Answer: the final answer to the original input question.";
            break;
        case ErrorCode::UnknownHandle:
            a.text = "Refer to a system created earlier in this session (for example sys [0]) or pass num/den or A, B, C, D directly.";
            break;
        case ErrorCode::Uncontrollable:
            a.text = "The pair (A, B) is not controllable; pole placement cannot succeed. Check A and B or choose a different design.";
            break;
        case ErrorCode::Unstabilizable:
            a.text = "An uncontrollable mode is unstable; no state feedback stabilizes the plant. Check A and B.";
            break;
        case ErrorCode::BadPoleSet:
            a.text = "Give exactly n desired poles with complex poles in conjugate pairs, for example [-1+2j, -1-2j].";
            break;
        case ErrorCode::SingularWeight:
        case ErrorCode::InvalidWeight:
            a.text = "R must be symmetric positive definite and Q symmetric positive semidefinite.";
            break;
        case ErrorCode::DegenerateSystem:
        case ErrorCode::ImproperSystem:
            a.text = "Give num and den in descending powers of s with a nonzero denominator of at least the numerator's degree.";
            break;
        case ErrorCode::BadGrid:
            a.text = "Use a positive time horizon with at least two points, or nonnegative gains.";
            break;
        default:
            a.known = false;
            a.text = "No specific rule for " + a.error_class + ". Check the inputs against the tool description and retry once.";
            break;
    }
    return a;
}

}  // namespace agentctl::tools
