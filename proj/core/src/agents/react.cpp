#include "agentctl/agents/react.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

#include "agentctl/error.hpp"

namespace agentctl::agents {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

// Returns the text after `label` when the line (ignoring indentation)
// starts with it.
std::optional<std::string> labelled(const std::string& line, std::string_view label) {
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) return std::nullopt;
    std::string_view rest = std::string_view(line).substr(b);
    if (!rest.starts_with(label)) return std::nullopt;
    return std::string(rest.substr(label.size()));
}

std::string join(const std::vector<std::string>& lines, std::size_t from, std::size_t to) {
    std::string out;
    for (std::size_t i = from; i < to; ++i) {
        if (i > from) out += '\n';
        out += lines[i];
    }
    return out;
}

[[noreturn]] void arg_error(std::size_t b, std::size_t e, std::string_view raw, const std::string& what) {
    throw Error(ErrorCode::ArgParseError, what + " at " + std::to_string(b) + ".." + std::to_string(e) + ": '" +
                                              std::string(raw.substr(b, e - b)) + "'");
}

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Top-level segments "name = value", split at commas that precede another
// "ident =". Brackets, braces, parentheses and quotes nest.
struct Segment {
    std::size_t begin, end;
};

std::vector<Segment> split_segments(std::string_view s) {
    std::vector<Segment> out;
    int depth = 0;
    char quote = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (quote) {
            if (c == quote) quote = 0;
            continue;
        }
        if (c == '\'' || c == '"') {
            // apostrophes inside words (Ackermann's) are not quotes
            if (c == '\'' && i > 0 && std::isalpha(static_cast<unsigned char>(s[i - 1]))) continue;
            quote = c;
        } else if (c == '[' || c == '(' || c == '{') {
            ++depth;
        } else if (c == ']' || c == ')' || c == '}') {
            if (--depth < 0) arg_error(i, i + 1, s, "unbalanced '" + std::string(1, c) + "'");
        } else if (c == ',' && depth == 0) {
            std::size_t j = i + 1;
            while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
            std::size_t k = j;
            while (k < s.size() && is_ident_char(s[k])) ++k;
            std::size_t m = k;
            while (m < s.size() && std::isspace(static_cast<unsigned char>(s[m]))) ++m;
            if (k > j && m < s.size() && s[m] == '=') {
                out.push_back({start, i});
                start = i + 1;
            }
        }
    }
    if (quote) arg_error(start, s.size(), s, "unterminated quote");
    if (depth != 0) arg_error(start, s.size(), s, "unbalanced brackets");
    out.push_back({start, s.size()});
    return out;
}

std::optional<double> parse_real(std::string_view t) {
    t = std::string_view(t).substr(0);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    if (t.empty()) return std::nullopt;
    double v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size()) return std::nullopt;
    return v;
}

// "-1+2j", "2j", "-0.5-1.5i", "(1+2j)", "3"
std::optional<control::Complex> parse_complex(std::string t) {
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
    if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
    if (t.empty()) return std::nullopt;
    if (auto r = parse_real(t)) return control::Complex(*r, 0.0);
    const char last = t.back();
    if (last != 'j' && last != 'i' && last != 'J') return std::nullopt;
    t.pop_back();
    // split at the last sign that is not an exponent sign and not leading
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    std::string re = split == std::string::npos ? "0" : t.substr(0, split);
    std::string im = split == std::string::npos ? t : t.substr(split);
    if (im == "+" || im == "-" || im.empty()) im += "1";
    auto r = parse_real(re);
    auto i = parse_real(im);
    if (!r || !i) return std::nullopt;
    return control::Complex(*r, *i);
}

// Splits "a, b, c" at top-level commas.
std::vector<std::pair<std::size_t, std::size_t>> top_level_items(std::string_view s, std::size_t b, std::size_t e) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    int depth = 0;
    std::size_t start = b;
    for (std::size_t i = b; i < e; ++i) {
        if (s[i] == '[' || s[i] == '(') ++depth;
        if (s[i] == ']' || s[i] == ')') --depth;
        if (s[i] == ',' && depth == 0) {
            out.emplace_back(start, i);
            start = i + 1;
        }
    }
    if (trim(s.substr(start, e - start)).size() || !out.empty()) out.emplace_back(start, e);
    return out;
}

ArgValue parse_bmatrix(std::string_view raw, std::size_t b, std::size_t e) {
    const std::string_view v = raw.substr(b, e - b);
    const auto open = v.find("\\begin{bmatrix}");
    const auto close = v.find("\\end{bmatrix}");
    if (close == std::string_view::npos) arg_error(b, e, raw, "bmatrix without \\end{bmatrix}");
    const std::string_view body = v.substr(open + 15, close - open - 15);
    std::vector<std::vector<double>> rows;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        auto next = body.find("\\\\", pos);
        std::string_view row = body.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        std::vector<double> cells;
        std::size_t cpos = 0;
        while (cpos <= row.size()) {
            auto amp = row.find('&', cpos);
            auto cell = row.substr(cpos, amp == std::string_view::npos ? std::string_view::npos : amp - cpos);
            auto value = parse_real(cell);
            if (!value) arg_error(b, e, raw, "bmatrix cell '" + trim(cell) + "' is not a number");
            cells.push_back(*value);
            if (amp == std::string_view::npos) break;
            cpos = amp + 1;
        }
        if (!(cells.empty() && trim(row).empty())) rows.push_back(cells);
        if (next == std::string_view::npos) break;
        pos = next + 2;
    }
    if (rows.empty()) arg_error(b, e, raw, "empty bmatrix");
    ArgValue out;
    out.kind = ArgValue::Kind::Matrix;
    out.matrix.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) arg_error(b, e, raw, "ragged bmatrix rows");
        for (std::size_t c = 0; c < rows[r].size(); ++c) out.matrix(r, c) = rows[r][c];
    }
    return out;
}

ArgValue parse_list(std::string_view raw, std::size_t b, std::size_t e) {
    // raw[b] == '[' and raw[e-1] == ']'
    const auto items = top_level_items(raw, b + 1, e - 1);
    ArgValue out;
    const bool nested = std::any_of(items.begin(), items.end(), [&](auto it) {
        const auto t = trim(raw.substr(it.first, it.second - it.first));
        return !t.empty() && t.front() == '[';
    });
    if (!nested) {
        out.kind = ArgValue::Kind::List;
        for (auto [ib, ie] : items) {
            auto z = parse_complex(std::string(raw.substr(ib, ie - ib)));
            if (!z) arg_error(ib, ie, raw, "list element is not a number");
            out.list.push_back(*z);
        }
        return out;
    }
    std::vector<std::vector<double>> rows;
    for (auto [ib, ie] : items) {
        std::size_t rb = ib, re = ie;
        while (rb < re && std::isspace(static_cast<unsigned char>(raw[rb]))) ++rb;
        while (re > rb && std::isspace(static_cast<unsigned char>(raw[re - 1]))) --re;
        if (rb == re || raw[rb] != '[' || raw[re - 1] != ']') arg_error(ib, ie, raw, "matrix row must be a [list]");
        std::vector<double> row;
        for (auto [cb, ce] : top_level_items(raw, rb + 1, re - 1)) {
            auto v = parse_real(raw.substr(cb, ce - cb));
            if (!v) arg_error(cb, ce, raw, "matrix entry is not a real number");
            row.push_back(*v);
        }
        if (!rows.empty() && row.size() != rows[0].size()) arg_error(ib, ie, raw, "ragged matrix rows");
        rows.push_back(std::move(row));
    }
    out.kind = ArgValue::Kind::Matrix;
    out.matrix.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.empty() ? 0 : rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) out.matrix(r, c) = rows[r][c];
    }
    return out;
}

ArgValue parse_value(std::string_view raw, std::size_t b, std::size_t e) {
    while (b < e && (std::isspace(static_cast<unsigned char>(raw[b])) || raw[b] == '$')) ++b;
    while (e > b && (std::isspace(static_cast<unsigned char>(raw[e - 1])) || raw[e - 1] == '$')) --e;
    if (b == e) arg_error(b, e, raw, "missing value");
    const std::string_view v = raw.substr(b, e - b);
    if (v.find("\\begin{bmatrix}") != std::string_view::npos) return parse_bmatrix(raw, b, e);
    if (v.front() == '[') {
        if (v.back() != ']') arg_error(b, e, raw, "list is not closed");
        return parse_list(raw, b, e);
    }
    if ((v.front() == '\'' || v.front() == '"') && v.size() >= 2 && v.back() == v.front()) {
        ArgValue out;
        out.text = std::string(v.substr(1, v.size() - 2));
        return out;
    }
    if (auto r = parse_real(v)) {
        ArgValue out;
        out.kind = ArgValue::Kind::Number;
        out.number = *r;
        return out;
    }
    ArgValue out;
    out.text = std::string(v);
    return out;
}

}  // namespace

ParsedCompletion parse_react(std::string_view completion) {
    const auto lines = split_lines(completion);
    std::optional<std::size_t> action_line, final_line;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!action_line && labelled(lines[i], "Action:")) action_line = i;
        if (!final_line && labelled(lines[i], "Final Answer:")) final_line = i;
    }
    auto thought_before = [&](std::size_t upto) {
        std::size_t from = 0;
        for (std::size_t i = 0; i < upto; ++i) {
            if (labelled(lines[i], "Thought:")) from = i;
        }
        std::string text = join(lines, from, upto);
        if (auto t = labelled(text, "Thought:")) text = *t;
        return trim(text);
    };

    if (final_line && (!action_line || *final_line < *action_line)) {
        FinalAnswer fa;
        fa.thought = thought_before(*final_line);
        std::string text = *labelled(lines[*final_line], "Final Answer:");
        for (std::size_t i = *final_line + 1; i < lines.size(); ++i) text += "\n" + lines[i];
        fa.text = trim(text);
        return fa;
    }
    if (!action_line) throw Error(ErrorCode::ParseFailure, "no 'Action:' or 'Final Answer:' line in completion");

    ReActStep step;
    step.thought = thought_before(*action_line);
    step.action = trim(*labelled(lines[*action_line], "Action:"));
    if (step.action.empty()) throw Error(ErrorCode::ParseFailure, "empty 'Action:' line");
    std::size_t i = *action_line + 1;
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
    if (i == lines.size() || !labelled(lines[i], "Action Input:")) {
        throw Error(ErrorCode::ParseFailure, "'Action: " + step.action + "' is not followed by 'Action Input:'");
    }
    std::string input = *labelled(lines[i], "Action Input:");
    for (++i; i < lines.size(); ++i) {
        if (labelled(lines[i], "Observation:") || labelled(lines[i], "Thought:") || labelled(lines[i], "Action:") ||
            labelled(lines[i], "Final Answer:")) {
            break;
        }
        input += "\n" + lines[i];
    }
    step.action_input = trim(input);
    return step;
}

std::string serialize(const ReActStep& step) {
    std::string out;
    if (!step.thought.empty()) out += "Thought: " + step.thought + "\n";
    out += "Action: " + step.action + "\n";
    out += "Action Input: " + step.action_input;
    return out;
}

std::string serialize(const FinalAnswer& answer) {
    std::string out;
    if (!answer.thought.empty()) out += "Thought: " + answer.thought + "\n";
    out += "Final Answer: " + answer.text;
    return out;
}

bool ArgValue::is_real_list() const {
    return kind == Kind::List &&
           std::all_of(list.begin(), list.end(), [](const control::Complex& z) { return z.imag() == 0.0; });
}

control::Matrix ArgValue::as_matrix() const {
    switch (kind) {
        case Kind::Matrix: return matrix;
        case Kind::Number: return control::Matrix::Constant(1, 1, number);
        case Kind::List: {
            if (!is_real_list()) throw Error(ErrorCode::ArgParseError, "expected a real matrix, got a complex list");
            control::Matrix m(1, static_cast<Eigen::Index>(list.size()));
            for (std::size_t i = 0; i < list.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = list[i].real();
            return m;
        }
        case Kind::String: break;
    }
    throw Error(ErrorCode::ArgParseError, "expected a matrix, got '" + text + "'");
}

ArgMap parse_action_input(std::string_view raw) {
    ArgMap out;
    if (trim(raw).empty()) return out;
    for (const auto& seg : split_segments(raw)) {
        const std::string_view s = raw.substr(seg.begin, seg.end - seg.begin);
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) arg_error(seg.begin, seg.end, raw, "expected 'name = value'");
        std::string name = trim(s.substr(0, eq));
        name.erase(std::remove(name.begin(), name.end(), '$'), name.end());
        name = trim(name);
        if (name.empty() || !std::all_of(name.begin(), name.end(), is_ident_char)) {
            arg_error(seg.begin, seg.begin + eq, raw, "bad argument name");
        }
        if (out.count(name)) arg_error(seg.begin, seg.end, raw, "duplicate argument '" + name + "'");
        out[name] = parse_value(raw, seg.begin + eq + 1, seg.end);
    }
    return out;
}

}  // namespace agentctl::agents
