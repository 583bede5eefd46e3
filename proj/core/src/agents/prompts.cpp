#include "agentctl/agents/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "agentctl/error.hpp"

namespace agentctl::agents {

namespace detail {
const std::map<std::string, std::string>& builtin_prompt_files();
}

namespace {

[[noreturn]] void template_error(const std::string& what) { throw Error(ErrorCode::TemplateError, what); }

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

void rstrip(std::string& s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
}

std::string as_text(const nlohmann::json& v, const std::string& name) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    if (v.is_array()) {
        std::string out;
        for (const auto& e : v) {
            if (!out.empty()) out += ", ";
            out += as_text(e, name);
        }
        return out;
    }
    template_error("slot '" + name + "' is not text");
}

// Looks up "name" or "map[key]", where key may itself be a bound name.
std::string resolve(const std::string& expr, const nlohmann::json& scope) {
    const auto lb = expr.find('[');
    if (lb == std::string::npos) {
        auto it = scope.find(expr);
        if (it == scope.end()) template_error("unbound placeholder {" + expr + "}");
        return as_text(*it, expr);
    }
    if (expr.back() != ']') template_error("malformed placeholder {" + expr + "}");
    const std::string map = expr.substr(0, lb);
    std::string key = expr.substr(lb + 1, expr.size() - lb - 2);
    if (auto k = scope.find(key); k != scope.end() && k->is_string()) key = k->get<std::string>();
    auto m = scope.find(map);
    if (m == scope.end() || !m->is_object()) template_error("unbound placeholder {" + expr + "}");
    auto v = m->find(key);
    if (v == m->end()) template_error("unbound placeholder {" + expr + "}");
    return as_text(*v, expr);
}

struct Tag {
    std::size_t begin, end;  // [begin, end) covers "{%...%}"
    bool trim_before, trim_after;
    std::string body;
};

std::optional<Tag> next_tag(std::string_view t, std::size_t from) {
    const auto b = t.find("{%", from);
    if (b == std::string_view::npos) return std::nullopt;
    const auto e = t.find("%}", b + 2);
    if (e == std::string_view::npos) template_error("unterminated {% tag");
    Tag tag{b, e + 2, false, false, {}};
    std::string_view inner = t.substr(b + 2, e - b - 2);
    if (!inner.empty() && inner.front() == '-') {
        tag.trim_before = true;
        inner.remove_prefix(1);
    }
    if (!inner.empty() && inner.back() == '-') {
        tag.trim_after = true;
        inner.remove_suffix(1);
    }
    tag.body = trim(inner);
    return tag;
}

std::string render(std::string_view t, const nlohmann::json& scope);

// Renders plain text with {placeholders}, no block tags.
std::string substitute(std::string_view t, const nlohmann::json& scope) {
    std::string out;
    for (std::size_t i = 0; i < t.size();) {
        const char c = t[i];
        if (c == '{' && i + 1 < t.size() && t[i + 1] == '{') {
            out += '{';
            i += 2;
        } else if (c == '}' && i + 1 < t.size() && t[i + 1] == '}') {
            out += '}';
            i += 2;
        } else if (c == '{') {
            const auto close = t.find('}', i);
            if (close == std::string_view::npos) template_error("unterminated placeholder at offset " + std::to_string(i));
            out += resolve(trim(t.substr(i + 1, close - i - 1)), scope);
            i = close + 1;
        } else {
            out += c;
            ++i;
        }
    }
    return out;
}

std::string render(std::string_view t, const nlohmann::json& scope) {
    std::string out;
    std::size_t pos = 0;
    while (auto tag = next_tag(t, pos)) {
        out += substitute(t.substr(pos, tag->begin - pos), scope);
        if (tag->trim_before) rstrip(out);
        std::istringstream words(tag->body);
        std::string kw, var, in, list;
        words >> kw >> var >> in >> list;
        if (kw != "for" || in != "in" || list.empty()) template_error("unsupported tag {% " + tag->body + " %}");

        // find the matching endfor, honoring nesting
        std::size_t scan = tag->end;
        int depth = 1;
        std::optional<Tag> end_tag;
        while (auto inner = next_tag(t, scan)) {
            if (inner->body.starts_with("for ")) ++depth;
            if (inner->body == "endfor" && --depth == 0) {
                end_tag = inner;
                break;
            }
            scan = inner->end;
        }
        if (!end_tag) template_error("{% for %} without {% endfor %}");

        std::string body(t.substr(tag->end, end_tag->begin - tag->end));
        if (tag->trim_after) body.erase(0, std::min(body.size(), body.find_first_not_of(" \t\r\n")));
        if (end_tag->trim_before) rstrip(body);

        auto items = scope.find(list);
        if (items == scope.end() || !items->is_array()) template_error("loop over unbound list '" + list + "'");
        for (const auto& item : *items) {
            nlohmann::json inner_scope = scope;
            inner_scope[var] = item;
            out += render(body, inner_scope);
        }
        pos = end_tag->end;
        if (end_tag->trim_after) {
            while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
        }
    }
    out += substitute(t.substr(pos), scope);
    return out;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) template_error("cannot read prompt asset " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

std::string render_prompt(std::string_view tmpl, const nlohmann::json& slots) {
    if (!slots.is_object()) template_error("slots must be an object");
    return render(tmpl, slots);
}

const PromptLibrary& PromptLibrary::builtin() {
    static const PromptLibrary lib = [] {
        PromptLibrary l;
        for (const auto& [name, text] : detail::builtin_prompt_files()) {
            if (name == "VERSION") {
                l.version_ = trim(text);
            } else {
                l.files_[name.substr(0, name.size() - 4)] = text;
            }
        }
        return l;
    }();
    return lib;
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
    PromptLibrary l;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        const auto& p = entry.path();
        if (p.filename() == "VERSION") l.version_ = trim(read_file(p));
        if (p.extension() == ".txt") l.files_[p.stem().string()] = read_file(p);
    }
    if (ec) template_error("cannot list prompt directory " + dir.string());
    for (const char* required : {"supervisor", "supervisor_routing", "format_instruction"}) {
        if (!l.has(required)) template_error("prompt directory lacks " + std::string(required) + ".txt");
    }
    return l;
}

const std::string& PromptLibrary::get(const std::string& name) const {
    auto it = files_.find(name);
    if (it == files_.end()) template_error("no prompt asset '" + name + "'");
    return it->second;
}

std::string PromptLibrary::node_template(const std::string& node) const {
    std::string out = trim(get(node + ".prefix"));
    out += "\n\n";
    out += trim(get("format_instruction"));
    const std::string suffix = trim(get(node + ".suffix"));
    if (!suffix.empty()) out += "\n\n" + suffix;
    return out;
}

std::string PromptLibrary::supervisor_template() const { return trim(get("supervisor")); }

std::string PromptLibrary::routing_template() const { return trim(get("supervisor_routing")); }

}  // namespace agentctl::agents
