#include "agentctl/tools/reason.hpp"

#include <cctype>

namespace agentctl::tools {

namespace {

constexpr const char* kCotScaffold =
    "Solve the problem with chain-of-thought reasoning. Write numbered steps, one idea per step, "
    "and state the result on the last line.";
constexpr const char* kTotScaffold =
    "Solve the problem with tree-of-thought reasoning. You are drafting candidate path {k} of 3; "
    "take a different approach from the other candidates and state its result on the last line.";
constexpr const char* kTotSelect =
    "Three candidate reasoning paths follow. Compare them for correctness and completeness and reply "
    "with the number (1, 2 or 3) of the best path.";

std::string call(llm::Backend& backend, const ReasonContext& ctx, std::string node, int step, std::string system,
                 std::string user) {
    llm::CompletionRequest req;
    req.system_text = std::move(system);
    req.user_text = std::move(user);
    req.model_name = ctx.model_name;
    req.temperature = ctx.temperature;
    req.node = std::move(node);
    req.step = step;
    req.latest_user_message = ctx.latest_user_message;
    const llm::Completion c = backend.complete(req);
    if (ctx.on_call) ctx.on_call(req, c);
    return c.text;
}

}  // namespace

ReasonResult reason_tool(ReasonMode mode, std::string_view query, llm::Backend& backend, const ReasonContext& context) {
    ReasonResult out;
    const std::string q(query);
    if (mode == ReasonMode::Cot) {
        out.paths.push_back(call(backend, context, "Reasoner.cot_tool", 0, kCotScaffold, q));
        out.text = "Path 1:\n" + out.paths[0];
        return out;
    }

    std::string listing;
    for (int k = 1; k <= kTotPaths; ++k) {
        std::string scaffold = kTotScaffold;
        scaffold.replace(scaffold.find("{k}"), 3, std::to_string(k));
        out.paths.push_back(call(backend, context, "Reasoner.tot_tool", k - 1, scaffold, q));
        listing += "Path " + std::to_string(k) + ":\n" + out.paths.back() + "\n\n";
    }
    const std::string choice = call(backend, context, "Reasoner.tot_tool", kTotPaths, kTotSelect, q + "\n\n" + listing);
    out.selected = 0;
    for (char c : choice) {
        if (c >= '1' && c <= '0' + kTotPaths) {
            out.selected = static_cast<std::size_t>(c - '1');
            break;
        }
    }
    out.text = listing + "Selected: Path " + std::to_string(out.selected + 1) + "\n" + out.paths[out.selected];
    return out;
}

}  // namespace agentctl::tools
