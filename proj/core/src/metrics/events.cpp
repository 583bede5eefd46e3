#include "agentctl/metrics/events.hpp"

namespace agentctl::metrics::events {

Json agent_started(std::string_view input) { return {{"input_digest", trace::digest(input)}}; }

Json agent_finished(std::string_view output, const std::optional<std::string>& routed_next, bool conditional) {
    Json j = {{"output", output}, {"output_digest", trace::digest(output)}, {"conditional", conditional}};
    j["routed_next"] = routed_next ? Json(*routed_next) : Json(nullptr);
    return j;
}

Json plan(std::string_view system_type, std::string_view objective, const std::vector<std::string>& ordered_tools) {
    return {{"system_type", system_type}, {"objective", objective}, {"ordered_tools", ordered_tools}};
}

Json tool_call(std::string_view tool, std::string_view args, bool ok, std::string_view error) {
    Json j = {{"tool", tool}, {"args", args}, {"args_digest", trace::digest(args)}, {"ok", ok}};
    if (!ok) j["error"] = error;
    return j;
}

Json observation(std::string_view tool, std::string_view text) { return {{"tool", tool}, {"text", text}}; }

Json critic_verdict(double similarity, bool accepted, double threshold, bool forced, std::string_view answer) {
    return {{"similarity", similarity},
            {"accepted", accepted},
            {"threshold", threshold},
            {"forced", forced},
            {"answer", answer}};
}

Json debug(std::string_view error_class, bool detected, bool fixed, std::string_view advice) {
    return {{"error_class", error_class}, {"detected", detected}, {"fixed", fixed}, {"advice", advice}};
}

Json memory_store(bool ok) { return {{"mode", "store"}, {"ok", ok}}; }

Json memory_recall(bool hit, double similarity) {
    return {{"mode", "recall"}, {"hit", hit}, {"similarity", similarity}};
}

Json delivery(std::string_view requested, std::string_view delivered, bool ok, std::string_view artifact) {
    Json j = {{"requested", requested}, {"delivered", delivered}, {"ok", ok}};
    if (!artifact.empty()) j["artifact"] = artifact;
    return j;
}

Json final_answer(std::string_view text) { return {{"text", text}}; }

Json error(std::string_view code, std::string_view message) { return {{"code", code}, {"message", message}}; }

}  // namespace agentctl::metrics::events
