#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace agentctl {

// Every failure the library raises carries one of these codes. The names are
// part of the observable surface: tool observations, trace events and the
// debugger rule table all key on them.
enum class ErrorCode {
    // control kernel
    DegenerateSystem,
    ImproperSystem,
    ShapeError,
    UnsupportedShape,
    Uncontrollable,
    BadPoleSet,
    Unstabilizable,
    SingularWeight,
    InvalidWeight,
    NoConvergence,
    BadGrid,
    // agent graph
    RunAborted,
    TemplateError,
    ParseFailure,
    ArgParseError,
    NodeStalled,
    UnknownTool,
    UnknownHandle,
    PlanFailure,
    // backends
    BackendError,
    BackendAuthError,
    // auxiliary tools
    IngestError,
    NoCorpus,
    SearchUnavailable,
    StoreError,
    MissingScriptedReply,
    HumanTimeout,
    NotImplemented,
    // metrics / harness
    EmptyEvaluation,
    MetricUndefined,
    ScenarioError,
    // service
    Busy,
    NotFound,
    NoQuestion,
    ValidationError,
};

std::string_view to_string(ErrorCode code) noexcept;
std::optional<ErrorCode> error_code_from_string(std::string_view name) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    // Message without the "<Code>: " prefix that what() carries.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace agentctl
