#include "agentctl/error.hpp"

#include <array>
#include <utility>

namespace agentctl {

namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 35> kNames{{
    {ErrorCode::DegenerateSystem, "DegenerateSystem"},
    {ErrorCode::ImproperSystem, "ImproperSystem"},
    {ErrorCode::ShapeError, "ShapeError"},
    {ErrorCode::UnsupportedShape, "UnsupportedShape"},
    {ErrorCode::Uncontrollable, "Uncontrollable"},
    {ErrorCode::BadPoleSet, "BadPoleSet"},
    {ErrorCode::Unstabilizable, "Unstabilizable"},
    {ErrorCode::SingularWeight, "SingularWeight"},
    {ErrorCode::InvalidWeight, "InvalidWeight"},
    {ErrorCode::NoConvergence, "NoConvergence"},
    {ErrorCode::BadGrid, "BadGrid"},
    {ErrorCode::RunAborted, "RunAborted"},
    {ErrorCode::TemplateError, "TemplateError"},
    {ErrorCode::ParseFailure, "ParseFailure"},
    {ErrorCode::ArgParseError, "ArgParseError"},
    {ErrorCode::NodeStalled, "NodeStalled"},
    {ErrorCode::UnknownTool, "UnknownTool"},
    {ErrorCode::UnknownHandle, "UnknownHandle"},
    {ErrorCode::PlanFailure, "PlanFailure"},
    {ErrorCode::BackendError, "BackendError"},
    {ErrorCode::BackendAuthError, "BackendAuthError"},
    {ErrorCode::IngestError, "IngestError"},
    {ErrorCode::NoCorpus, "NoCorpus"},
    {ErrorCode::SearchUnavailable, "SearchUnavailable"},
    {ErrorCode::StoreError, "StoreError"},
    {ErrorCode::MissingScriptedReply, "MissingScriptedReply"},
    {ErrorCode::HumanTimeout, "HumanTimeout"},
    {ErrorCode::NotImplemented, "NotImplemented"},
    {ErrorCode::EmptyEvaluation, "EmptyEvaluation"},
    {ErrorCode::MetricUndefined, "MetricUndefined"},
    {ErrorCode::ScenarioError, "ScenarioError"},
    {ErrorCode::Busy, "Busy"},
    {ErrorCode::NotFound, "NotFound"},
    {ErrorCode::NoQuestion, "NoQuestion"},
    {ErrorCode::ValidationError, "ValidationError"},
}};

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
    for (const auto& [c, name] : kNames) {
        if (c == code) return name;
    }
    return "Error";
}

std::optional<ErrorCode> error_code_from_string(std::string_view name) noexcept {
    for (const auto& [c, n] : kNames) {
        if (n == name) return c;
    }
    return std::nullopt;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace agentctl
