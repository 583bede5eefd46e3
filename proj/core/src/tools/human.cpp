#include "agentctl/tools/human.hpp"

#include <istream>
#include <ostream>

#include "agentctl/error.hpp"

namespace agentctl::tools {

ScriptedReplies::ScriptedReplies(std::vector<std::string> replies) : replies_(replies.begin(), replies.end()) {}

std::string ScriptedReplies::ask(std::string_view prompt) {
    if (replies_.empty()) {
        throw Error(ErrorCode::MissingScriptedReply, "no scripted reply left for \"" + std::string(prompt) + "\"");
    }
    std::string r = std::move(replies_.front());
    replies_.pop_front();
    return r;
}

void ScriptedReplies::push(std::string reply) { replies_.push_back(std::move(reply)); }

StreamChannel::StreamChannel(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

std::string StreamChannel::ask(std::string_view prompt) {
    out_ << prompt << "\n> " << std::flush;
    std::string line;
    if (!std::getline(in_, line)) throw Error(ErrorCode::HumanTimeout, "input closed before a reply arrived");
    return line;
}

PendingQuestionChannel::PendingQuestionChannel(std::chrono::milliseconds timeout) : timeout_(timeout) {}

void PendingQuestionChannel::set_notifier(Notifier notifier) {
    std::lock_guard lock(mutex_);
    notifier_ = std::move(notifier);
}

std::string PendingQuestionChannel::ask(std::string_view prompt) {
    Notifier notify;
    {
        std::lock_guard lock(mutex_);
        prompt_ = std::string(prompt);
        reply_.reset();
        notify = notifier_;
    }
    if (notify) notify(std::string(prompt));
    std::unique_lock lock(mutex_);
    if (!cv_.wait_for(lock, timeout_, [this] { return reply_.has_value(); })) {
        prompt_.reset();
        throw Error(ErrorCode::HumanTimeout, "no reply within " + std::to_string(timeout_.count()) + " ms");
    }
    std::string r = std::move(*reply_);
    reply_.reset();
    prompt_.reset();
    return r;
}

bool PendingQuestionChannel::answer(std::string reply) {
    {
        std::lock_guard lock(mutex_);
        if (!prompt_ || reply_) return false;
        reply_ = std::move(reply);
    }
    cv_.notify_all();
    return true;
}

std::optional<std::string> PendingQuestionChannel::pending_prompt() const {
    std::lock_guard lock(mutex_);
    if (reply_) return std::nullopt;
    return prompt_;
}

}  // namespace agentctl::tools
