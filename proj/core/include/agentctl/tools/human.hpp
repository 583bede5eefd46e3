#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agentctl::tools {

inline constexpr std::chrono::seconds kDefaultHumanTimeout{300};

class HumanChannel {
public:
    virtual ~HumanChannel() = default;
    virtual std::string ask(std::string_view prompt) = 0;
};

// Harness mode. MissingScriptedReply once the queue is exhausted.
class ScriptedReplies : public HumanChannel {
public:
    explicit ScriptedReplies(std::vector<std::string> replies = {});
    std::string ask(std::string_view prompt) override;
    void push(std::string reply);
    std::size_t remaining() const noexcept { return replies_.size(); }

private:
    std::deque<std::string> replies_;
};

// Interactive terminal. HumanTimeout when the input stream closes.
class StreamChannel : public HumanChannel {
public:
    StreamChannel(std::istream& in, std::ostream& out);
    std::string ask(std::string_view prompt) override;

private:
    std::istream& in_;
    std::ostream& out_;
};

// Service mode: ask() publishes the question through the notifier and blocks
// until answer() delivers a reply or the timeout elapses (HumanTimeout).
class PendingQuestionChannel : public HumanChannel {
public:
    using Notifier = std::function<void(const std::string& prompt)>;

    explicit PendingQuestionChannel(std::chrono::milliseconds timeout = kDefaultHumanTimeout);

    void set_notifier(Notifier notifier);
    std::string ask(std::string_view prompt) override;

    // False when no question is pending.
    bool answer(std::string reply);
    std::optional<std::string> pending_prompt() const;

private:
    std::chrono::milliseconds timeout_;
    Notifier notifier_;
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::optional<std::string> prompt_;
    std::optional<std::string> reply_;
};

}  // namespace agentctl::tools
