#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "agentctl/trace/event.hpp"

namespace agentctl::trace {

// Append-only, session-scoped event log. Sequence numbers start at 1 and are
// strictly increasing. Listeners run synchronously on the appending thread,
// after the event is stored.
class Recorder {
public:
    using Listener = std::function<void(const Event&)>;

    Recorder();

    Event append(EventKind kind, std::string agent, Json data = Json::object());

    int subscribe(Listener listener);
    void unsubscribe(int token);

    std::vector<Event> snapshot() const;
    std::vector<Event> events_after(std::uint64_t seq) const;
    std::uint64_t last_seq() const;
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::vector<Event> events_;
    std::map<int, Listener> listeners_;
    int next_token_ = 0;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace agentctl::trace
