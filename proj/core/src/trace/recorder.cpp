#include "agentctl/trace/recorder.hpp"

#include <algorithm>

namespace agentctl::trace {

Recorder::Recorder() : start_(std::chrono::steady_clock::now()) {}

Event Recorder::append(EventKind kind, std::string agent, Json data) {
    Event event;
    std::vector<Listener> listeners;
    {
        std::lock_guard lock(mutex_);
        event.seq = events_.empty() ? 1 : events_.back().seq + 1;
        event.t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        event.kind = kind;
        event.agent = std::move(agent);
        event.data = std::move(data);
        events_.push_back(event);
        for (const auto& [token, fn] : listeners_) listeners.push_back(fn);
    }
    for (const auto& fn : listeners) fn(event);
    return event;
}

int Recorder::subscribe(Listener listener) {
    std::lock_guard lock(mutex_);
    const int token = next_token_++;
    listeners_.emplace(token, std::move(listener));
    return token;
}

void Recorder::unsubscribe(int token) {
    std::lock_guard lock(mutex_);
    listeners_.erase(token);
}

std::vector<Event> Recorder::snapshot() const {
    std::lock_guard lock(mutex_);
    return events_;
}

std::vector<Event> Recorder::events_after(std::uint64_t seq) const {
    std::lock_guard lock(mutex_);
    auto it = std::upper_bound(events_.begin(), events_.end(), seq,
                               [](std::uint64_t s, const Event& e) { return s < e.seq; });
    return {it, events_.end()};
}

std::uint64_t Recorder::last_seq() const {
    std::lock_guard lock(mutex_);
    return events_.empty() ? 0 : events_.back().seq;
}

std::size_t Recorder::size() const {
    std::lock_guard lock(mutex_);
    return events_.size();
}

}  // namespace agentctl::trace
