#include "agentctl/service/session_service.hpp"

#include <condition_variable>
#include <thread>

#include "agentctl/error.hpp"

namespace agentctl::service {

namespace {

double number_field(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw Error(ErrorCode::ValidationError, "override '" + key + "' must be a number");
    return v.get<double>();
}

int int_field(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer()) throw Error(ErrorCode::ValidationError, "override '" + key + "' must be an integer");
    return v.get<int>();
}

}  // namespace

agents::GraphConfig apply_overrides(const agents::GraphConfig& base, const nlohmann::json& overrides) {
    agents::GraphConfig c = base;
    if (overrides.is_null()) return c;
    if (!overrides.is_object()) throw Error(ErrorCode::ValidationError, "overrides must be an object");
    for (const auto& [key, v] : overrides.items()) {
        if (key == "critic_threshold") {
            c.critic_threshold = number_field(v, key);
        } else if (key == "recall_threshold") {
            c.recall_threshold = number_field(v, key);
        } else if (key == "temperature") {
            c.temperature = number_field(v, key);
        } else if (key == "max_steps") {
            c.max_steps = int_field(v, key);
        } else if (key == "max_inner") {
            c.max_inner = int_field(v, key);
        } else if (key == "max_revisions") {
            c.max_revisions = int_field(v, key);
        } else if (key == "max_output_tokens") {
            c.max_output_tokens = int_field(v, key);
        } else if (key == "model_name") {
            if (!v.is_string() || v.get<std::string>().empty()) {
                throw Error(ErrorCode::ValidationError, "override 'model_name' must be a nonempty string");
            }
            c.model_name = v.get<std::string>();
        } else {
            throw Error(ErrorCode::ValidationError, "unknown override '" + key + "'");
        }
    }
    agents::validate(c);
    return c;
}

struct SessionService::Session {
    std::string id;
    std::unique_ptr<llm::Backend> backend;
    std::shared_ptr<tools::PendingQuestionChannel> channel;
    std::unique_ptr<agents::Conversation> conversation;
    int listener = -1;

    mutable std::mutex mutex;
    mutable std::condition_variable cv;
    std::thread worker;
    TurnStatus status;
    std::optional<std::string> pending;

    ~Session() {
        if (worker.joinable()) worker.join();
        if (conversation && listener >= 0) conversation->recorder().unsubscribe(listener);
    }
};

SessionService::SessionService(ServiceConfig config) : config_(std::move(config)) {
    agents::validate(config_.graph);
    if (!config_.backend) throw Error(ErrorCode::ValidationError, "a backend factory is required");
    if (!config_.memory) config_.memory = std::make_shared<tools::InMemoryStore>();
}

SessionService::~SessionService() {
    std::map<std::string, std::shared_ptr<Session>> sessions;
    {
        std::lock_guard lock(mutex_);
        sessions.swap(sessions_);
    }
    // Unblock turns waiting on a human reply so the workers can finish.
    for (auto& [id, s] : sessions) {
        while (true) {
            {
                std::lock_guard lock(s->mutex);
                if (!s->status.running) break;
            }
            if (!s->channel->answer("text")) std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
        if (s->worker.joinable()) s->worker.join();
    }
}

std::string SessionService::create_session(const nlohmann::json& overrides) {
    agents::GraphConfig graph = apply_overrides(config_.graph, overrides);
    auto s = std::make_shared<Session>();
    {
        std::lock_guard lock(mutex_);
        s->id = "s" + std::to_string(next_id_++);
    }
    s->backend = config_.backend();
    if (!s->backend) throw Error(ErrorCode::ValidationError, "backend factory returned nothing");
    s->channel = std::make_shared<tools::PendingQuestionChannel>(config_.human_timeout);

    agents::Resources res;
    res.backend = s->backend.get();
    res.memory = config_.memory;
    res.corpus = config_.corpus;
    res.search = config_.search;
    res.human = s->channel;
    res.prompts = config_.prompts;
    s->conversation = std::make_unique<agents::Conversation>(s->id, res, graph);

    Session* raw = s.get();
    s->channel->set_notifier([raw](const std::string& prompt) {
        std::lock_guard lock(raw->mutex);
        raw->pending = prompt;
        raw->cv.notify_all();
    });
    s->listener = s->conversation->recorder().subscribe([raw](const trace::Event& e) {
        std::lock_guard lock(raw->mutex);
        raw->status.last_seq = e.seq;
        raw->cv.notify_all();
    });

    std::lock_guard lock(mutex_);
    sessions_[s->id] = s;
    return s->id;
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& session_id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "no session '" + session_id + "'");
    return it->second;
}

std::uint64_t SessionService::post_message(const std::string& session_id, const std::string& text) {
    auto s = find(session_id);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::ValidationError, "message text is empty");
    }
    std::unique_lock lock(s->mutex);
    if (s->status.running) throw Error(ErrorCode::Busy, "session '" + session_id + "' is already running a turn");
    if (s->worker.joinable()) {
        // previous worker has finished its turn
        std::thread old = std::move(s->worker);
        lock.unlock();
        old.join();
        lock.lock();
    }
    const std::uint64_t first = s->conversation->recorder().last_seq();
    s->status = TurnStatus{true, first, first, std::nullopt, std::nullopt};
    s->pending.reset();
    Session* raw = s.get();
    s->worker = std::thread([raw, text] {
        std::optional<std::string> answer, error;
        try {
            answer = raw->conversation->run_turn(text).final_answer;
        } catch (const agents::TurnAborted& e) {
            error = e.what();
        } catch (const std::exception& e) {
            error = e.what();
            raw->conversation->recorder().append(trace::EventKind::Error, "Service",
                                                 {{"error", "Internal"}, {"message", e.what()}});
        }
        std::lock_guard lock(raw->mutex);
        raw->status.running = false;
        raw->status.final_answer = std::move(answer);
        raw->status.error = std::move(error);
        raw->status.last_seq = raw->conversation->recorder().last_seq();
        raw->pending.reset();
        raw->cv.notify_all();
    });
    return first;
}

void SessionService::answer(const std::string& session_id, const std::string& reply) {
    auto s = find(session_id);
    {
        std::unique_lock lock(s->mutex);
        // question_to_user is recorded just before the channel starts waiting
        const auto last = s->conversation->recorder().events_after(s->status.last_seq == 0 ? 0 : s->status.last_seq - 1);
        const bool asked = !last.empty() && last.back().kind == trace::EventKind::QuestionToUser;
        if (asked) s->cv.wait_for(lock, std::chrono::seconds(2), [&] { return s->pending || !s->status.running; });
        if (!s->pending) throw Error(ErrorCode::NoQuestion, "session '" + session_id + "' has no pending question");
        s->pending.reset();
    }
    if (!s->channel->answer(reply)) {
        throw Error(ErrorCode::NoQuestion, "session '" + session_id + "' has no pending question");
    }
}

std::vector<trace::Event> SessionService::trace(const std::string& session_id) const {
    return find(session_id)->conversation->recorder().snapshot();
}

std::vector<trace::Event> SessionService::events_after(const std::string& session_id, std::uint64_t seq) const {
    return find(session_id)->conversation->recorder().events_after(seq);
}

std::pair<std::vector<trace::Event>, bool> SessionService::wait_events(const std::string& session_id,
                                                                       std::uint64_t seq,
                                                                       std::chrono::milliseconds timeout) const {
    auto s = find(session_id);
    {
        std::unique_lock lock(s->mutex);
        s->cv.wait_for(lock, timeout, [&] { return s->status.last_seq > seq || !s->status.running; });
    }
    auto events = s->conversation->recorder().events_after(seq);
    std::lock_guard lock(s->mutex);
    const bool over = !s->status.running && (events.empty() || events.back().seq >= s->status.last_seq);
    return {std::move(events), over};
}

TurnStatus SessionService::status(const std::string& session_id) const {
    auto s = find(session_id);
    std::lock_guard lock(s->mutex);
    return s->status;
}

std::optional<std::string> SessionService::pending_question(const std::string& session_id) const {
    auto s = find(session_id);
    std::lock_guard lock(s->mutex);
    return s->pending;
}

const agents::GraphConfig& SessionService::session_config(const std::string& session_id) const {
    return find(session_id)->conversation->config();
}

std::optional<nlohmann::json> SessionService::last_plot(const std::string& session_id) const {
    const auto events = trace(session_id);
    for (auto it = events.rbegin(); it != events.rend(); ++it) {
        if (it->kind == trace::EventKind::PlotPayload) return std::optional<nlohmann::json>(std::in_place, it->data);
    }
    return std::nullopt;
}

void SessionService::join(const std::string& session_id) {
    auto s = find(session_id);
    std::unique_lock lock(s->mutex);
    s->cv.wait(lock, [&] { return !s->status.running; });
    if (s->worker.joinable()) {
        std::thread t = std::move(s->worker);
        lock.unlock();
        t.join();
    }
}

std::size_t SessionService::session_count() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

}  // namespace agentctl::service
