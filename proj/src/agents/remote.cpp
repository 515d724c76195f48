#include <cmath>
#include <cstdlib>
#include <thread>

#include "pings/agents.hpp"

namespace pings::agents {

namespace {

// Releases an in-flight slot on scope exit.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<RemoteClient::kMaxInFlight>& s) : s_(s) {
    s_.acquire();
  }
  ~SlotGuard() {
    if (held_) s_.release();
  }
  void release() {
    if (held_) s_.release();
    held_ = false;
  }
  void acquire() {
    if (!held_) s_.acquire();
    held_ = true;
  }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<RemoteClient::kMaxInFlight>& s_;
  bool held_ = true;
};

std::string snippet(const std::string& body) {
  return body.size() > 200 ? body.substr(0, 200) + "..." : body;
}

std::string extract_text(const std::string& body) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::exception&) {
    throw MalformedResponse("response is not JSON", body);
  }
  const auto* text = [&]() -> const Json* {
    if (!j.is_object() || !j.contains("choices") || !j["choices"].is_array() ||
        j["choices"].empty()) {
      return nullptr;
    }
    const Json& c = j["choices"][0];
    if (!c.is_object() || !c.contains("message") || !c["message"].is_object()) return nullptr;
    const Json& m = c["message"];
    if (!m.contains("content") || !m["content"].is_string()) return nullptr;
    return &m["content"];
  }();
  if (!text) throw MalformedResponse("response has no text candidate", body);
  return text->get<std::string>();
}

}  // namespace

void RemoteAgentConfig::validate() const {
  if (endpoint.empty()) throw InvalidArgument("remote endpoint is empty");
  if (model.empty()) throw InvalidArgument("remote model is empty");
  if (provider != "openai" && provider != "gemini-openai" && provider != "generic") {
    throw InvalidArgument("unknown provider: " + provider);
  }
  if (max_retries < 0) throw InvalidArgument("max_retries must be >= 0");
  if (timeout.count() <= 0) throw InvalidArgument("timeout must be positive");
  if (max_in_flight < 1 || max_in_flight > RemoteClient::kMaxInFlight) {
    throw InvalidArgument("max_in_flight out of range");
  }
  if (backoff_base.count() < 0 || backoff_max < backoff_base) {
    throw InvalidArgument("bad backoff settings");
  }
}

Json thinking_fields(const std::string& provider, bool thinking) {
  Json j = Json::object();
  if (provider == "openai") {
    if (thinking) j["reasoning_effort"] = "high";
  } else if (provider == "gemini-openai") {
    j["reasoning_effort"] = thinking ? "high" : "none";
  } else {
    j["thinking"] = thinking;
  }
  return j;
}

Json build_request_body(const RemoteAgentConfig& config,
                        const std::vector<ChatMessage>& messages) {
  Json body;
  body["model"] = config.model;
  body["temperature"] = config.temperature;
  Json msgs = Json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  body["messages"] = std::move(msgs);
  const Json extra = thinking_fields(config.provider, config.thinking);
  for (const auto& [k, v] : extra.items()) body[k] = v;
  return body;
}

RemoteClient::RemoteClient(RemoteAgentConfig config, std::shared_ptr<Transport> transport,
                           Sleeper sleeper, std::uint64_t jitter_seed)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      slots_(config_.max_in_flight),
      jitter_(jitter_seed) {
  config_.validate();
  if (!transport_) throw InvalidArgument("remote client needs a transport");
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::chrono::milliseconds RemoteClient::backoff(int attempt) {
  const double cap = std::min(static_cast<double>(config_.backoff_max.count()),
                              static_cast<double>(config_.backoff_base.count()) *
                                  std::ldexp(1.0, std::min(attempt, 30)));
  double u;
  {
    std::lock_guard<std::mutex> lock(rng_mutex_);
    u = jitter_.uniform01();
  }
  return std::chrono::milliseconds(static_cast<std::int64_t>(cap * (0.5 + 0.5 * u)));
}

CallResult RemoteClient::complete(const std::vector<ChatMessage>& messages) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (!key || !*key) {
    throw AuthError("credential variable " + config_.api_key_env + " is not set");
  }
  HttpRequest request;
  request.url = config_.endpoint;
  request.headers = {{"Authorization", std::string("Bearer ") + key}};
  request.body = build_request_body(config_, messages).dump();
  request.timeout = config_.timeout;

  CallResult result;
  SlotGuard slot(slots_);
  for (int attempt = 0;; ++attempt) {
    std::exception_ptr transient;
    try {
      const HttpResponse r = transport_->post(request);
      if (r.status >= 200 && r.status < 300) {
        result.text = extract_text(r.body);
        return result;
      }
      if (r.status == 401 || r.status == 403) {
        throw AuthError("credential rejected (HTTP " + std::to_string(r.status) + ")");
      }
      if (r.status == 429) {
        transient = std::make_exception_ptr(RateLimited("rate limited: " + snippet(r.body)));
      } else if (r.status >= 500) {
        transient = std::make_exception_ptr(
            ServerError("HTTP " + std::to_string(r.status) + ": " + snippet(r.body)));
      } else {
        throw RemoteError("HTTP " + std::to_string(r.status) + ": " + snippet(r.body));
      }
    } catch (const Timeout&) {
      transient = std::current_exception();
    }
    if (attempt >= config_.max_retries) std::rethrow_exception(transient);
    ++result.retries;
    ++total_retries_;
    // a sleeping call is not in flight
    slot.release();
    sleeper_(backoff(attempt));
    slot.acquire();
  }
}

std::string RemoteAgent::id() const { return "remote:" + client_->config().model; }

std::string RemoteAgent::next_utterance(const AgentContext& ctx) {
  return client_->complete({{"user", ctx.prompt}}).text;
}

}  // namespace pings::agents
