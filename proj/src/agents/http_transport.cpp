#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <regex>

#include "pings/agents.hpp"

namespace pings::agents {

namespace {

class HttplibTransport : public Transport {
 public:
  HttpResponse post(const HttpRequest& request) override {
    static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(request.url, m, kUrl)) {
      throw RemoteError("unsupported endpoint URL: " + request.url);
    }
    const std::string path = m[2].matched ? m[2].str() : "/";

    // One client per call keeps the transport free of shared state.
    httplib::Client client(m[1].str());
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    for (const auto& [k, v] : request.headers) headers.emplace(k, v);
    auto res = client.Post(path, headers, request.body, "application/json");
    if (!res) {
      const auto err = res.error();
      // cpp-httplib reports an expired read deadline as a read error
      if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read) {
        throw Timeout("request timed out: " + httplib::to_string(err));
      }
      throw RemoteError("transport failure: " + httplib::to_string(err));
    }
    return HttpResponse{res->status, res->body};
  }
};

}  // namespace

std::unique_ptr<Transport> make_http_transport() { return std::make_unique<HttplibTransport>(); }

}  // namespace pings::agents
