#pragma once

// Paginated client for a commentThreads-style endpoint (the YouTube Data API
// v3 shape). Only comment ids and text are read from the response. Records
// come back Unlabeled and verbatim; preprocessing is a separate stage.

#include <chrono>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <json.hpp>

#include "senti/error.hpp"
#include "senti/ingest.hpp"

namespace senti::ingest {

inline constexpr const char* kDefaultCommentsEndpoint = "https://www.googleapis.com/youtube/v3/commentThreads";
inline constexpr const char* kApiKeyEnv = "YOUTUBE_API_KEY";

enum class FetchErrorKind { Auth, Quota, NotFound, Retryable, Fatal };

class FetchError : public ExternalError {
 public:
  FetchError(FetchErrorKind kind, const std::string& what) : ExternalError(what), kind_(kind) {}
  FetchErrorKind kind() const { return kind_; }
  bool retryable() const { return kind_ == FetchErrorKind::Retryable; }

 private:
  FetchErrorKind kind_;
};

struct FetchOptions {
  std::string base_url = kDefaultCommentsEndpoint;
  int max_results = 100;  // per page, the API caps this at 100
  int max_retries = 2;    // extra attempts for retryable failures
  std::chrono::milliseconds retry_backoff{500};
  std::chrono::seconds timeout{30};
};

namespace detail {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InputError("fetch: base URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

// Error reason from a Google-style error body, empty when absent.
inline std::string error_reason(const std::string& body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.contains("error")) return {};
  const auto& e = j["error"];
  if (e.contains("errors") && e["errors"].is_array() && !e["errors"].empty() && e["errors"][0].contains("reason"))
    return e["errors"][0]["reason"].get<std::string>();
  if (e.contains("status") && e["status"].is_string()) return e["status"].get<std::string>();
  return {};
}

inline FetchError classify(int status, const std::string& body) {
  const std::string reason = error_reason(body);
  const std::string tag = "HTTP " + std::to_string(status) + (reason.empty() ? "" : " (" + reason + ")");
  if (reason == "quotaExceeded" || reason == "dailyLimitExceeded" || reason == "rateLimitExceeded")
    return {FetchErrorKind::Quota, "fetch: quota exhausted: " + tag};
  if (status == 401 || status == 403) return {FetchErrorKind::Auth, "fetch: authorization failed: " + tag};
  if (status == 404 || reason == "videoNotFound") return {FetchErrorKind::NotFound, "fetch: unknown video: " + tag};
  if (status == 429 || status >= 500) return {FetchErrorKind::Retryable, "fetch: service unavailable: " + tag};
  return {FetchErrorKind::Fatal, "fetch: request rejected: " + tag};
}

// One lock per credential: pagination on a key is never concurrent.
inline std::mutex& key_mutex(const std::string& key) {
  static std::mutex registry_lock;
  static std::map<std::string, std::unique_ptr<std::mutex>> registry;
  std::lock_guard<std::mutex> g(registry_lock);
  auto& m = registry[key];
  if (!m) m = std::make_unique<std::mutex>();
  return *m;
}

}  // namespace detail

inline std::vector<LabeledComment> fetch_comments(const std::string& video_id, const std::string& api_key, int max_pages,
                                                  const FetchOptions& opt = {}) {
  if (api_key.empty()) throw FetchError(FetchErrorKind::Auth, "fetch: API key is empty");
  if (video_id.empty()) throw InputError("fetch: video id is empty");
  if (max_pages < 0) throw InputError("fetch: max_pages must be >= 0");
  if (max_pages == 0) return {};

  const auto ep = detail::split_url(opt.base_url);
  std::lock_guard<std::mutex> serial(detail::key_mutex(api_key));
  httplib::Client client(ep.origin);
  client.set_connection_timeout(opt.timeout);
  client.set_read_timeout(opt.timeout);

  std::vector<LabeledComment> out;
  std::string page_token;
  for (int page = 0; page < max_pages; ++page) {
    httplib::Params params{{"part", "snippet"},
                           {"videoId", video_id},
                           {"key", api_key},
                           {"maxResults", std::to_string(opt.max_results)},
                           {"textFormat", "plainText"}};
    if (!page_token.empty()) params.emplace("pageToken", page_token);

    std::string body;
    for (int attempt = 0;; ++attempt) {
      auto res = client.Get(ep.path, params, httplib::Headers{});
      std::optional<FetchError> err;
      if (!res) {
        err.emplace(FetchErrorKind::Retryable, "fetch: network error: " + httplib::to_string(res.error()));
      } else if (res->status != 200) {
        err.emplace(detail::classify(res->status, res->body));
      } else {
        body = std::move(res->body);
        break;
      }
      if (!err->retryable() || attempt >= opt.max_retries) throw *err;
      std::this_thread::sleep_for(opt.retry_backoff * (attempt + 1));
    }

    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw FetchError(FetchErrorKind::Fatal, "fetch: response is not JSON");
    if (j.contains("items")) {
      for (const auto& item : j["items"]) {
        LabeledComment c;
        c.id = item.value("id", std::string{});
        c.source = video_id;
        const auto* snip = &item;
        for (const char* key : {"snippet", "topLevelComment", "snippet"}) {
          if (!snip->contains(key)) {
            snip = nullptr;
            break;
          }
          snip = &(*snip)[key];
        }
        if (snip) c.text = snip->value("textOriginal", snip->value("textDisplay", std::string{}));
        out.push_back(std::move(c));
      }
    }
    if (!j.contains("nextPageToken") || !j["nextPageToken"].is_string()) break;
    page_token = j["nextPageToken"].get<std::string>();
  }
  return out;
}

}  // namespace senti::ingest
