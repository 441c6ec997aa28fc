#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "senti/fetch.hpp"

using namespace senti;
using namespace senti::ingest;

namespace {

// Local stand-in for the commentThreads endpoint: two pages of three
// comments, keyed by pageToken.
class MockApi {
 public:
  MockApi() {
    server_.Get("/youtube/v3/commentThreads", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      last_key_ = req.get_param_value("key");
      if (last_key_ == "bad") {
        res.status = 401;
        res.set_content(R"({"error":{"code":401,"errors":[{"reason":"authError"}]}})", "application/json");
        return;
      }
      if (last_key_ == "quota") {
        res.status = 403;
        res.set_content(R"({"error":{"code":403,"errors":[{"reason":"quotaExceeded"}]}})", "application/json");
        return;
      }
      if (last_key_ == "flaky" && flaky_failures_ > 0) {
        --flaky_failures_;
        res.status = 503;
        return;
      }
      if (req.get_param_value("videoId") == "missing") {
        res.status = 404;
        res.set_content(R"({"error":{"code":404,"errors":[{"reason":"videoNotFound"}]}})", "application/json");
        return;
      }
      const bool second = req.get_param_value("pageToken") == "P2";
      nlohmann::json body;
      body["items"] = nlohmann::json::array();
      for (int i = 0; i < 3; ++i) {
        const auto id = std::string(second ? "b" : "a") + std::to_string(i);
        body["items"].push_back(
            {{"id", id},
             {"snippet", {{"topLevelComment", {{"snippet", {{"textOriginal", "komentar " + id}}}}}}}});
      }
      if (!second) body["nextPageToken"] = "P2";
      res.set_content(body.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockApi() {
    server_.stop();
    thread_.join();
  }

  FetchOptions options() const {
    FetchOptions o;
    o.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/youtube/v3/commentThreads";
    o.retry_backoff = std::chrono::milliseconds(1);
    o.timeout = std::chrono::seconds(5);
    return o;
  }
  int requests() const { return requests_; }
  void fail_next(int n) { flaky_failures_ = n; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_{0};
  std::atomic<int> flaky_failures_{0};
  std::string last_key_;
};

}  // namespace

TEST(Fetch, FollowsPagesAndReturnsUnlabeledRecords) {
  MockApi api;
  const auto got = fetch_comments("vid1", "good", 5, api.options());
  ASSERT_EQ(got.size(), 6u);
  EXPECT_EQ(got[0].id, "a0");
  EXPECT_EQ(got[5].id, "b2");
  EXPECT_EQ(got[3].text, "komentar b0");
  for (const auto& c : got) {
    EXPECT_EQ(c.label, Label::Unlabeled);
    EXPECT_EQ(c.source, "vid1");
  }
  EXPECT_EQ(api.requests(), 2);
}

TEST(Fetch, MaxPagesLimitsRequests) {
  MockApi api;
  EXPECT_EQ(fetch_comments("vid1", "good", 1, api.options()).size(), 3u);
  EXPECT_EQ(api.requests(), 1);
}

TEST(Fetch, ZeroPagesMakesNoRequest) {
  MockApi api;
  EXPECT_TRUE(fetch_comments("vid1", "good", 0, api.options()).empty());
  EXPECT_EQ(api.requests(), 0);
}

TEST(Fetch, AuthFailureIsNotRetried) {
  MockApi api;
  try {
    fetch_comments("vid1", "bad", 2, api.options());
    FAIL() << "expected FetchError";
  } catch (const FetchError& e) {
    EXPECT_EQ(e.kind(), FetchErrorKind::Auth);
    EXPECT_EQ(std::string(e.what()).find("bad"), std::string::npos) << "message must not echo the key";
  }
  EXPECT_EQ(api.requests(), 1);
}

TEST(Fetch, QuotaAndNotFoundAreClassified) {
  MockApi api;
  try {
    fetch_comments("vid1", "quota", 1, api.options());
    FAIL();
  } catch (const FetchError& e) {
    EXPECT_EQ(e.kind(), FetchErrorKind::Quota);
  }
  try {
    fetch_comments("missing", "good", 1, api.options());
    FAIL();
  } catch (const FetchError& e) {
    EXPECT_EQ(e.kind(), FetchErrorKind::NotFound);
  }
}

TEST(Fetch, RetriesTransientFailures) {
  MockApi api;
  api.fail_next(2);
  EXPECT_EQ(fetch_comments("vid1", "flaky", 1, api.options()).size(), 3u);
  EXPECT_EQ(api.requests(), 3);
}

TEST(Fetch, GivesUpAfterMaxRetries) {
  MockApi api;
  api.fail_next(10);
  auto opt = api.options();
  opt.max_retries = 1;
  try {
    fetch_comments("vid1", "flaky", 1, opt);
    FAIL();
  } catch (const FetchError& e) {
    EXPECT_TRUE(e.retryable());
  }
  EXPECT_EQ(api.requests(), 2);
}

TEST(Fetch, UnreachableHostIsExternalError) {
  FetchOptions o;
  o.base_url = "http://127.0.0.1:1/x";
  o.max_retries = 0;
  o.timeout = std::chrono::seconds(2);
  EXPECT_THROW(fetch_comments("vid1", "good", 1, o), ExternalError);
}

TEST(Fetch, RejectsBadArguments) {
  EXPECT_THROW(fetch_comments("vid", "", 1), FetchError);
  EXPECT_THROW(fetch_comments("", "k", 1), InputError);
  EXPECT_THROW(fetch_comments("vid", "k", -1), InputError);
}
