// Copyright 2026 The SchemaForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "schemaforge/gateway.hpp"
#include "schemaforge/json.hpp"

namespace sf = schemaforge;
using sf::ChatMessage;
using sf::Role;

namespace {

constexpr const char* kSecret = "sk-test-0123456789abcdef";

std::string chat_reply(std::string_view content) {
  return sf::serialize_json(sf::DataNode(sf::ObjectMap{
      {"choices", sf::DataNode(sf::DataNode::Array{sf::DataNode(sf::ObjectMap{
                      {"message", sf::DataNode(sf::ObjectMap{{"role", sf::DataNode("assistant")},
                                                             {"content", sf::DataNode(std::string(content))}})}})})}}));
}

// Local chat-completion endpoint whose behaviour is scripted per test.
class FakeEndpoint {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit FakeEndpoint(Handler handler) {
    server_.Post("/v1/chat/completions", [this, handler](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      {
        std::lock_guard lock(mutex_);
        last_body_ = req.body;
        last_auth_ = req.get_header_value("Authorization");
      }
      handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }

  sf::GatewayConfig config() const {
    sf::GatewayConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    cfg.api_key = kSecret;
    cfg.backoff_base = std::chrono::milliseconds(1);
    cfg.timeout_seconds = 5;
    return cfg;
  }
  int hits() const { return hits_.load(); }
  std::string last_body() {
    std::lock_guard lock(mutex_);
    return last_body_;
  }
  std::string last_auth() {
    std::lock_guard lock(mutex_);
    return last_auth_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::mutex mutex_;
  std::string last_body_;
  std::string last_auth_;
};

const std::vector<ChatMessage> kMessages = {{Role::System, "be terse"}, {Role::User, "hello"}};

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    if (value != nullptr) {
      ::setenv(name, value, 1);
    } else {
      ::unsetenv(name);
    }
  }
  ~ScopedEnv() {
    if (old_) {
      ::setenv(name_, old_->c_str(), 1);
    } else {
      ::unsetenv(name_);
    }
  }

 private:
  const char* name_;
  std::optional<std::string> old_;
};

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / (name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Gateway, SendsOpenAiWireFormat) {
  FakeEndpoint endpoint([](const httplib::Request&, httplib::Response& res) {
    res.set_content(chat_reply("{\"type\":\"object\"}"), "application/json");
  });
  sf::HttpTransport transport;
  auto cfg = endpoint.config();
  cfg.temperature = *sf::Decimal::parse("0.2");
  EXPECT_EQ(sf::complete(transport, cfg, kMessages), "{\"type\":\"object\"}");
  EXPECT_EQ(endpoint.last_auth(), std::string("Bearer ") + kSecret);
  const sf::DataNode body = sf::parse_json(endpoint.last_body());
  EXPECT_EQ(body.get("model")->as_string(), "gpt-4o-mini");
  EXPECT_EQ(body.get("temperature")->as_number(), *sf::Decimal::parse("0.2"));
  EXPECT_EQ(*body.get("messages"), sf::parse_json(R"([{"role":"system","content":"be terse"},{"role":"user","content":"hello"}])"));
  EXPECT_EQ(body, sf::request_body(cfg, kMessages));
}

TEST(Gateway, AuthFailureRedactsKey) {
  FakeEndpoint endpoint([](const httplib::Request& req, httplib::Response& res) {
    // Real providers echo a fragment of the presented key; this one echoes all of it.
    res.status = 401;
    res.set_content(R"({"error":{"message":"Incorrect API key provided: )" + req.get_header_value("Authorization") + "\"}}",
                    "application/json");
  });
  sf::HttpTransport transport;
  std::vector<std::string> log;
  try {
    sf::complete(transport, endpoint.config(), kMessages, [&](std::string_view line) { log.emplace_back(line); });
    FAIL() << "expected an auth error";
  } catch (const sf::AuthError& e) {
    const std::string message = e.what();
    EXPECT_EQ(message.find(kSecret), std::string::npos) << message;
    EXPECT_NE(message.find("[redacted]"), std::string::npos) << message;
    EXPECT_NE(message.find("401"), std::string::npos);
  }
  EXPECT_EQ(endpoint.hits(), 1);
  for (const auto& line : log) EXPECT_EQ(line.find(kSecret), std::string::npos) << line;
}

TEST(Gateway, RetriesRateLimitsWithBackoff) {
  std::atomic<int> calls{0};
  FakeEndpoint endpoint([&](const httplib::Request&, httplib::Response& res) {
    if (++calls <= 2) {
      res.status = 429;
      res.set_content(R"({"error":{"message":"slow down"}})", "application/json");
    } else {
      res.set_content(chat_reply("ok"), "application/json");
    }
  });
  sf::HttpTransport transport;
  auto cfg = endpoint.config();
  cfg.max_retries = 2;
  std::vector<std::string> log;
  EXPECT_EQ(sf::complete(transport, cfg, kMessages, [&](std::string_view line) { log.emplace_back(line); }), "ok");
  EXPECT_EQ(endpoint.hits(), 3);
  EXPECT_FALSE(log.empty());
}

TEST(Gateway, GivesUpAfterMaxRetries) {
  FakeEndpoint endpoint([](const httplib::Request&, httplib::Response& res) {
    res.status = 429;
    res.set_content("{}", "application/json");
  });
  sf::HttpTransport transport;
  auto cfg = endpoint.config();
  cfg.max_retries = 1;
  EXPECT_THROW(sf::complete(transport, cfg, kMessages), sf::RateLimitError);
  EXPECT_EQ(endpoint.hits(), 2);
}

TEST(Gateway, ServerErrorsAndMalformedBodies) {
  int mode = 0;
  FakeEndpoint endpoint([&](const httplib::Request&, httplib::Response& res) {
    switch (mode) {
      case 0: res.status = 500; res.set_content("boom", "text/plain"); break;
      case 1: res.set_content("not json", "text/plain"); break;
      case 2: res.set_content(R"({"choices":[]})", "application/json"); break;
      default: res.set_content(R"({"choices":[{"message":{"content":7}}]})", "application/json"); break;
    }
  });
  sf::HttpTransport transport;
  mode = 0;
  try {
    sf::complete(transport, endpoint.config(), kMessages);
    FAIL();
  } catch (const sf::AuthError&) {
    FAIL() << "wrong class";
  } catch (const sf::RateLimitError&) {
    FAIL() << "wrong class";
  } catch (const sf::GatewayError& e) {
    EXPECT_NE(std::string(e.what()).find("500"), std::string::npos);
  }
  EXPECT_EQ(endpoint.hits(), 1);  // no retry on server errors
  for (mode = 1; mode <= 3; ++mode) {
    EXPECT_THROW(sf::complete(transport, endpoint.config(), kMessages), sf::MalformedResponseError) << mode;
  }
}

TEST(Gateway, TimesOut) {
  FakeEndpoint endpoint([](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1500));
    res.set_content(chat_reply("late"), "application/json");
  });
  sf::HttpTransport transport;
  auto cfg = endpoint.config();
  cfg.timeout_seconds = 0.3;
  EXPECT_THROW(sf::complete(transport, cfg, kMessages), sf::TimeoutError);
}

TEST(Gateway, UnreachableEndpointIsGatewayError) {
  sf::GatewayConfig cfg;
  cfg.base_url = "http://127.0.0.1:1/v1";
  cfg.api_key = kSecret;
  cfg.timeout_seconds = 2;
  sf::HttpTransport transport;
  try {
    sf::complete(transport, cfg, kMessages);
    FAIL();
  } catch (const sf::GatewayError& e) {
    EXPECT_EQ(std::string(e.what()).find(kSecret), std::string::npos);
  }
}

TEST(Gateway, PreconditionsAreChecked) {
  sf::ReplayTransport transport({});
  sf::GatewayConfig cfg;
  EXPECT_THROW(sf::complete(transport, cfg, {}), sf::PreconditionError);
  EXPECT_THROW(sf::complete(transport, cfg, {{Role::User, ""}}), sf::PreconditionError);
  cfg.base_url = "ftp://x";
  EXPECT_THROW(cfg.check(), sf::PreconditionError);
  cfg = {};
  cfg.temperature = sf::Decimal(3);
  EXPECT_THROW(cfg.check(), sf::PreconditionError);
  cfg = {};
  cfg.max_retries = -1;
  EXPECT_THROW(cfg.check(), sf::PreconditionError);
  EXPECT_NO_THROW(sf::GatewayConfig{}.check());
  EXPECT_EQ(sf::GatewayConfig{}.temperature, sf::Decimal(0));
}

TEST(Gateway, RedactReplacesEveryOccurrence) {
  EXPECT_EQ(sf::redact("a KEY b KEYKEY", "KEY"), "a [redacted] b [redacted][redacted]");
  EXPECT_EQ(sf::redact("nothing", ""), "nothing");
  EXPECT_EQ(sf::role_name(Role::Assistant), "assistant");
  EXPECT_EQ(sf::parse_role("system"), Role::System);
  EXPECT_FALSE(sf::parse_role("tool"));
}

TEST(Gateway, DigestIsSha256OfCompactBody) {
  sf::GatewayConfig cfg;
  const std::string body = sf::serialize_json(sf::request_body(cfg, kMessages));
  EXPECT_EQ(body, R"({"model":"gpt-4o-mini","temperature":0,"messages":[{"role":"system","content":"be terse"},{"role":"user","content":"hello"}]})");
  const std::string digest = sf::request_digest(cfg, kMessages);
  ASSERT_EQ(digest.size(), 64u);
  // Independent hash of the same bytes.
  if (std::system("python3 -c 'import hashlib' >/dev/null 2>&1") == 0) {
    const auto dir = temp_dir("sf_digest");
    std::ofstream(dir / "body.txt", std::ios::binary) << body;
    const std::string command = "python3 -c \"import hashlib,sys; print(hashlib.sha256(open(sys.argv[1],'rb').read()).hexdigest())\" " +
                                (dir / "body.txt").string() + " > " + (dir / "out.txt").string();
    ASSERT_EQ(std::system(command.c_str()), 0);
    std::ifstream in(dir / "out.txt");
    std::string expected;
    in >> expected;
    EXPECT_EQ(digest, expected);
    std::filesystem::remove_all(dir);
  }
  // The key never influences the digest; model, temperature and messages do.
  auto keyed = cfg;
  keyed.api_key = kSecret;
  EXPECT_EQ(sf::request_digest(keyed, kMessages), digest);
  auto warm = cfg;
  warm.temperature = sf::Decimal(1);
  EXPECT_NE(sf::request_digest(warm, kMessages), digest);
  EXPECT_NE(sf::request_digest(cfg, {{Role::User, "hello"}}), digest);
  EXPECT_EQ(sf::serialize_json(sf::request_body(keyed, kMessages)).find(kSecret), std::string::npos);
}

TEST(Replay, AnswersKnownDigestsAndNamesUnknownOnes) {
  sf::GatewayConfig cfg;
  const std::string digest = sf::request_digest(cfg, kMessages);
  sf::ReplayTransport replay({{digest, "fixture text"}});
  EXPECT_EQ(sf::complete(replay, cfg, kMessages), "fixture text");
  try {
    sf::complete(replay, cfg, {{Role::User, "other"}});
    FAIL();
  } catch (const sf::NoFixtureError& e) {
    EXPECT_EQ(e.digest(), sf::request_digest(cfg, {{Role::User, "other"}}));
    EXPECT_NE(std::string(e.what()).find(e.digest() + ".txt"), std::string::npos);
  }
}

TEST(Replay, RecordingPersistsThenReplays) {
  FakeEndpoint endpoint([](const httplib::Request&, httplib::Response& res) {
    res.set_content(chat_reply("recorded answer"), "application/json");
  });
  const auto dir = temp_dir("sf_record");
  const auto cfg = endpoint.config();
  sf::RecordingTransport recorder(std::make_shared<sf::HttpTransport>(), dir);
  EXPECT_EQ(sf::complete(recorder, cfg, kMessages), "recorded answer");
  const auto fixture = dir / (sf::request_digest(cfg, kMessages) + ".txt");
  ASSERT_TRUE(std::filesystem::exists(fixture));
  auto replay = sf::ReplayTransport::from_directory(dir);
  EXPECT_EQ(replay.size(), 1u);
  EXPECT_EQ(sf::complete(replay, cfg, kMessages), "recorded answer");
  EXPECT_EQ(endpoint.hits(), 1);
  std::ifstream in(fixture);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text.find(kSecret), std::string::npos);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(sf::ReplayTransport::from_directory(dir), sf::PreconditionError);
}

TEST(Config, FileThenEnvironmentOverride) {
  const auto dir = temp_dir("sf_config");
  std::ofstream(dir / "gw.json") << R"({"base_url":"http://localhost:9/v1","model":"m","api_key":"from-file",
                                        "timeout":7,"max_retries":1,"temperature":0.5})";
  {
    ScopedEnv env(std::string(sf::kApiKeyEnv).c_str(), nullptr);
    const auto cfg = sf::load_gateway_config(dir / "gw.json");
    EXPECT_EQ(cfg.base_url, "http://localhost:9/v1");
    EXPECT_EQ(cfg.model, "m");
    EXPECT_EQ(cfg.api_key, "from-file");
    EXPECT_EQ(cfg.timeout_seconds, 7);
    EXPECT_EQ(cfg.max_retries, 1);
    EXPECT_EQ(cfg.temperature, *sf::Decimal::parse("0.5"));
  }
  {
    ScopedEnv env(std::string(sf::kApiKeyEnv).c_str(), "from-env");
    EXPECT_EQ(sf::load_gateway_config(dir / "gw.json").api_key, "from-env");
    EXPECT_EQ(sf::load_gateway_config().api_key, "from-env");
  }
  std::ofstream(dir / "bad.json") << R"({"model": 3})";
  EXPECT_THROW(sf::load_gateway_config(dir / "bad.json"), sf::PreconditionError);
  std::filesystem::remove_all(dir);
}

TEST(Gateway, ConcurrentCallsShareOneTransport) {
  FakeEndpoint endpoint([](const httplib::Request& req, httplib::Response& res) {
    const auto body = sf::parse_json(req.body);
    res.set_content(chat_reply(body.get("messages")->as_array().back().get("content")->as_string()), "application/json");
  });
  sf::HttpTransport transport;
  const auto cfg = endpoint.config();
  std::vector<std::thread> threads;
  std::atomic<int> wrong{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      const std::string text = "msg" + std::to_string(t);
      if (sf::complete(transport, cfg, {{Role::User, text}}) != text) ++wrong;
    });
  }
  for (auto& thread : threads) thread.join();
  EXPECT_EQ(wrong.load(), 0);
}
