#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <atomic>
#include <cstdlib>
#include <thread>

#include "byos/error.hpp"
#include "byos/llm/cassette.hpp"
#include "byos/llm/client.hpp"
#include "byos/llm/live_client.hpp"
#include "byos/llm/prompt_template.hpp"
#include "byos/llm/response_lines.hpp"
#include "byos/llm/usage_ledger.hpp"
#include "byos/odkg/hashing.hpp"
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "scripted_client.hpp"
#include "temp_dir.hpp"

using namespace byos;
using namespace byos::llm;
using byos::testing::ScriptedClient;
using byos::testing::TempDir;

namespace {

/// OpenAI-style completion endpoint on a loopback port.
class FakeEndpoint {
 public:
  explicit FakeEndpoint(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/v1/chat/completions", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::string completion_body(const std::string& text, int prompt_tokens, int completion_tokens) {
  nlohmann::json j = {{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}},
                      {"usage", {{"prompt_tokens", prompt_tokens}, {"completion_tokens", completion_tokens}}}};
  return j.dump();
}

LiveClientConfig fast_config(const std::string& base_url) {
  LiveClientConfig c;
  c.base_url = base_url;
  c.model = "test-model";
  c.api_key = "secret";
  c.timeout = std::chrono::seconds(5);
  c.initial_backoff = std::chrono::milliseconds(5);
  return c;
}

}  // namespace

TEST_CASE("ledger sums reported usage and counts every call") {
  UsageLedger ledger;
  record_usage(ledger, {100, 20}, "bool");
  record_usage(ledger, {50, 5}, "bool");
  record_usage(ledger, {0, 0}, "menu");
  CHECK(ledger.prompt_tokens == 150);
  CHECK(ledger.completion_tokens == 25);
  CHECK(ledger.api_calls == 3);
  CHECK(ledger.calls_of("bool") == 2);
  CHECK(ledger.calls_of("menu") == 1);
  CHECK(ledger.calls_of("value") == 0);
  CHECK(format_ledger(ledger) == "api_calls 3\nprompt_tokens 150\ncompletion_tokens 25\n");

  UsageLedger zero;
  record_usage(zero, {0, 0});
  CHECK(zero.prompt_tokens == 0);
  CHECK(zero.completion_tokens == 0);
  CHECK(zero.calls_by_kind.empty());
}

TEST_CASE("templates substitute placeholders and keep doubled braces literal") {
  CHECK(render_template("a {X} b {{Y}} {X}", {{"X", "1"}}) == "a 1 b {Y} 1");
  CHECK_THROWS_AS(render_template("{MISSING}", {}), TemplateError);
  CHECK_THROWS_AS(render_template("{lower}", {{"lower", "x"}}), TemplateError);
  CHECK_THROWS_AS(render_template("{OPEN", {}), TemplateError);
}

TEST_CASE("shipped templates render byte-stably") {
  TemplateSet set = TemplateSet::defaults();
  TemplateVars vars{{"TARGET", "t"}, {"KNOWLEDGE", "k"}, {"CONFIGS", "c"}};
  CHECK(set.render("bool", vars) == set.render("bool", vars));
  CHECK(set.render("bool", vars).find("{") == std::string::npos);
  CHECK(set.text("bool").find("{TARGET}") != std::string::npos);
  CHECK(set.text("menu").find("{DIRECTORIES}") != std::string::npos);
  CHECK_THROWS_AS(set.text("nope"), TemplateError);
  TempDir empty;
  CHECK_THROWS_AS(TemplateSet::load(empty.path()), TemplateError);
}

TEST_CASE("tuple lines tolerate bullets, numbering and missing parentheses") {
  using V = std::vector<std::string>;
  CHECK(*parse_tuple_line("(RAM-based Memory Pool | influence | I/O Reduction)") ==
        V{"RAM-based Memory Pool", "influence", "I/O Reduction"});
  CHECK(*parse_tuple_line("- ZSWAP | increase") == V{"ZSWAP", "increase"});
  CHECK(*parse_tuple_line("3. (A | \"b\" | c),") == V{"A", "b", "c"});
  CHECK_FALSE(parse_tuple_line("no separator here"));
  CHECK_FALSE(parse_tuple_line("(a | | c)"));
  CHECK(clean_answer_line("- \"ZSWAP_COMPRESSOR_LZO\".") == "ZSWAP_COMPRESSOR_LZO");
  CHECK(response_lines("  a \n\n\tb\r\n") == V{"a", "b"});
}

TEST_CASE("cassette file round-trip with first entry winning") {
  TempDir dir;
  auto path = dir / "c.jsonl";
  Cassette::append(path, {sha256_hex("p1"), "p1", "r1", {3, 1}, "bool"});
  Cassette::append(path, {sha256_hex("p2"), "p2", "multi\nline \"r2\"", {5, 2}, ""});
  Cassette::append(path, {sha256_hex("p1"), "p1", "later", {9, 9}, "bool"});
  Cassette c = Cassette::load(path);
  CHECK(c.entries().size() == 2);
  CHECK(c.find(sha256_hex("p1"))->response == "r1");
  CHECK(c.find(sha256_hex("p2"))->response == "multi\nline \"r2\"");
  CHECK(c.total_usage() == Usage{8, 3});

  TempDir other;
  other.write("bad.jsonl", "{\"prompt_hash\": \"x\"}\n");
  CHECK_THROWS_AS(Cassette::load(other / "bad.jsonl"), CorruptFile);
  CHECK_THROWS_AS(Cassette::load(other / "missing.jsonl"), FileNotFound);
}

TEST_CASE("replay returns identical text and misses are client errors") {
  Cassette c;
  c.add({sha256_hex("hello"), "hello", "world", {2, 1}, "objective"});
  ReplayClient replay(c);
  auto a = replay.complete("hello", {});
  auto b = replay.complete("hello", {});
  CHECK(a.text == "world");
  CHECK(a.text == b.text);
  CHECK(a.usage == Usage{2, 1});
  CHECK_THROWS_AS(replay.complete("hello ", {}), ClientError);
}

TEST_CASE("recording writes new prompts once and replays afterwards") {
  TempDir dir;
  auto path = dir / "rec.jsonl";
  ScriptedClient inner([](const std::string& p, const CompletionParams&) { return "echo " + p; });
  {
    RecordingClient rec(inner, path);
    CompletionParams params;
    params.kind = "menu";
    CHECK(rec.complete("one", params).text == "echo one");
    rec.complete("two", params);
    rec.complete("one", params);
  }
  {
    RecordingClient again(inner, path);
    again.complete("two", {});
    again.complete("three", {});
  }
  Cassette c = Cassette::load(path);
  CHECK(c.entries().size() == 3);
  CHECK(c.entries()[0].kind == "menu");
  ReplayClient replay = ReplayClient::from_file(path);
  CHECK(replay.complete("three", {}).text == "echo three");
  CHECK(inner.call_count() == 5);
}

TEST_CASE("metered client bounds concurrency and fills the ledger") {
  std::atomic<int> inflight{0};
  std::atomic<int> peak{0};
  ScriptedClient inner([&](const std::string&, const CompletionParams&) {
    int now = ++inflight;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --inflight;
    return std::string("a b c");
  });
  MeteredClient metered(inner, 2);
  std::vector<std::thread> threads;
  for (int t = 0; t < 6; ++t) {
    threads.emplace_back([&, t] {
      CompletionParams params;
      params.kind = t % 2 == 0 ? "bool" : "choice";
      for (int i = 0; i < 4; ++i) metered.complete("prompt words " + std::to_string(t * 10 + i), params);
    });
  }
  for (auto& t : threads) t.join();
  CHECK(peak.load() <= 2);
  UsageLedger ledger = metered.ledger();
  CHECK(ledger.api_calls == 24);
  CHECK(ledger.calls_of("bool") == 12);
  CHECK(ledger.prompt_tokens == inner.cassette().total_usage().prompt_tokens);
  CHECK(ledger.completion_tokens == 24 * 3);
  CHECK(ledger.wall_time_s > 0.0);
}

TEST_CASE("live client speaks the chat-completions schema") {
  std::string seen_auth, seen_model, seen_prompt;
  double seen_temperature = -1;
  FakeEndpoint endpoint([&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    auto body = nlohmann::json::parse(req.body);
    seen_model = body["model"];
    seen_prompt = body["messages"][0]["content"];
    seen_temperature = body["temperature"];
    res.set_content(completion_body("(ZSWAP | increase)", 12, 4), "application/json");
  });
  LiveClient client(fast_config(endpoint.base_url()));
  Completion c = client.complete("judge ZSWAP", {});
  CHECK(c.text == "(ZSWAP | increase)");
  CHECK(c.usage == Usage{12, 4});
  CHECK(seen_auth == "Bearer secret");
  CHECK(seen_model == "test-model");
  CHECK(seen_prompt == "judge ZSWAP");
  CHECK(seen_temperature == 0.0);
}

TEST_CASE("live client retries transient failures and gives up after three attempts") {
  std::atomic<int> hits{0};
  FakeEndpoint flaky([&](const httplib::Request&, httplib::Response& res) {
    if (++hits < 3) {
      res.status = 503;
      return;
    }
    res.set_content(completion_body("ok", 1, 1), "application/json");
  });
  LiveClient client(fast_config(flaky.base_url()));
  CHECK(client.complete("p", {}).text == "ok");
  CHECK(hits.load() == 3);

  std::atomic<int> down_hits{0};
  FakeEndpoint down([&](const httplib::Request&, httplib::Response& res) {
    ++down_hits;
    res.status = 500;
  });
  LiveClient failing(fast_config(down.base_url()));
  CHECK_THROWS_AS(failing.complete("p", {}), ClientError);
  CHECK(down_hits.load() == 3);

  std::atomic<int> auth_hits{0};
  FakeEndpoint unauthorized([&](const httplib::Request&, httplib::Response& res) {
    ++auth_hits;
    res.status = 401;
  });
  LiveClient refused(fast_config(unauthorized.base_url()));
  CHECK_THROWS_AS(refused.complete("p", {}), ClientError);
  CHECK(auth_hits.load() == 1);

  FakeEndpoint garbage([&](const httplib::Request&, httplib::Response& res) { res.set_content("{}", "application/json"); });
  LiveClient confused(fast_config(garbage.base_url()));
  CHECK_THROWS_AS(confused.complete("p", {}), ClientError);
}

TEST_CASE("credentials come from the environment only") {
  ::unsetenv("BYOS_API_KEY");
  ::unsetenv("BYOS_API_BASE");
  LiveClientConfig configured;
  configured.base_url = "https://example.invalid/v1";
  CHECK_THROWS_AS(live_config_from_env(configured), ConfigError);
  ::setenv("BYOS_API_KEY", "k", 1);
  CHECK(live_config_from_env(configured).api_key == "k");
  ::setenv("BYOS_API_BASE", "http://127.0.0.1:9/v1", 1);
  CHECK(live_config_from_env(configured).base_url == "http://127.0.0.1:9/v1");
  ::unsetenv("BYOS_API_KEY");
  ::unsetenv("BYOS_API_BASE");
  CHECK_THROWS_AS(LiveClient(fast_config("no-scheme")), ConfigError);
}
