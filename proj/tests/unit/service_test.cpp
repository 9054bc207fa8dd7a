/* Copyright 2026 The PeerHOL Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <atomic>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"
#include "peerhol/service.hpp"

namespace peerhol {
namespace {

using nlohmann::json;
using testing::make_engine;

ApiOptions fast_options(std::shared_ptr<std::int64_t> clock = nullptr) {
  ApiOptions o;
  o.pwhash_ops = 1;
  o.pwhash_mem = 8192;
  if (clock) o.clock = [clock] { return *clock; };
  return o;
}

struct Client {
  Api& api;
  std::string token;

  HttpResponse call(const std::string& method, const std::string& path, const json& body = nullptr,
                    std::map<std::string, std::string> query = {}) {
    HttpRequest r;
    r.method = method;
    r.path = path;
    r.query = std::move(query);
    if (!token.empty()) r.headers["authorization"] = "Bearer " + token;
    if (!body.is_null()) r.body = body.dump();
    return api.handle(r);
  }
  json call_json(const std::string& method, const std::string& path, const json& body = nullptr) {
    return json::parse(call(method, path, body).body);
  }
};

std::string signup(Api& api, const std::string& login) {
  Client c{api, ""};
  REQUIRE(c.call("POST", "/api/user", {{"login", login}, {"password", "pw-" + login}}).status ==
          201);
  const auto r = c.call("POST", "/api/login", {{"login", login}, {"password", "pw-" + login}});
  REQUIRE(r.status == 200);
  return json::parse(r.body).at("token").get<std::string>();
}

// "key:index" to "key/index"
std::string split_ref(std::string ref) {
  ref[ref.rfind(':')] = '/';
  return ref;
}

// Substitutes placeholders with sample values.
std::string concrete(const std::string& pattern) {
  std::string out = pattern;
  for (const auto& [k, v] : std::vector<std::pair<std::string, std::string>>{
           {"{key}", "k0"}, {"{index}", "0"}, {"{owner}", "alice"},
           {"{name}", "notes"}, {"{version}", "1"}}) {
    if (auto p = out.find(k); p != std::string::npos) out.replace(p, k.size(), v);
  }
  return out;
}

TEST_CASE("service: users and login") {
  auto engine = make_engine();
  Api api(*engine, fast_options());
  Client anon{api, ""};

  SUBCASE("registration rules") {
    CHECK(anon.call("POST", "/api/user", {{"login", "alice"}, {"password", "x"}}).status == 201);
    CHECK(anon.call("POST", "/api/user", {{"login", "alice"}, {"password", "y"}}).status == 409);
    CHECK(anon.call("POST", "/api/user", {{"login", "system"}, {"password", "y"}}).status == 422);
    CHECK(anon.call("POST", "/api/user", {{"login", "9lives"}, {"password", "y"}}).status == 422);
    CHECK(anon.call("POST", "/api/user", {{"login", "bob"}, {"password", ""}}).status == 422);
    CHECK(anon.call("POST", "/api/user", {{"login", "bob"}}).status == 422);
    CHECK(anon.call("POST", "/api/user", {{"login", 3}, {"password", "y"}}).status == 422);
  }
  SUBCASE("wrong password and unknown user look alike") {
    signup(api, "alice");
    const auto a = anon.call("POST", "/api/login", {{"login", "alice"}, {"password", "nope"}});
    const auto b = anon.call("POST", "/api/login", {{"login", "zed"}, {"password", "nope"}});
    CHECK(a.status == 401);
    CHECK(b.status == 401);
    CHECK(a.body == b.body);
  }
  SUBCASE("a second login joins the open session") {
    const std::string t1 = signup(api, "alice");
    const auto r = anon.call("POST", "/api/login", {{"login", "alice"}, {"password", "pw-alice"}});
    CHECK(json::parse(r.body).at("token") == t1);
    CHECK(t1.size() == 32);
  }
  SUBCASE("logout invalidates the token") {
    Client c{api, signup(api, "alice")};
    CHECK(c.call("GET", "/api/chronicles").status == 200);
    CHECK(c.call("POST", "/api/logout").status == 200);
    CHECK(c.call("GET", "/api/chronicles").status == 401);
    // a fresh login gets a new token
    const auto r = anon.call("POST", "/api/login", {{"login", "alice"}, {"password", "pw-alice"}});
    CHECK(json::parse(r.body).at("token") != c.token);
  }
}

TEST_CASE("service: idle sessions expire") {
  auto engine = make_engine();
  auto clock = std::make_shared<std::int64_t>(1'000'000);
  ApiOptions o = fast_options(clock);
  o.session_idle_ms = 1000;
  Api api(*engine, o);
  Client c{api, signup(api, "alice")};
  *clock += 900;
  CHECK(c.call("GET", "/api/chronicles").status == 200);
  *clock += 900;  // idle time counts from the last request
  CHECK(c.call("GET", "/api/chronicles").status == 200);
  *clock += 1001;
  CHECK(c.call("GET", "/api/chronicles").status == 401);
}

TEST_CASE("service: users and sessions survive a restart") {
  std::string image;
  std::string token;
  {
    auto engine = make_engine();
    Api api(*engine, fast_options());
    token = signup(api, "alice");
    image = engine->store().image();
  }
  auto engine = make_engine(std::make_unique<MemoryBackend>(image));
  Api api(*engine, fast_options());
  Client c{api, token};
  CHECK(c.call("GET", "/api/chronicles").status == 200);
  CHECK(c.call("POST", "/api/logout").status == 200);
  auto engine2 = make_engine(std::make_unique<MemoryBackend>(engine->store().image()));
  Api api2(*engine2, fast_options());
  Client c2{api2, token};
  CHECK(c2.call("GET", "/api/chronicles").status == 401);
  Client anon{api2, ""};
  CHECK(anon.call("POST", "/api/login", {{"login", "alice"}, {"password", "pw-alice"}}).status ==
        200);
}

TEST_CASE("service: route audit") {
  auto engine = make_engine();
  Api api(*engine, fast_options());
  Client c{api, signup(api, "alice")};
  REQUIRE(c.call("POST", "/api/execute", {{"script", "let x = 1"}, {"chronicle", "notes"}})
              .status == 200);
  const std::string digest = engine->store().digest();

  SUBCASE("every authenticated route answers 401 without a valid token") {
    for (const auto& r : Api::routes()) {
      if (!r.authenticated) continue;
      for (const std::string& tok : std::vector<std::string>{"", "deadbeef", c.token + "0"}) {
        Client bad{api, tok};
        CAPTURE(r.pattern);
        CHECK(bad.call(r.method, concrete(r.pattern), r.method == "POST" ? json::object() : json())
                  .status == 401);
      }
    }
    CHECK(engine->store().digest() == digest);
  }
  SUBCASE("only scripts reach the engine") {
    // Payloads that would hand the server a ready-made object.
    const std::vector<json> forged = {
        {{"script", "let y = 2"}, {"theorem", "⊢ false"}},
        {{"script", "let y = 2"}, {"context", {{"ref", "k0:0"}}}},
        {{"script", "let y = 2"}, {"version", {{"owner", "alice"}, {"name", "notes"}}}},
        {{"script", "let y = 2"}, {"user", "system"}},
        {{"theorem", "⊢ false"}},
    };
    for (const auto& body : forged) {
      CAPTURE(body.dump());
      CHECK(c.call("POST", "/api/execute", body).status == 422);
    }
    for (const auto& r : Api::routes()) {
      if (r.method != "POST") continue;
      CAPTURE(r.pattern);
      CHECK(c.call("POST", r.pattern, {{"proposition", "false"}}).status == 422);
    }
    for (const auto& r : Api::routes()) {
      if (r.method != "GET") continue;
      CHECK(c.call("GET", concrete(r.pattern), {{"proposition", "false"}}).status == 422);
    }
    CHECK(engine->store().digest() == digest);
  }
  SUBCASE("malformed bodies and unknown routes") {
    HttpRequest r{"POST", "/api/execute", {}, {{"authorization", "Bearer " + c.token}}, "{"};
    CHECK(api.handle(r).status == 400);
    r.body = "[1]";
    CHECK(api.handle(r).status == 400);
    CHECK(c.call("GET", "/api/nowhere").status == 404);
    CHECK(c.call("DELETE", "/api/execute").status == 405);
    CHECK(c.call("GET", "/api/execute").status == 405);
    CHECK(engine->store().digest() == digest);
  }
  SUBCASE("publishing into another user's chronicle is refused") {
    CHECK(c.call("POST", "/api/execute", {{"script", "let y = 2"}, {"chronicle", "bob:notes"}})
              .status == 403);
    CHECK(c.call("POST", "/api/execute", {{"script", "let y = 2"}, {"chronicle", "no way"}})
              .status == 422);
  }
}

TEST_CASE("service: execute") {
  auto engine = make_engine();
  Api api(*engine, fast_options());
  Client c{api, signup(api, "alice")};
  const std::string impl = "fix \"x : prop\"\nassume a = \"x\"\nhave b = \"x\" by a\n";

  SUBCASE("reports bindings, contexts and the result") {
    const json r = c.call_json("POST", "/api/execute", {{"script", impl + "b"}});
    CHECK(r.at("ok") == true);
    CHECK(r.at("error").is_null());
    CHECK(r.at("created").size() == 3);
    CHECK(r.at("result").at("type") == "theorem");
    CHECK(r.at("result").at("value") == "⊢ x");
    CHECK(r.at("published").is_null());
  }
  SUBCASE("ascii output") {
    const auto r = c.call("POST", "/api/execute", {{"script", "'∀ x : prop. x ⟶ x'"}},
                          {{"ascii", "1"}});
    CHECK(json::parse(r.body).at("result").at("value") == "'_all x : prop. x --> x'");
  }
  SUBCASE("script errors carry kind and position") {
    const auto r = c.call("POST", "/api/execute", {{"script", "let a = 1\nlet b = nope"}});
    CHECK(r.status == 422);
    const json e = json::parse(r.body).at("error");
    CHECK(e.at("kind") == "NameError");
    CHECK(e.at("line") == 2);
    CHECK(e.at("column") == 9);
  }
  SUBCASE("publish, read back, assignment") {
    json r = c.call_json("POST", "/api/execute", {{"script", "let v = 1"}, {"chronicle", "lib"}});
    CHECK(r.at("published") == json{{"owner", "alice"}, {"name", "lib"}, {"version", 1}});
    r = c.call_json("POST", "/api/execute", {{"script", "let v = 2"}, {"chronicle", "lib"}});
    CHECK(r.at("published").at("version") == 2);
    r = c.call_json("POST", "/api/execute",
                    {{"script", "val l = @lib\nl.v"}, {"assignment", {{"alice:lib", 1}}}});
    CHECK(r.at("result").at("value") == "1");
    r = c.call_json("POST", "/api/execute", {{"script", "val l = @lib\nl.v"}});
    CHECK(r.at("result").at("value") == "2");
    CHECK(c.call("POST", "/api/execute", {{"script", "1"}, {"assignment", {{"alice:lib", 0}}}})
              .status == 422);
    CHECK(c.call("POST", "/api/execute", {{"script", "1"}, {"assignment", {{"lib", 1}}}})
              .status == 422);

    const json list = c.call_json("GET", "/api/chronicles");
    bool seen = false;
    for (const auto& ch : list.at("chronicles")) {
      if (ch.at("name") == "lib") {
        seen = true;
        CHECK(ch.at("newest") == 2);
        CHECK(ch.at("up_to_date") == true);
      }
    }
    CHECK(seen);
    const json doc = c.call_json("GET", "/api/chronicle/alice/lib");
    REQUIRE(doc.at("versions").size() == 2);
    CHECK(doc.at("versions")[0].at("version") == 2);
    CHECK(!doc.at("versions")[0].contains("script"));
    const json v1 = c.call_json("GET", "/api/chronicle/alice/lib/1");
    CHECK(v1.at("script") == "let v = 1");
    CHECK(v1.at("dependencies").size() == 1);  // the root theory
    CHECK(c.call("GET", "/api/chronicle/alice/lib/3").status == 404);
    CHECK(c.call("GET", "/api/chronicle/alice/lib/x").status == 404);
    CHECK(c.call("GET", "/api/chronicle/alice/none").status == 404);

    const json ctx = c.call_json("GET", "/api/context/" +
                                            split_ref(v1.at("final_context").get<std::string>()));
    CHECK(ctx.at("owner") == "alice");
    CHECK(ctx.at("chronicle_version").at("version") == 1);
    CHECK(ctx.at("bindings")[0].at("name") == "v");
  }
  SUBCASE("context documents") {
    const json r = c.call_json("POST", "/api/execute", {{"script", impl}});
    const std::string fix_ref = r.at("created")[0];
    const json fix = c.call_json("GET", "/api/context/" + split_ref(fix_ref));
    CHECK(fix.at("kind") == "fix");
    CHECK(fix.at("constants") == json::array({{{"name", "x"}, {"type", "prop"}}}));
    CHECK(fix.at("chronicle_version").is_null());
    const json assume = c.call_json("GET", "/api/context/" + split_ref(r.at("created")[1]));
    CHECK(assume.at("assumptions") == json::array({"x"}));
    CHECK(assume.at("parent") == fix_ref);
    CHECK(assume.at("depth") == fix.at("depth").get<int>() + 1);
    CHECK(c.call("GET", "/api/context/nokey/0").status == 404);
    CHECK(c.call("GET", "/api/context/k0/99999").status == 404);
  }
  SUBCASE("repair") {
    const json r = c.call_json("POST", "/api/repair");
    CHECK(r.at("regenerated").empty());
    CHECK(r.at("failed").empty());
  }
}

TEST_CASE("service: rendered reports read the same as text") {
  auto engine = make_engine();
  ExecuteReport r = testing::run(*engine, "let a = 2\nprint (a + 1)\na");
  std::string text = format_report_text(render_report_json(r, engine->tree(), PrintMode::kUnicode));
  CHECK(text == "3\na : integer = 2\nresult : integer = 2\ncreated 1 context(s), final " +
                    r.final_context->to_string() + "\n");
  r = testing::run(*engine, "let a = 2\nprint (a + 1)\nlet b = nope");
  text = format_report_text(render_report_json(r, engine->tree(), PrintMode::kUnicode));
  CHECK(text ==
        "3\ncreated 1 context(s), final -\nerror NameError at 3:9: unknown identifier 'nope'\n");
}

TEST_CASE("service: config") {
  setenv("PEERHOL_PORT", "9123", 1);
  const ServiceConfig c = ServiceConfig::load(std::nullopt);
  CHECK(c.port == 9123);
  CHECK(c.host == "127.0.0.1");
  setenv("PEERHOL_PORT", "x", 1);
  CHECK_THROWS_AS(ServiceConfig::load(std::nullopt), Error);
  unsetenv("PEERHOL_PORT");
  CHECK_THROWS_AS(ServiceConfig::load(std::string("/nonexistent/peerhol.json")), Error);
}

TEST_CASE("service: live HTTP") {
  auto engine = make_engine();
  Api api(*engine, fast_options());
  HttpServer server(api);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread th([&] { server.listen(); });

  httplib::Client cli("127.0.0.1", port);
  cli.set_connection_timeout(5);
  auto res = cli.Post("/api/user", R"({"login":"alice","password":"pw"})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 201);
  res = cli.Post("/api/login", R"({"login":"alice","password":"pw"})", "application/json");
  REQUIRE(res);
  const std::string token = json::parse(res->body).at("token");
  CHECK(cli.Get("/api/chronicles")->status == 401);
  httplib::Headers auth{{"Authorization", "Bearer " + token}};
  res = cli.Post("/api/execute?ascii=1", auth, R"({"script":"'∀ p : prop. p ⟶ p'"})",
                 "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body).at("result").at("value") == "'_all p : prop. p --> p'");
  CHECK(res->get_header_value("Content-Type") == "application/json");
  res = cli.Get("/api/chronicle/system/root", auth);
  REQUIRE(res);
  CHECK(res->status == 200);

  server.stop();
  th.join();
}

}  // namespace
}  // namespace peerhol
