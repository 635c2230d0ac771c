// Copyright 2026 The dreip Authors
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

#pragma once

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <memory>
#include <string>
#include <string_view>

#include "dreip/service/service.hpp"

namespace dreip::http {

using Json = nlohmann::ordered_json;

/// HTTP status for each reason code; the code itself travels in the body.
inline int status_for(Errc code) {
  switch (code) {
    case Errc::invalid_input:
    case Errc::parse:
    case Errc::wrong_variant:
    case Errc::invalid_parameters:
      return 400;
    case Errc::not_eligible:
      return 403;
    case Errc::not_found:
      return 404;
    case Errc::already_registered:
    case Errc::registration_closed:
    case Errc::protocol_order:
    case Errc::ordering:
    case Errc::double_vote:
    case Errc::busy:
    case Errc::incomplete_election:
      return 409;
    case Errc::bad_membership:
    case Errc::wrong_election:
      return 422;
    case Errc::configuration:
    case Errc::entropy:
    case Errc::ledger:
    case Errc::decode:
    case Errc::board_rejected:
      return 500;
  }
  return 500;
}

inline std::string error_body(std::string_view code, std::string_view message) {
  Json j;
  j["error"] = code;
  j["message"] = message;
  return j.dump();
}

inline Json credential_json(const VoterCredential& cred) {
  Json j;
  j["voter_id"] = cred.voter_id;
  j["internal_nullifier"] = to_hex(cred.internal_nullifier);
  return j;
}

inline VoterCredential parse_credential(const Json& j) {
  VoterCredential cred;
  cred.voter_id = j.at("voter_id").get<std::string>();
  Bytes raw = require_hex(j.at("internal_nullifier").get<std::string>());
  if (raw.size() != cred.internal_nullifier.size()) throw Error(Errc::parse, "internal nullifier must be 32 bytes");
  std::copy(raw.begin(), raw.end(), cred.internal_nullifier.begin());
  return cred;
}

inline bool is_loopback(const std::string& addr) {
  return addr == "127.0.0.1" || addr == "::1" || addr == "::ffff:127.0.0.1";
}

/// Routes the election API onto a local HTTP server. Request and response
/// bodies are JSON; receipts and tallies are returned as their exact wire
/// bytes so clients can byte-compare them with the board.
class ElectionHttpServer {
 public:
  /// Without an api every route answers 503 until attach() is called, so
  /// the port can be bound before the election exists.
  ElectionHttpServer() { setup(); }
  explicit ElectionHttpServer(ElectionApi& api) : api_(&api) { setup(); }

  void attach(ElectionApi& api) { api_.store(&api); }

  httplib::Server& server() { return server_; }

  /// Binds without serving. Port 0 picks a free port; the bound port is
  /// returned. Throws configuration if the address cannot be bound.
  int bind(const std::string& host, int port) {
    int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw Error(Errc::configuration, "cannot bind " + host + ":" + std::to_string(port));
    return bound;
  }

  /// Serves until stop(); call after bind().
  bool run() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  bool running() const { return server_.is_running(); }

 private:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static void reply_json(httplib::Response& res, const std::string& body, int status = 200) {
    res.status = status;
    res.set_content(body, "application/json");
  }

  // Maps every failure onto {"error", "message"} with a reason code.
  Handler guarded(Handler h) {
    return [this, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      if (api_.load() == nullptr) {
        reply_json(res, error_body("unavailable", "election not started"), 503);
        return;
      }
      try {
        h(req, res);
      } catch (const Error& e) {
        reply_json(res, error_body(to_string(e.code()), e.what()), status_for(e.code()));
      } catch (const nlohmann::json::exception& e) {
        reply_json(res, error_body("parse", e.what()), 400);
      } catch (const std::exception& e) {
        reply_json(res, error_body("internal", e.what()), 500);
      }
    };
  }

  static Json body_of(const httplib::Request& req) {
    Json j = Json::parse(req.body);
    if (!j.is_object()) throw Error(Errc::parse, "request body must be a JSON object");
    return j;
  }

  static std::uint64_t number_param(const std::string& text) {
    if (text.empty() || text.size() > 19 || text.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(Errc::parse, "expected a non-negative integer");
    }
    return std::stoull(text);
  }

  void setup() {
    // No SO_REUSEPORT: a second instance on the same port must fail to bind.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    routes();
  }

  void routes() {
    server_.Post("/register", guarded([this](const httplib::Request& req, httplib::Response& res) {
      if (!is_loopback(req.remote_addr)) throw Error(Errc::not_eligible, "registration is admin-only");
      Registration r = api().register_voter(body_of(req).at("voter_id").get<std::string>());
      Json j;
      j["credential"] = credential_json(r.credential);
      j["commitment"] = r.commitment.hex();
      reply_json(res, j.dump());
    }));

    server_.Get("/registry/root", guarded([this](const httplib::Request&, httplib::Response& res) {
      RegistryInfo info = api().registry_root();
      Json j;
      j["root"] = info.root.hex();
      j["leaf_count"] = info.leaf_count;
      j["depth"] = info.depth;
      reply_json(res, j.dump());
    }));

    server_.Get("/registry/leaves", guarded([this](const httplib::Request&, httplib::Response& res) {
      Json j;
      j["leaves"] = Json::array();
      for (const auto& leaf : api().registry_leaves()) j["leaves"].push_back(leaf.hex());
      reply_json(res, j.dump());
    }));

    server_.Post("/session", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::string token = api().open_session(body_of(req).at("proof_payload").get<std::string>());
      Json j;
      j["token"] = token;
      j["state"] = to_string(SessionState::awaiting_vote);
      reply_json(res, j.dump());
    }));

    server_.Get(R"(/session/([0-9a-f]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto state = api().session_state(req.matches[1]);
      if (!state) throw Error(Errc::not_found, "unknown session");
      Json j;
      j["state"] = to_string(*state);
      reply_json(res, j.dump());
    }));

    server_.Post(R"(/session/([0-9a-f]+)/vote)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      Json body = body_of(req);
      const auto& c = body.at("candidate");
      if (!c.is_number_unsigned()) throw Error(Errc::invalid_input, "candidate must be a positive integer");
      reply_json(res, api().cast_vote(req.matches[1], c.get<std::size_t>()));
      res.set_header("X-Session-State", to_string(SessionState::pending_decision));
    }));

    server_.Post(R"(/session/([0-9a-f]+)/decision)",
                 guarded([this](const httplib::Request& req, httplib::Response& res) {
                   DecisionResult d = api().decide(req.matches[1], body_of(req).at("choice").get<std::string>());
                   reply_json(res, d.second_part);
                   res.set_header("X-Session-State", to_string(d.session_state));
                   res.set_header("X-Board-Height", std::to_string(d.height));
                 }));

    server_.Get("/board/genesis", guarded([this](const httplib::Request&, httplib::Response& res) {
      reply_json(res, api().genesis());
    }));

    server_.Get("/board/blocks", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::uint64_t from = req.has_param("from") ? number_param(req.get_param_value("from")) : 0;
      std::string out;
      for (const auto& line : api().blocks_from(from)) out += line + "\n";
      res.set_content(out, "application/x-ndjson");
    }));

    server_.Get(R"(/board/receipt/(\d+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      reply_json(res, api().receipt(number_param(req.matches[1])));
    }));

    server_.Get("/board/tally", guarded([this](const httplib::Request&, httplib::Response& res) {
      auto tally = api().final_tally();
      if (!tally) throw Error(Errc::not_found, "no final tally yet");
      reply_json(res, *tally);
    }));

    server_.Get("/board/head", guarded([this](const httplib::Request&, httplib::Response& res) {
      Json j;
      j["head_hash"] = api().head_hash().hex();
      reply_json(res, j.dump());
    }));

    server_.Post("/close", guarded([this](const httplib::Request& req, httplib::Response& res) {
      if (!is_loopback(req.remote_addr)) throw Error(Errc::not_eligible, "closing is admin-only");
      reply_json(res, api().close());
    }));

    server_.Get("/verify", guarded([this](const httplib::Request&, httplib::Response& res) {
      VerificationReport report = api().verify();
      reply_json(res, report.to_json().dump());
    }));
  }

  ElectionApi& api() { return *api_.load(); }

  std::atomic<ElectionApi*> api_{nullptr};
  httplib::Server server_;
};

/// Minimal client for the endpoints above. Non-2xx replies throw an Error
/// carrying the server's reason code when it maps onto a known one.
class ElectionHttpClient {
 public:
  ElectionHttpClient(const std::string& host, int port) : client_(host, port) {
    client_.set_connection_timeout(5);
    client_.set_read_timeout(60);
  }

  Registration register_voter(const std::string& voter_id) {
    Json req;
    req["voter_id"] = voter_id;
    Json j = Json::parse(post("/register", req.dump()));
    return {parse_credential(j.at("credential")), Digest::require_hex(j.at("commitment").get<std::string>())};
  }

  RegistryInfo registry_root() {
    Json j = Json::parse(get("/registry/root"));
    return {Digest::require_hex(j.at("root").get<std::string>()), j.at("leaf_count").get<std::size_t>(),
            j.at("depth").get<std::size_t>()};
  }

  std::vector<Digest> registry_leaves() {
    std::vector<Digest> out;
    const Json doc = Json::parse(get("/registry/leaves"));
    for (const auto& l : doc.at("leaves")) {
      out.push_back(Digest::require_hex(l.get<std::string>()));
    }
    return out;
  }

  std::string open_session(const std::string& payload) {
    Json req;
    req["proof_payload"] = payload;
    return Json::parse(post("/session", req.dump())).at("token").get<std::string>();
  }

  std::string session_state(const std::string& token) {
    return Json::parse(get("/session/" + token)).at("state").get<std::string>();
  }

  std::string cast_vote(const std::string& token, std::size_t candidate) {
    Json req;
    req["candidate"] = candidate;
    return post("/session/" + token + "/vote", req.dump());
  }

  std::string decide(const std::string& token, const std::string& choice) {
    Json req;
    req["choice"] = choice;
    return post("/session/" + token + "/decision", req.dump());
  }

  std::string blocks_from(std::uint64_t height) { return get("/board/blocks?from=" + std::to_string(height)); }
  std::string receipt(std::uint64_t index) { return get("/board/receipt/" + std::to_string(index)); }
  std::string final_tally() { return get("/board/tally"); }
  std::string head_hash() { return Json::parse(get("/board/head")).at("head_hash").get<std::string>(); }
  std::string close() { return post("/close", "{}"); }
  Json verify() { return Json::parse(get("/verify")); }

  /// Last status and body, for callers that inspect rejections directly.
  int last_status() const { return last_status_; }
  const std::string& last_body() const { return last_body_; }

 private:
  std::string get(const std::string& path) { return finish(client_.Get(path)); }
  std::string post(const std::string& path, const std::string& body) {
    return finish(client_.Post(path, body, "application/json"));
  }

  std::string finish(const httplib::Result& r) {
    if (!r) throw Error(Errc::configuration, "HTTP request failed: " + httplib::to_string(r.error()));
    last_status_ = r->status;
    last_body_ = r->body;
    if (r->status / 100 == 2) return r->body;
    std::string code = "internal";
    std::string message = r->body;
    try {
      Json j = Json::parse(r->body);
      code = j.at("error").get<std::string>();
      message = j.at("message").get<std::string>();
    } catch (const std::exception&) {
    }
    if (message.rfind(code + ": ", 0) == 0) message.erase(0, code.size() + 2);
    throw Error(errc_from_string(code).value_or(Errc::board_rejected), message);
  }

  httplib::Client client_;
  int last_status_ = 0;
  std::string last_body_;
};

}  // namespace dreip::http
