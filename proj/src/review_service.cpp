// Copyright 2026 The Minos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "minos/review_service.hpp"

#include "httplib.h"
#include "minos/error.hpp"

namespace minos {
namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

int status_for(Errc code) {
  switch (code) {
    case Errc::NotFound: return 404;
    case Errc::IllegalTransition: return 409;
    case Errc::MalformedInput: return 400;
    default: return 500;
  }
}

std::string verdict_word(Verdict v) {
  return v == Verdict::Correct ? "correct" : "incorrect";
}

}  // namespace

nlohmann::json record_view(const FeedbackRecord& record, const Corpus& corpus) {
  nlohmann::json view = record;
  view["question_text"] = nullptr;
  view["final_answer"] = nullptr;
  view["gold_outcome"] = nullptr;
  nlohmann::json steps = nlohmann::json::array();
  const SolutionLabels* gold = corpus.find_labels(record.solution_id);
  if (auto it = corpus.questions.find(record.question_id); it != corpus.questions.end()) {
    view["question_text"] = it->second.text;
  }
  if (const Solution* s = corpus.find_solution(record.solution_id); s != nullptr) {
    if (s->final_answer) view["final_answer"] = *s->final_answer;
    for (const Step& step : s->steps) {
      nlohmann::json entry{{"index", step.index}, {"text", step.text}, {"gold_verdict", nullptr}};
      if (gold != nullptr) {
        for (const auto& g : gold->steps) {
          if (g.step_index == step.index) entry["gold_verdict"] = verdict_word(g.verdict);
        }
      }
      steps.push_back(entry);
    }
  }
  if (gold != nullptr) view["gold_outcome"] = verdict_word(gold->outcome.verdict);
  view["steps"] = steps;
  return view;
}

nlohmann::json to_json(const ReviewStats& s) {
  return {{"total", s.total},       {"pending", s.pending}, {"accepted", s.accepted},
          {"rejected", s.rejected}, {"edited", s.edited},   {"flagged", s.flagged},
          {"flags", s.flags}};
}

struct ReviewService::Impl {
  ReviewStore& store;
  const Corpus& corpus;
  httplib::Server server;

  Impl(ReviewStore& s, const Corpus& c) : store(s), corpus(c) {}

  void routes() {
    server.Get("/api/queue", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<ReviewStatus> status = ReviewStatus::Pending;
      if (req.has_param("status")) {
        const std::string value = req.get_param_value("status");
        try {
          status = value == "all" ? std::nullopt
                                  : std::optional<ReviewStatus>(parse_review_status(value));
        } catch (const Error& e) {
          return send_error(res, 400, e.what());
        }
      }
      nlohmann::json items = nlohmann::json::array();
      for (const auto& r : store.queue(status)) items.push_back(record_view(r, corpus));
      send_json(res, 200, items);
    });

    server.Get(R"(/api/records/([^/]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 auto record = store.get(req.matches[1].str());
                 if (!record) return send_error(res, 404, "unknown record");
                 send_json(res, 200, record_view(*record, corpus));
               });

    server.Post(R"(/api/records/([^/]+)/verdict)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  nlohmann::json body;
                  try {
                    body = nlohmann::json::parse(req.body);
                  } catch (const nlohmann::json::exception&) {
                    return send_error(res, 400, "body is not JSON");
                  }
                  if (!body.is_object() || !body.contains("decision") ||
                      !body["decision"].is_string()) {
                    return send_error(res, 400, "missing 'decision'");
                  }
                  try {
                    const Decision decision = parse_decision(body["decision"].get<std::string>());
                    std::optional<std::string> edited;
                    if (body.contains("edited_text") && body["edited_text"].is_string()) {
                      edited = body["edited_text"].get<std::string>();
                    }
                    const std::string reviewer =
                        body.contains("reviewer") && body["reviewer"].is_string()
                            ? body["reviewer"].get<std::string>()
                            : std::string("anonymous");
                    const FeedbackRecord updated =
                        store.apply_verdict(req.matches[1].str(), decision, edited, reviewer);
                    send_json(res, 200, record_view(updated, corpus));
                  } catch (const Error& e) {
                    send_error(res, status_for(e.code()), e.what());
                  }
                });

    server.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, to_json(store.stats()));
    });

    server.Get("/api/export", [this](const httplib::Request& req, httplib::Response& res) {
      if (req.has_param("status")) {
        const std::string value = req.get_param_value("status");
        if (value != "accepted") {
          return send_error(res, 400, "only status=accepted can be exported");
        }
      }
      try {
        res.status = 200;
        res.set_content(to_jsonl(export_sft_dataset(store.records(), corpus)),
                        "application/x-ndjson");
      } catch (const Error& e) {
        send_error(res, 500, e.what());
      }
    });
  }
};

ReviewService::ReviewService(ReviewStore& store, const Corpus& corpus,
                             std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(store, corpus)) {
  impl_->routes();
  if (static_dir) impl_->server.set_mount_point("/", static_dir->string());
}

ReviewService::~ReviewService() { stop(); }

bool ReviewService::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int ReviewService::bind_to_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool ReviewService::listen_after_bind() { return impl_->server.listen_after_bind(); }

void ReviewService::stop() {
  if (impl_) impl_->server.stop();
}

void ReviewService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace minos
