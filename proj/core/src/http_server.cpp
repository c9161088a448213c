#include "cano/http_server.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "cano/error.hpp"
#include "json_util.hpp"

namespace cano {

namespace {

using nlohmann::json;

json flat_points(const std::vector<Point3>& pts) {
  std::vector<float> flat;
  flat.reserve(pts.size() * 3);
  for (const auto& p : pts) {
    flat.push_back(static_cast<float>(p.x()));
    flat.push_back(static_cast<float>(p.y()));
    flat.push_back(static_cast<float>(p.z()));
  }
  return flat;
}

json cloud_json(const LabeledCloud& cloud) {
  json j{{"count", cloud.size()}, {"points", flat_points(cloud.points)}, {"part_names", cloud.part_names}};
  j["labels"] = cloud.labels;
  if (cloud.has_colors()) {
    std::vector<float> flat;
    flat.reserve(cloud.size() * 3);
    for (const auto& c : cloud.colors) {
      flat.push_back(static_cast<float>(c.x()));
      flat.push_back(static_cast<float>(c.y()));
      flat.push_back(static_cast<float>(c.z()));
    }
    j["colors"] = flat;
  }
  return j;
}

json symmetry_json(const SymmetrySpec& s) {
  const char* kind = s.kind == SymmetryKind::kNone ? "none" : s.kind == SymmetryKind::kDiscrete ? "discrete" : "continuous";
  return {{"kind", kind}, {"axis", {s.axis.x(), s.axis.y(), s.axis.z()}}, {"angle", s.angle_deg}};
}

json candidates_json(const CandidateSet& set) {
  json list = json::array();
  for (const auto& c : set.candidates) {
    const auto q = c.rotation.wxyz();
    json diag = json::object();
    for (const auto& [k, v] : c.diagnostics) {
      diag[k] = v;
    }
    list.push_back({{"tag", to_string(c.tag)}, {"q", {q[0], q[1], q[2], q[3]}}, {"diagnostics", diag}});
  }
  return list;
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, const Error& e) {
  int status = 400;
  switch (e.code()) {
    case ErrorCode::kStaleLease:
      status = 409;
      break;
    case ErrorCode::kInvalidDecision:
    case ErrorCode::kInvalidInput:
      status = 400;
      break;
    default:
      status = 500;
  }
  reply(res, status, {{"error", to_string(e.code())}, {"message", e.what()}});
}

}  // namespace

struct HttpServer::Impl {
  AnnotationService& service;
  HttpOptions opts;
  httplib::Server server;
  int port = -1;

  Impl(AnnotationService& s, HttpOptions o) : service(s), opts(std::move(o)) { routes(); }

  void routes() {
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, {{"status", "ok"}});
    });

    server.Get("/api/next", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string annotator = req.get_param_value("annotator");
      if (annotator.empty()) {
        reply(res, 400, {{"error", "invalid-input"}, {"message", "missing annotator parameter"}});
        return;
      }
      const auto item = service.next_item(annotator);
      if (const auto* lease = std::get_if<Lease>(&item)) {
        const auto& obj = service.object(lease->object_id);
        reply(res, 200,
              {{"status", "ok"},
               {"object_id", lease->object_id},
               {"category", obj.category},
               {"lease_expires_ms", lease->expires_ms},
               {"lease_serial", lease->serial},
               {"candidate_set_hash", obj.candidates.hash()}});
        return;
      }
      const auto& none = std::get<NoneRemaining>(item);
      json body{{"status", "none-remaining"}};
      if (none.retry_after_ms) {
        body["retry_after_ms"] = *none.retry_after_ms;
        res.set_header("Retry-After", std::to_string((*none.retry_after_ms + 999) / 1000));
      } else {
        body["retry_after_ms"] = nullptr;
      }
      reply(res, 200, body);
    });

    server.Get(R"(/api/object/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const ServiceObject* obj = nullptr;
      try {
        obj = &service.object(id);
      } catch (const Error&) {
        reply(res, 404, {{"error", "invalid-input"}, {"message", "unknown object '" + id + "'"}});
        return;
      }
      const CandidateSet& set = obj->candidates;
      json body{{"object_id", obj->id},
                {"category", obj->category},
                {"candidate_set_hash", set.hash()},
                {"flags",
                 {{"continuous_symmetry", set.flags.continuous_symmetry},
                  {"semantic_unavailable", set.flags.semantic_unavailable},
                  {"no_stable_pose", set.flags.no_stable_pose},
                  {"pca_degenerate", set.flags.pca_degenerate}}},
                {"candidates", candidates_json(set)},
                {"object", cloud_json(obj->preview)}};
      if (const CategoryTemplate* t = service.template_for(obj->category)) {
        body["template"] = {{"template_id", t->template_id},
                            {"symmetry", symmetry_json(t->symmetry)},
                            {"axis_convention", t->axis_convention},
                            {"cloud", cloud_json(subsample(t->cloud, 4096))}};
      } else {
        body["template"] = nullptr;
      }
      reply(res, 200, body);
    });

    server.Post("/api/submit", [this](const httplib::Request& req, httplib::Response& res) {
      json in;
      try {
        in = json::parse(req.body);
      } catch (const json::exception& e) {
        reply(res, 400, {{"error", "invalid-input"}, {"message", e.what()}});
        return;
      }
      try {
        const std::string annotator = in.contains("annotator_id") ? in.value("annotator_id", std::string())
                                                                   : in.value("annotator", std::string());
        const auto rec = service.submit(annotator, in.value("object_id", std::string()),
                                        in.value("decision", std::string()), in.value("reason", std::string()),
                                        in.value("elapsed_ms", std::int64_t{0}));
        reply(res, 200,
              {{"status", "ok"},
               {"object_id", rec.object_id},
               {"timestamp", rec.timestamp_ms},
               {"candidate_set_hash", rec.candidate_set_hash}});
      } catch (const Error& e) {
        reply_error(res, e);
      } catch (const json::exception& e) {
        reply(res, 400, {{"error", "invalid-input"}, {"message", e.what()}});
      }
    });

    server.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
      json body = io::detail::stats_json(service.stats());
      const auto p = service.progress();
      body["objects"] = p.total;
      body["done"] = p.done;
      body["leased"] = p.leased;
      reply(res, 200, body);
    });

    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const Error& e) {
        reply_error(res, e);
      } catch (const std::exception& e) {
        reply(res, 500, {{"error", "internal"}, {"message", e.what()}});
      }
    });

    if (opts.static_dir && !server.set_mount_point("/", opts.static_dir->string())) {
      throw Error(ErrorCode::kIo, "cannot serve static files from " + opts.static_dir->string());
    }
  }
};

HttpServer::HttpServer(AnnotationService& service, HttpOptions opts)
    : impl_(std::make_unique<Impl>(service, std::move(opts))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  if (impl_->opts.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->opts.host);
  } else {
    impl_->port = impl_->server.bind_to_port(impl_->opts.host, impl_->opts.port) ? impl_->opts.port : -1;
  }
  if (impl_->port < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + impl_->opts.host + ":" + std::to_string(impl_->opts.port));
  }
  return impl_->port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) {
    impl_->server.stop();
  }
}

}  // namespace cano
