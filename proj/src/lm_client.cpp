#include "frontnav/lm_client.hpp"

#include <cmath>
#include <mutex>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace frontnav {

using json = nlohmann::json;

struct LmClient::Impl {
  explicit Impl(const std::string& url) : client(url) {}
  httplib::Client client;
  std::mutex mutex;
};

LmClient::LmClient(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), impl_(std::make_unique<Impl>(base_url_)) {
  if (!impl_->client.is_valid()) throw LmUnavailableError("invalid scorer URL '" + base_url_ + "'");
  impl_->client.set_connection_timeout(timeout);
  impl_->client.set_read_timeout(timeout);
  impl_->client.set_write_timeout(timeout);
}

LmClient::~LmClient() = default;
LmClient::LmClient(LmClient&&) noexcept = default;
LmClient& LmClient::operator=(LmClient&&) noexcept = default;

std::string LmClient::post(const std::string& path, const std::string& body) {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  auto res = impl_->client.Post(path, body, "application/json");
  if (!res) throw LmUnavailableError(base_url_ + path + ": " + httplib::to_string(res.error()));
  if (res->status == 503) throw LmUnavailableError(base_url_ + path + ": service unavailable");
  if (res->status != 200) throw LmProtocolError(base_url_ + path + ": HTTP " + std::to_string(res->status));
  return res->body;
}

std::vector<double> LmClient::score(const std::vector<std::string>& sentences) {
  return decode_score_response(post("/score", encode_sentences_request(sentences)), sentences.size());
}

Embeddings LmClient::embed(const std::vector<std::string>& sentences) {
  return decode_embed_response(post("/embed", encode_sentences_request(sentences)), sentences.size());
}

std::string encode_sentences_request(const std::vector<std::string>& sentences) {
  return json{{"sentences", sentences}}.dump();
}

std::vector<double> decode_score_response(const std::string& body, std::size_t expected) {
  try {
    const auto j = json::parse(body);
    if (j.contains("error")) throw LmProtocolError("scorer reported: " + j.at("error").dump());
    const auto& arr = j.at("log_probs");
    if (!arr.is_array() || arr.size() != expected)
      throw LmProtocolError("log_probs length does not match the request");
    std::vector<double> out;
    for (const auto& v : arr) {
      if (!v.is_number()) throw LmProtocolError("log_probs entries must be numbers");
      const double x = v.get<double>();
      if (std::isnan(x)) throw LmProtocolError("log_probs contains NaN");
      out.push_back(x);
    }
    return out;
  } catch (const json::exception& e) {
    throw LmProtocolError(std::string("malformed /score response: ") + e.what());
  }
}

Embeddings decode_embed_response(const std::string& body, std::size_t expected) {
  try {
    const auto j = json::parse(body);
    Embeddings out;
    out.dim = j.at("dim").get<int>();
    const auto& arr = j.at("embeddings");
    if (!arr.is_array() || arr.size() != expected)
      throw LmProtocolError("embeddings length does not match the request");
    for (const auto& row : arr) {
      auto v = row.get<std::vector<float>>();
      if (static_cast<int>(v.size()) != out.dim) throw LmProtocolError("embedding length differs from dim");
      out.vectors.push_back(std::move(v));
    }
    return out;
  } catch (const json::exception& e) {
    throw LmProtocolError(std::string("malformed /embed response: ") + e.what());
  }
}

}  // namespace frontnav
