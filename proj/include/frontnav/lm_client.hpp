#pragma once

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace frontnav {

class LmUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LmProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Embeddings {
  std::vector<std::vector<float>> vectors;
  int dim = 0;
};

/// HTTP client for the sentence scoring service:
///   POST /score {"sentences": [...]} -> {"log_probs": [...]}
///   POST /embed {"sentences": [...]} -> {"embeddings": [[...]], "dim": D}
class LmClient {
 public:
  /// `base_url` like "http://127.0.0.1:8000".
  explicit LmClient(std::string base_url, std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~LmClient();
  LmClient(LmClient&&) noexcept;
  LmClient& operator=(LmClient&&) noexcept;

  /// Natural-log pseudo-log-likelihood per sentence.
  std::vector<double> score(const std::vector<std::string>& sentences);
  Embeddings embed(const std::vector<std::string>& sentences);

  const std::string& base_url() const { return base_url_; }

 private:
  std::string post(const std::string& path, const std::string& body);

  std::string base_url_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Request/response codecs, exposed for protocol tests.
std::string encode_sentences_request(const std::vector<std::string>& sentences);
std::vector<double> decode_score_response(const std::string& body, std::size_t expected);
Embeddings decode_embed_response(const std::string& body, std::size_t expected);

}  // namespace frontnav
