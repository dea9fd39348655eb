#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "frontnav/lm_client.hpp"

namespace frontnav {

/// Produces fixed-dimension sentence embeddings.
class EmbeddingSource {
 public:
  virtual ~EmbeddingSource() = default;
  virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& sentences) = 0;
  virtual int dim() const = 0;
};

/// 64-bit FNV-1a, used to key cached sentences.
std::uint64_t fnv1a64(std::string_view text);

/// Deterministic offline embedder: signed feature hashing of lower-cased
/// word unigrams, L2-normalised. No model involved.
class HashingEmbedder : public EmbeddingSource {
 public:
  explicit HashingEmbedder(int dim = 256) : dim_(dim) {}
  std::vector<std::vector<float>> embed(const std::vector<std::string>& sentences) override;
  int dim() const override { return dim_; }

 private:
  int dim_;
};

/// Embeddings from the remote /embed endpoint.
class RemoteEmbedder : public EmbeddingSource {
 public:
  explicit RemoteEmbedder(std::shared_ptr<LmClient> client) : client_(std::move(client)) {}
  std::vector<std::vector<float>> embed(const std::vector<std::string>& sentences) override;
  int dim() const override { return dim_; }

 private:
  std::shared_ptr<LmClient> client_;
  int dim_ = 0;
};

class EmbeddingCacheMiss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Content-addressed cache in front of another source. Backed by an
/// append-only JSON-lines file {"key": "<fnv1a64 hex>", "sentence": ..., "embedding": [...]}.
/// Without an upstream, a miss throws EmbeddingCacheMiss.
class CachedEmbedder : public EmbeddingSource {
 public:
  CachedEmbedder(std::filesystem::path file, std::shared_ptr<EmbeddingSource> upstream);
  std::vector<std::vector<float>> embed(const std::vector<std::string>& sentences) override;
  int dim() const override;
  std::size_t size() const { return entries_.size(); }

 private:
  void append(const std::string& sentence, const std::vector<float>& v);

  std::filesystem::path file_;
  std::shared_ptr<EmbeddingSource> upstream_;
  std::unordered_map<std::string, std::vector<float>> entries_;
  int dim_ = 0;
};

}  // namespace frontnav
