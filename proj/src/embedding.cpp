#include "frontnav/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace frontnav {

using json = nlohmann::json;

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string hex_key(std::string_view sentence) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(sentence)));
  return buf;
}

}  // namespace

std::vector<std::vector<float>> HashingEmbedder::embed(const std::vector<std::string>& sentences) {
  std::vector<std::vector<float>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    std::vector<float> v(dim_, 0.0f);
    std::string token;
    auto flush = [&] {
      if (token.empty()) return;
      const std::uint64_t h = fnv1a64(token);
      v[h % dim_] += (h >> 63) ? -1.0f : 1.0f;
      token.clear();
    };
    for (char ch : s) {
      if (std::isalnum(static_cast<unsigned char>(ch))) token.push_back(static_cast<char>(std::tolower(ch)));
      else flush();
    }
    flush();
    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    if (norm > 0.0)
      for (float& x : v) x = static_cast<float>(x / std::sqrt(norm));
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<float>> RemoteEmbedder::embed(const std::vector<std::string>& sentences) {
  auto result = client_->embed(sentences);
  dim_ = result.dim;
  return std::move(result.vectors);
}

CachedEmbedder::CachedEmbedder(std::filesystem::path file, std::shared_ptr<EmbeddingSource> upstream)
    : file_(std::move(file)), upstream_(std::move(upstream)) {
  std::ifstream in(file_);
  std::string line;
  while (in && std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("sentence") || !j.contains("embedding")) continue;
    auto v = j.at("embedding").get<std::vector<float>>();
    dim_ = static_cast<int>(v.size());
    entries_[j.at("sentence").get<std::string>()] = std::move(v);
  }
}

int CachedEmbedder::dim() const {
  if (dim_ > 0) return dim_;
  return upstream_ ? upstream_->dim() : 0;
}

void CachedEmbedder::append(const std::string& sentence, const std::vector<float>& v) {
  std::ofstream out(file_, std::ios::app);
  if (!out) return;
  out << json{{"key", hex_key(sentence)}, {"sentence", sentence}, {"embedding", v}}.dump() << '\n';
}

std::vector<std::vector<float>> CachedEmbedder::embed(const std::vector<std::string>& sentences) {
  std::vector<std::string> missing;
  for (const auto& s : sentences)
    if (!entries_.count(s) && std::find(missing.begin(), missing.end(), s) == missing.end()) missing.push_back(s);
  if (!missing.empty()) {
    if (!upstream_) throw EmbeddingCacheMiss("no cached embedding for \"" + missing.front() + "\"");
    auto fresh = upstream_->embed(missing);
    for (std::size_t i = 0; i < missing.size(); ++i) {
      dim_ = static_cast<int>(fresh[i].size());
      append(missing[i], fresh[i]);
      entries_[missing[i]] = std::move(fresh[i]);
    }
  }
  std::vector<std::vector<float>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(entries_.at(s));
  return out;
}

}  // namespace frontnav
