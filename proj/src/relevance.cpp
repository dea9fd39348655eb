#include "frontnav/relevance.hpp"

#include <algorithm>
#include <cmath>

namespace frontnav {

std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) return {};
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  if (std::isinf(m) && m > 0) {
    // +inf entries share all the mass.
    std::size_t n = std::count(logits.begin(), logits.end(), m);
    for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] == m ? 1.0 / n : 0.0;
    return out;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) sum += out[i] = std::exp(logits[i] - m);
  for (double& v : out) v /= sum;
  return out;
}

double score_zero_shot(const std::vector<double>& log_probs, std::size_t target) {
  return softmax(log_probs).at(target);
}

double score_feed_forward(const HeadModel& head, const std::vector<float>& embedding, std::size_t target) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(embedding.size()));
  for (std::size_t i = 0; i < embedding.size(); ++i) x(static_cast<Eigen::Index>(i)) = embedding[i];
  const Eigen::VectorXd z = head.logits(x);
  return softmax(std::vector<double>(z.data(), z.data() + z.size())).at(target);
}

std::vector<double> offline_distribution(const CoocTable& table, const std::vector<std::string>& objects) {
  std::vector<double> logits(table.target_count(), 0.0);
  for (const auto& name : objects) {
    const auto o = table.object_index(name);
    if (!o || !table.whitelisted(*o)) continue;
    for (std::size_t t = 0; t < logits.size(); ++t) {
      const double p = table.p(*o, t);
      logits[t] += p > 0.0 ? std::max(std::log(p), kLogFloor) : kLogFloor;
    }
  }
  return softmax(logits);
}

double offline_score(const CoocTable& table, const std::vector<std::string>& objects, std::size_t target) {
  return offline_distribution(table, objects).at(target);
}

std::string_view to_string(ScorerMode m) {
  switch (m) {
    case ScorerMode::kZeroShot: return "zero_shot";
    case ScorerMode::kFeedForward: return "feed_forward";
    case ScorerMode::kOffline: return "offline";
  }
  return "?";
}

std::vector<double> OfflineScorer::distribution(const std::vector<std::string>& objects) {
  return offline_distribution(table_, objects);
}

ZeroShotScorer::ZeroShotScorer(std::shared_ptr<LmClient> client, const CoocTable& table, DowngradeLog log)
    : client_(std::move(client)), fallback_(table), table_(table), log_(std::move(log)) {}

std::vector<double> ZeroShotScorer::distribution(const std::vector<std::string>& objects) {
  if (downgraded_ || !client_) return fallback_.distribution(objects);
  std::vector<std::string> whitelisted;
  for (const auto& name : objects) {
    const auto o = table_.object_index(name);
    if (o && table_.whitelisted(*o)) whitelisted.push_back(name);
  }
  std::vector<std::string> sentences;
  for (const auto& q : zero_shot_queries(whitelisted, table_.targets(), 0)) sentences.push_back(q.text);
  try {
    return softmax(client_->score(sentences));
  } catch (const LmUnavailableError& e) {
    downgraded_ = true;
    if (log_) log_(std::string("zero-shot scorer unreachable, using offline co-occurrence scores: ") + e.what());
    return fallback_.distribution(objects);
  }
}

FeedForwardScorer::FeedForwardScorer(HeadModel head, std::shared_ptr<EmbeddingSource> embedder,
                                     const CoocTable& table, DowngradeLog log)
    : head_(std::move(head)), embedder_(std::move(embedder)), fallback_(table), log_(std::move(log)) {
  if (head_.output_dim() != static_cast<int>(table.target_count()))
    throw HeadModelError("head output size does not match the target list");
}

std::vector<double> FeedForwardScorer::distribution(const std::vector<std::string>& objects) {
  if (downgraded_ || !embedder_) return fallback_.distribution(objects);
  try {
    const auto v = embedder_->embed({feed_forward_query(objects, 0).text});
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.front().size()));
    for (std::size_t i = 0; i < v.front().size(); ++i) x(static_cast<Eigen::Index>(i)) = v.front()[i];
    const Eigen::VectorXd z = head_.logits(x);
    return softmax(std::vector<double>(z.data(), z.data() + z.size()));
  } catch (const LmUnavailableError& e) {
    downgraded_ = true;
    if (log_) log_(std::string("embedding service unreachable, using offline co-occurrence scores: ") + e.what());
  } catch (const EmbeddingCacheMiss& e) {
    downgraded_ = true;
    if (log_) log_(std::string("embedding cache miss without a service, using offline scores: ") + e.what());
  }
  return fallback_.distribution(objects);
}

}  // namespace frontnav
