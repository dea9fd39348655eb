#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "frontnav/embedding.hpp"
#include "frontnav/head_model.hpp"
#include "frontnav/lm_client.hpp"
#include "frontnav/semantics.hpp"

namespace frontnav {

/// Numerically stable softmax.
std::vector<double> softmax(const std::vector<double>& logits);

/// ln 0 is clamped here so sums of log-probabilities stay finite.
inline constexpr double kLogFloor = -30.0;

/// S^LLM for the zero-shot paradigm: softmax over the per-target sentence
/// log-probabilities of one frontier, read at the target.
double score_zero_shot(const std::vector<double>& log_probs, std::size_t target);

/// S^LLM for the feed-forward paradigm: softmax(head(embedding))[target].
double score_feed_forward(const HeadModel& head, const std::vector<float>& embedding, std::size_t target);

/// Softmax over targets of sum_i ln p(t | o_i), whitelisted objects only.
std::vector<double> offline_distribution(const CoocTable& table, const std::vector<std::string>& objects);
double offline_score(const CoocTable& table, const std::vector<std::string>& objects, std::size_t target);

enum class ScorerMode { kZeroShot, kFeedForward, kOffline };

std::string_view to_string(ScorerMode m);

/// Relevance of a frontier's observed objects to each target; every
/// returned distribution lies in [0, 1] and sums to 1.
class RelevanceScorer {
 public:
  virtual ~RelevanceScorer() = default;
  virtual ScorerMode mode() const = 0;
  /// One probability per target, in table target order.
  virtual std::vector<double> distribution(const std::vector<std::string>& objects) = 0;
  double score(const std::vector<std::string>& objects, std::size_t target) { return distribution(objects).at(target); }
};

class OfflineScorer : public RelevanceScorer {
 public:
  explicit OfflineScorer(const CoocTable& table) : table_(table) {}
  ScorerMode mode() const override { return ScorerMode::kOffline; }
  std::vector<double> distribution(const std::vector<std::string>& objects) override;

 private:
  const CoocTable& table_;
};

using DowngradeLog = std::function<void(const std::string&)>;

/// Scores the |L_T| zero-shot query sentences remotely. If the service is
/// unreachable it downgrades to the offline scorer for good and logs once.
class ZeroShotScorer : public RelevanceScorer {
 public:
  ZeroShotScorer(std::shared_ptr<LmClient> client, const CoocTable& table, DowngradeLog log = {});
  ScorerMode mode() const override { return ScorerMode::kZeroShot; }
  std::vector<double> distribution(const std::vector<std::string>& objects) override;
  bool downgraded() const { return downgraded_; }

 private:
  std::shared_ptr<LmClient> client_;
  OfflineScorer fallback_;
  const CoocTable& table_;
  DowngradeLog log_;
  bool downgraded_ = false;
};

/// Embeds the feed-forward query and applies the trained head. Embedding
/// failures (service down, cache miss) downgrade to the offline scorer.
class FeedForwardScorer : public RelevanceScorer {
 public:
  FeedForwardScorer(HeadModel head, std::shared_ptr<EmbeddingSource> embedder, const CoocTable& table,
                    DowngradeLog log = {});
  ScorerMode mode() const override { return ScorerMode::kFeedForward; }
  std::vector<double> distribution(const std::vector<std::string>& objects) override;
  bool downgraded() const { return downgraded_; }

 private:
  HeadModel head_;
  std::shared_ptr<EmbeddingSource> embedder_;
  OfflineScorer fallback_;
  DowngradeLog log_;
  bool downgraded_ = false;
};

}  // namespace frontnav
