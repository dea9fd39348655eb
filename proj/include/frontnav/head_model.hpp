#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frontnav/embedding.hpp"

namespace frontnav {

/// Three-layer rectifier network mapping a sentence embedding to one logit
/// per target category: D -> h1 -> h2 -> T.
struct HeadModel {
  Eigen::MatrixXd w1, w2, w3;
  Eigen::VectorXd b1, b2, b3;
  std::vector<std::string> targets;
  double final_loss = 0.0;

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int output_dim() const { return static_cast<int>(w3.rows()); }

  static HeadModel zeros(int input_dim, int output_dim, int hidden1 = 128, int hidden2 = 64);
  /// He-initialised weights, zero biases.
  static HeadModel random(int input_dim, int output_dim, std::uint64_t seed, int hidden1 = 128, int hidden2 = 64);

  /// Logits for each column of `x` (D x batch).
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd logits(const Eigen::VectorXd& embedding) const;

  bool finite() const;
  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& params);

  /// JSON: {"format": "frontnav-head", "version": 1, "dims": [D, h1, h2, T],
  /// "targets": [...], "layers": [{"weight": [row-major], "bias": [...]}, x3],
  /// "final_loss": x}. Text only, so no byte-order concerns.
  std::string to_json() const;
  static HeadModel from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static HeadModel load(const std::filesystem::path& path);
};

class HeadModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingDivergedError : public std::runtime_error {
 public:
  TrainingDivergedError(const std::string& what, HeadModel last_finite)
      : std::runtime_error(what), last_finite_(std::move(last_finite)) {}
  const HeadModel& last_finite() const { return last_finite_; }

 private:
  HeadModel last_finite_;
};

/// Mean softmax cross-entropy and its exact gradient (same layout as flatten()).
struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};
LossAndGradient loss_and_gradient(const HeadModel& head, const Eigen::MatrixXd& x, const std::vector<int>& labels);
double mean_loss(const HeadModel& head, const Eigen::MatrixXd& x, const std::vector<int>& labels);
double accuracy(const HeadModel& head, const Eigen::MatrixXd& x, const std::vector<int>& labels);

struct HeadHyper {
  double learning_rate = 0.05;
  double momentum = 0.9;
  int epochs = 60;
  int batch_size = 32;
  int hidden1 = 128;
  int hidden2 = 64;
  std::uint64_t seed = 1;
};

/// Mini-batch gradient descent with momentum on features `x` (D x N).
/// `loss_trace`, if given, receives the full-data loss after every epoch.
HeadModel train_head_features(const Eigen::MatrixXd& x, const std::vector<int>& labels, int classes,
                              const HeadHyper& hyper, std::vector<double>* loss_trace = nullptr);

/// One labelled room: the other objects are the sample, the target the label.
struct LabeledRoom {
  std::vector<std::string> objects;
  std::string target;
};

/// Embeds feed-forward query sentences for each room and trains the head.
HeadModel train_head(const std::vector<LabeledRoom>& dataset, const std::vector<std::string>& targets,
                     EmbeddingSource& embedder, const HeadHyper& hyper, std::vector<double>* loss_trace = nullptr);

/// Feature matrix (D x N) for a list of sentences.
Eigen::MatrixXd embed_matrix(EmbeddingSource& embedder, const std::vector<std::string>& sentences);

}  // namespace frontnav
