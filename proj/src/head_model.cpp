#include "frontnav/head_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "frontnav/semantics.hpp"

namespace frontnav {

using json = nlohmann::json;
using Eigen::MatrixXd;
using Eigen::VectorXd;

HeadModel HeadModel::zeros(int input_dim, int output_dim, int hidden1, int hidden2) {
  HeadModel h;
  h.w1 = MatrixXd::Zero(hidden1, input_dim);
  h.b1 = VectorXd::Zero(hidden1);
  h.w2 = MatrixXd::Zero(hidden2, hidden1);
  h.b2 = VectorXd::Zero(hidden2);
  h.w3 = MatrixXd::Zero(output_dim, hidden2);
  h.b3 = VectorXd::Zero(output_dim);
  return h;
}

HeadModel HeadModel::random(int input_dim, int output_dim, std::uint64_t seed, int hidden1, int hidden2) {
  HeadModel h = zeros(input_dim, output_dim, hidden1, hidden2);
  std::mt19937_64 rng(seed);
  auto fill = [&](MatrixXd& w) {
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / static_cast<double>(w.cols())));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = normal(rng);
  };
  fill(h.w1);
  fill(h.w2);
  fill(h.w3);
  return h;
}

MatrixXd HeadModel::forward(const MatrixXd& x) const {
  const MatrixXd a1 = ((w1 * x).colwise() + b1).cwiseMax(0.0);
  const MatrixXd a2 = ((w2 * a1).colwise() + b2).cwiseMax(0.0);
  return (w3 * a2).colwise() + b3;
}

VectorXd HeadModel::logits(const VectorXd& embedding) const {
  if (embedding.size() != input_dim())
    throw HeadModelError("embedding has dimension " + std::to_string(embedding.size()) + ", head expects " +
                         std::to_string(input_dim()));
  return forward(embedding);
}

bool HeadModel::finite() const {
  return w1.allFinite() && w2.allFinite() && w3.allFinite() && b1.allFinite() && b2.allFinite() &&
         b3.allFinite();
}

std::size_t HeadModel::parameter_count() const {
  return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + b3.size();
}

namespace {

void append_row_major(std::vector<double>& out, const MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
}

void append(std::vector<double>& out, const VectorXd& v) { out.insert(out.end(), v.data(), v.data() + v.size()); }

std::size_t read_row_major(const std::vector<double>& in, std::size_t at, MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = in[at++];
  return at;
}

std::size_t read(const std::vector<double>& in, std::size_t at, VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = in[at++];
  return at;
}

MatrixXd softmax_columns(const MatrixXd& logits) {
  MatrixXd p(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double m = logits.col(c).maxCoeff();
    p.col(c) = (logits.col(c).array() - m).exp().matrix();
    p.col(c) /= p.col(c).sum();
  }
  return p;
}

}  // namespace

std::vector<double> HeadModel::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  append_row_major(out, w1);
  append(out, b1);
  append_row_major(out, w2);
  append(out, b2);
  append_row_major(out, w3);
  append(out, b3);
  return out;
}

void HeadModel::unflatten(const std::vector<double>& params) {
  if (params.size() != parameter_count()) throw HeadModelError("parameter vector has the wrong length");
  std::size_t at = 0;
  at = read_row_major(params, at, w1);
  at = read(params, at, b1);
  at = read_row_major(params, at, w2);
  at = read(params, at, b2);
  at = read_row_major(params, at, w3);
  read(params, at, b3);
}

std::string HeadModel::to_json() const {
  json layers = json::array();
  auto layer = [&](const MatrixXd& w, const VectorXd& b) {
    std::vector<double> wv, bv;
    append_row_major(wv, w);
    append(bv, b);
    layers.push_back({{"weight", wv}, {"bias", bv}});
  };
  layer(w1, b1);
  layer(w2, b2);
  layer(w3, b3);
  json j = {{"format", "frontnav-head"},
            {"version", 1},
            {"dims", {input_dim(), w1.rows(), w2.rows(), output_dim()}},
            {"targets", targets},
            {"layers", layers},
            {"final_loss", final_loss}};
  return j.dump();
}

HeadModel HeadModel::from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    if (j.at("format").get<std::string>() != "frontnav-head") throw HeadModelError("not a head model file");
    const auto dims = j.at("dims").get<std::vector<int>>();
    if (dims.size() != 4) throw HeadModelError("head dims must have 4 entries");
    HeadModel h = zeros(dims[0], dims[3], dims[1], dims[2]);
    h.targets = j.value("targets", std::vector<std::string>{});
    h.final_loss = j.value("final_loss", 0.0);
    const auto& layers = j.at("layers");
    if (layers.size() != 3) throw HeadModelError("head needs 3 layers");
    MatrixXd* ws[] = {&h.w1, &h.w2, &h.w3};
    VectorXd* bs[] = {&h.b1, &h.b2, &h.b3};
    for (int i = 0; i < 3; ++i) {
      const auto w = layers[i].at("weight").get<std::vector<double>>();
      const auto b = layers[i].at("bias").get<std::vector<double>>();
      if (w.size() != static_cast<std::size_t>(ws[i]->size()) || b.size() != static_cast<std::size_t>(bs[i]->size()))
        throw HeadModelError("layer " + std::to_string(i) + " shape does not match dims");
      read_row_major(w, 0, *ws[i]);
      read(b, 0, *bs[i]);
    }
    return h;
  } catch (const json::exception& e) {
    throw HeadModelError(std::string("head model JSON: ") + e.what());
  }
}

void HeadModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw HeadModelError("cannot write " + path.string());
  out << to_json() << '\n';
}

HeadModel HeadModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw HeadModelError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

LossAndGradient loss_and_gradient(const HeadModel& h, const MatrixXd& x, const std::vector<int>& labels) {
  const auto n = x.cols();
  const MatrixXd z1 = (h.w1 * x).colwise() + h.b1;
  const MatrixXd a1 = z1.cwiseMax(0.0);
  const MatrixXd z2 = (h.w2 * a1).colwise() + h.b2;
  const MatrixXd a2 = z2.cwiseMax(0.0);
  const MatrixXd z3 = (h.w3 * a2).colwise() + h.b3;
  MatrixXd p = softmax_columns(z3);

  LossAndGradient out;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.loss -= std::log(std::max(p(labels[i], i), 1e-300));
    p(labels[i], i) -= 1.0;
  }
  out.loss /= static_cast<double>(n);

  const MatrixXd dz3 = p / static_cast<double>(n);
  const MatrixXd dw3 = dz3 * a2.transpose();
  const VectorXd db3 = dz3.rowwise().sum();
  const MatrixXd dz2 = (h.w3.transpose() * dz3).cwiseProduct((z2.array() > 0.0).cast<double>().matrix());
  const MatrixXd dw2 = dz2 * a1.transpose();
  const VectorXd db2 = dz2.rowwise().sum();
  const MatrixXd dz1 = (h.w2.transpose() * dz2).cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
  const MatrixXd dw1 = dz1 * x.transpose();
  const VectorXd db1 = dz1.rowwise().sum();

  out.gradient.reserve(h.parameter_count());
  append_row_major(out.gradient, dw1);
  append(out.gradient, db1);
  append_row_major(out.gradient, dw2);
  append(out.gradient, db2);
  append_row_major(out.gradient, dw3);
  append(out.gradient, db3);
  return out;
}

double mean_loss(const HeadModel& h, const MatrixXd& x, const std::vector<int>& labels) {
  const MatrixXd p = softmax_columns(h.forward(x));
  double loss = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) loss -= std::log(std::max(p(labels[i], i), 1e-300));
  return loss / static_cast<double>(x.cols());
}

double accuracy(const HeadModel& h, const MatrixXd& x, const std::vector<int>& labels) {
  const MatrixXd logits = h.forward(x);
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    Eigen::Index best = 0;
    logits.col(i).maxCoeff(&best);
    correct += best == labels[i];
  }
  return x.cols() ? static_cast<double>(correct) / x.cols() : 0.0;
}

HeadModel train_head_features(const MatrixXd& x, const std::vector<int>& labels, int classes,
                              const HeadHyper& hyper, std::vector<double>* loss_trace) {
  if (x.cols() == 0 || labels.empty()) throw HeadModelError("empty training set");
  if (static_cast<std::size_t>(x.cols()) != labels.size()) throw HeadModelError("features and labels differ in count");
  for (int y : labels)
    if (y < 0 || y >= classes) throw HeadModelError("label outside the target list");

  HeadModel head = HeadModel::random(static_cast<int>(x.rows()), classes, hyper.seed, hyper.hidden1, hyper.hidden2);
  std::vector<double> params = head.flatten();
  std::vector<double> velocity(params.size(), 0.0);
  std::mt19937_64 rng(hyper.seed ^ 0x5bd1e995ULL);
  std::vector<Eigen::Index> order(x.cols());
  std::iota(order.begin(), order.end(), 0);
  const int batch = std::max(1, hyper.batch_size);

  HeadModel last_finite = head;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      MatrixXd xb(x.rows(), static_cast<Eigen::Index>(end - start));
      std::vector<int> yb;
      for (std::size_t i = start; i < end; ++i) {
        xb.col(static_cast<Eigen::Index>(i - start)) = x.col(order[i]);
        yb.push_back(labels[order[i]]);
      }
      const auto lg = loss_and_gradient(head, xb, yb);
      if (!std::isfinite(lg.loss))
        throw TrainingDivergedError("training loss became non-finite at epoch " + std::to_string(epoch), last_finite);
      for (std::size_t k = 0; k < params.size(); ++k) {
        velocity[k] = hyper.momentum * velocity[k] - hyper.learning_rate * lg.gradient[k];
        params[k] += velocity[k];
      }
      head.unflatten(params);
      if (!head.finite())
        throw TrainingDivergedError("parameters became non-finite at epoch " + std::to_string(epoch), last_finite);
    }
    const double loss = mean_loss(head, x, labels);
    if (!std::isfinite(loss))
      throw TrainingDivergedError("training loss became non-finite at epoch " + std::to_string(epoch), last_finite);
    head.final_loss = loss;
    last_finite = head;
    if (loss_trace) loss_trace->push_back(loss);
  }
  if (hyper.epochs <= 0) head.final_loss = mean_loss(head, x, labels);
  return head;
}

MatrixXd embed_matrix(EmbeddingSource& embedder, const std::vector<std::string>& sentences) {
  const auto vectors = embedder.embed(sentences);
  if (vectors.empty()) return MatrixXd(0, 0);
  MatrixXd x(static_cast<Eigen::Index>(vectors.front().size()), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != vectors.front().size()) throw HeadModelError("embeddings differ in dimension");
    for (std::size_t d = 0; d < vectors[i].size(); ++d) x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) = vectors[i][d];
  }
  return x;
}

HeadModel train_head(const std::vector<LabeledRoom>& dataset, const std::vector<std::string>& targets,
                     EmbeddingSource& embedder, const HeadHyper& hyper, std::vector<double>* loss_trace) {
  if (dataset.empty()) throw HeadModelError("empty training set");
  std::vector<std::string> sentences;
  std::vector<int> labels;
  for (const auto& room : dataset) {
    const auto it = std::find(targets.begin(), targets.end(), room.target);
    if (it == targets.end()) throw HeadModelError("label '" + room.target + "' is not a target category");
    labels.push_back(static_cast<int>(it - targets.begin()));
    sentences.push_back(feed_forward_query(room.objects, 0).text);
  }
  HeadModel head = train_head_features(embed_matrix(embedder, sentences), labels, static_cast<int>(targets.size()),
                                       hyper, loss_trace);
  head.targets = targets;
  return head;
}

}  // namespace frontnav
