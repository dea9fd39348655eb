#include "frontnav/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace frontnav {

using json = nlohmann::json;

CoocTable::CoocTable(std::vector<std::string> objects, std::vector<std::string> targets,
                     std::vector<std::vector<double>> counts, std::size_t whitelist_size)
    : objects_(std::move(objects)), targets_(std::move(targets)), counts_(std::move(counts)) {
  if (counts_.size() != objects_.size()) throw CoocError("count rows do not match the object list");
  const std::size_t n_t = targets_.size();
  probs_.assign(objects_.size(), std::vector<double>(n_t, 0.0));
  row_total_.assign(objects_.size(), 0.0);
  entropy_.assign(objects_.size(), std::numeric_limits<double>::quiet_NaN());

  for (std::size_t o = 0; o < objects_.size(); ++o) {
    if (counts_[o].size() != n_t) throw CoocError("count row width does not match the target list");
    for (double c : counts_[o]) {
      if (c < 0.0) throw CoocError("negative co-occurrence count");
      row_total_[o] += c;
    }
    if (row_total_[o] <= 0.0) continue;
    for (std::size_t t = 0; t < n_t; ++t) probs_[o][t] = counts_[o][t] / row_total_[o];
    entropy_[o] = entropy_of(probs_[o]);
  }

  std::vector<std::size_t> candidates;
  for (std::size_t o = 0; o < objects_.size(); ++o)
    if (row_total_[o] > 0.0) candidates.push_back(o);
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (entropy_[a] != entropy_[b]) return entropy_[a] < entropy_[b];
    return objects_[a] < objects_[b];
  });
  if (candidates.size() > whitelist_size) candidates.resize(whitelist_size);
  whitelist_ = std::move(candidates);
}

bool CoocTable::whitelisted(std::size_t o) const {
  return std::find(whitelist_.begin(), whitelist_.end(), o) != whitelist_.end();
}

std::optional<std::size_t> CoocTable::object_index(const std::string& name) const {
  const auto it = std::find(objects_.begin(), objects_.end(), name);
  if (it == objects_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - objects_.begin());
}

std::optional<std::size_t> CoocTable::target_index(const std::string& name) const {
  const auto it = std::find(targets_.begin(), targets_.end(), name);
  if (it == targets_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - targets_.begin());
}

std::string CoocTable::to_csv() const {
  std::ostringstream out;
  out << "object,target,count\n";
  for (std::size_t o = 0; o < objects_.size(); ++o)
    for (std::size_t t = 0; t < targets_.size(); ++t)
      out << objects_[o] << ',' << targets_[t] << ',' << counts_[o][t] << '\n';
  return out.str();
}

CoocTable CoocTable::from_csv(const std::string& text, std::size_t whitelist_size) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw CoocError("empty co-occurrence CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "object,target,count") throw CoocError("co-occurrence CSV header must be object,target,count");

  std::vector<std::string> objects, targets;
  std::map<std::pair<std::string, std::string>, double> cells;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = a == std::string::npos ? std::string::npos : line.find(',', a + 1);
    if (b == std::string::npos) throw CoocError("line " + std::to_string(line_no) + ": expected 3 fields");
    const std::string o = line.substr(0, a), t = line.substr(a + 1, b - a - 1);
    double count = 0.0;
    try {
      std::size_t used = 0;
      count = std::stod(line.substr(b + 1), &used);
      if (used != line.size() - b - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw CoocError("line " + std::to_string(line_no) + ": bad count");
    }
    if (std::find(objects.begin(), objects.end(), o) == objects.end()) objects.push_back(o);
    if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    cells[{o, t}] += count;
  }
  std::vector<std::vector<double>> counts(objects.size(), std::vector<double>(targets.size(), 0.0));
  for (std::size_t o = 0; o < objects.size(); ++o)
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto it = cells.find({objects[o], targets[t]});
      if (it != cells.end()) counts[o][t] = it->second;
    }
  return CoocTable(std::move(objects), std::move(targets), std::move(counts), whitelist_size);
}

void CoocTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw CoocError("cannot write " + path.string());
  out << to_csv();
}

CoocTable CoocTable::load(const std::filesystem::path& path, std::size_t whitelist_size) {
  std::ifstream in(path);
  if (!in) throw CoocError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_csv(buf.str(), whitelist_size);
}

CoocTable build_cooc(const std::vector<RoomSample>& rooms, const std::vector<std::string>& targets,
                     const std::vector<std::string>& objects, std::size_t whitelist_size) {
  if (rooms.empty()) throw CoocError("no room records");
  std::vector<std::string> vocab = objects;
  if (vocab.empty()) {
    std::set<std::string> seen;
    for (const auto& room : rooms) seen.insert(room.objects.begin(), room.objects.end());
    vocab.assign(seen.begin(), seen.end());
  }
  std::vector<std::vector<double>> counts(vocab.size(), std::vector<double>(targets.size(), 0.0));
  for (const auto& room : rooms) {
    for (std::size_t o = 0; o < vocab.size(); ++o) {
      if (!room.objects.count(vocab[o])) continue;
      for (std::size_t t = 0; t < targets.size(); ++t)
        if (room.targets_present.count(targets[t])) counts[o][t] += 1.0;
    }
  }
  return CoocTable(std::move(vocab), targets, std::move(counts), whitelist_size);
}

double entropy_of(const std::vector<double>& distribution) {
  double total = 0.0, h = 0.0;
  for (double p : distribution) {
    if (p < 0.0) throw CoocError("negative probability");
    total += p;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (std::abs(total - 1.0) > 1e-9) throw CoocError("distribution is not normalised");
  return h;
}

double entropy_of(const CoocTable& table, std::size_t object) {
  if (!table.has_evidence(object)) throw CoocError("object '" + table.objects()[object] + "' has no co-occurrences");
  return entropy_of(table.row(object));
}

std::vector<RoomSample> room_samples(const Scene& scene) {
  std::vector<RoomSample> out;
  const auto& names = scene.category_names();
  std::set<CategoryId> targets(scene.targets().begin(), scene.targets().end());
  for (const auto& room : scene.rooms()) {
    RoomSample s;
    for (CategoryId o : room.objects) {
      s.objects.insert(names[o]);
      if (targets.count(o)) s.targets_present.insert(names[o]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RoomSample> load_room_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CoocError("cannot open " + path.string());
  std::vector<RoomSample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      RoomSample s;
      for (const auto& o : j.at("objects")) s.objects.insert(o.get<std::string>());
      for (const auto& t : j.at("targets")) s.targets_present.insert(t.get<std::string>());
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw CoocError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void save_room_samples(const std::vector<RoomSample>& rooms, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw CoocError("cannot write " + path.string());
  for (const auto& r : rooms) out << json{{"objects", r.objects}, {"targets", r.targets_present}}.dump() << '\n';
}

std::vector<CategoryId> objects_near(const MapStack& map, const Frontier& frontier, double window,
                                     const CoocTable& table, const std::vector<std::string>& category_names) {
  const int half = static_cast<int>(std::floor(0.5 * window / map.resolution()));
  const Cell c0 = frontier.centroid;
  std::vector<std::pair<std::size_t, CategoryId>> counted;
  for (CategoryId k = 0; k < map.category_count(); ++k) {
    if (map.semantic_counts()[k] == 0) continue;
    const auto row = table.object_index(category_names.at(k));
    if (!row || !table.whitelisted(*row)) continue;
    const auto& ch = map.semantic(k);
    std::size_t n = 0;
    for (int r = std::max(0, c0.row - half); r <= std::min(map.size() - 1, c0.row + half); ++r)
      for (int c = std::max(0, c0.col - half); c <= std::min(map.size() - 1, c0.col + half); ++c) n += ch(r, c);
    if (n > 0) counted.push_back({n, k});
  }
  std::stable_sort(counted.begin(), counted.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<CategoryId> out;
  for (const auto& [n, k] : counted) out.push_back(k);
  return out;
}

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

std::vector<QueryString> zero_shot_queries(const std::vector<std::string>& objects,
                                           const std::vector<std::string>& targets, int frontier_id) {
  std::vector<QueryString> out;
  out.reserve(targets.size());
  for (const auto& t : targets) {
    std::vector<std::string> items = objects;
    items.push_back(t);
    out.push_back({"A frontier area containing " + join(items, ", ") + ".", frontier_id, t, Paradigm::kZeroShot});
  }
  return out;
}

QueryString feed_forward_query(const std::vector<std::string>& objects, int frontier_id) {
  std::string body;
  if (objects.empty()) {
    body = "nothing";
  } else if (objects.size() == 1) {
    body = objects.front();
  } else {
    body = join(std::vector<std::string>(objects.begin(), objects.end() - 1), ", ") + ", and " + objects.back();
  }
  return {"This frontier contains " + body + ".", frontier_id, std::nullopt, Paradigm::kFeedForward};
}

}  // namespace frontnav
