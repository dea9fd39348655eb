#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontnav/frontier.hpp"
#include "frontnav/map_stack.hpp"
#include "frontnav/scene.hpp"

namespace frontnav {

/// One room's worth of co-occurrence evidence.
struct RoomSample {
  std::set<std::string> objects;
  std::set<std::string> targets_present;
};

class CoocError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Room-level co-occurrence statistics p(target | object), per-object
/// entropy, and the low-entropy whitelist of informative objects.
class CoocTable {
 public:
  CoocTable() = default;
  /// `counts[o][t]`; rows follow `objects`, columns follow `targets`.
  CoocTable(std::vector<std::string> objects, std::vector<std::string> targets,
            std::vector<std::vector<double>> counts, std::size_t whitelist_size = 15);

  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<std::string>& targets() const { return targets_; }
  std::size_t object_count() const { return objects_.size(); }
  std::size_t target_count() const { return targets_.size(); }

  double count(std::size_t o, std::size_t t) const { return counts_[o][t]; }
  /// Row-normalised p(t | o). Rows with no counts are all zero.
  double p(std::size_t o, std::size_t t) const { return probs_[o][t]; }
  const std::vector<double>& row(std::size_t o) const { return probs_[o]; }
  bool has_evidence(std::size_t o) const { return row_total_[o] > 0.0; }
  /// Entropy in nats; NaN for objects that never co-occur with a target.
  double entropy(std::size_t o) const { return entropy_[o]; }

  const std::vector<std::size_t>& whitelist() const { return whitelist_; }
  bool whitelisted(std::size_t o) const;

  std::optional<std::size_t> object_index(const std::string& name) const;
  std::optional<std::size_t> target_index(const std::string& name) const;

  /// CSV with header `object,target,count`, one line per pair.
  std::string to_csv() const;
  static CoocTable from_csv(const std::string& text, std::size_t whitelist_size = 15);
  void save(const std::filesystem::path& path) const;
  static CoocTable load(const std::filesystem::path& path, std::size_t whitelist_size = 15);

 private:
  std::vector<std::string> objects_;
  std::vector<std::string> targets_;
  std::vector<std::vector<double>> counts_;
  std::vector<std::vector<double>> probs_;
  std::vector<double> row_total_;
  std::vector<double> entropy_;
  std::vector<std::size_t> whitelist_;
};

/// counts[o][t] = number of rooms containing both o and t. The object
/// vocabulary is `objects` if given, otherwise every name seen, sorted.
CoocTable build_cooc(const std::vector<RoomSample>& rooms, const std::vector<std::string>& targets,
                     const std::vector<std::string>& objects = {}, std::size_t whitelist_size = 15);

/// Shannon entropy (nats) of a distribution, 0 ln 0 = 0. Throws CoocError
/// if the values do not sum to 1.
double entropy_of(const std::vector<double>& distribution);
double entropy_of(const CoocTable& table, std::size_t object);

/// Room samples from a scene's annotations.
std::vector<RoomSample> room_samples(const Scene& scene);

/// JSON-lines room records: {"objects": [...], "targets": [...]}.
std::vector<RoomSample> load_room_samples(const std::filesystem::path& path);
void save_room_samples(const std::vector<RoomSample>& rooms, const std::filesystem::path& path);

/// Whitelisted categories with a semantic cell inside the square window
/// (side `window` meters) centred on the frontier centroid, most cells first,
/// ties by category id. Map categories are matched to table rows by name.
std::vector<CategoryId> objects_near(const MapStack& map, const Frontier& frontier, double window,
                                     const CoocTable& table, const std::vector<std::string>& category_names);

enum class Paradigm { kZeroShot, kFeedForward };

struct QueryString {
  std::string text;
  int frontier_id = 0;
  std::optional<std::string> target;
  Paradigm paradigm = Paradigm::kZeroShot;
};

/// "A frontier area containing o_1, ..., o_k, t_j." for every target.
std::vector<QueryString> zero_shot_queries(const std::vector<std::string>& objects,
                                           const std::vector<std::string>& targets, int frontier_id);

/// "This frontier contains o_1, ..., and o_k."
QueryString feed_forward_query(const std::vector<std::string>& objects, int frontier_id);

}  // namespace frontnav
