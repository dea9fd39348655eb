#include "frontnav/scene.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

namespace frontnav {

using json = nlohmann::json;

Scene::Scene(double resolution, std::vector<std::string> categories, std::vector<CategoryId> targets,
             Grid<std::int16_t> cells, std::vector<RoomRecord> rooms)
    : resolution_(resolution),
      categories_(std::move(categories)),
      targets_(std::move(targets)),
      cells_(std::move(cells)),
      rooms_(std::move(rooms)) {
  validate();
}

void Scene::validate() const {
  using Kind = SceneInvariantError::Kind;
  if (!(resolution_ > 0.0)) throw SceneInvariantError(Kind::kEmptyGrid, "resolution must be positive");
  if (cells_.rows() == 0 || cells_.cols() == 0) throw SceneInvariantError(Kind::kEmptyGrid, "empty grid");
  for (CategoryId t : targets_) {
    if (t < 0 || t >= category_count())
      throw SceneInvariantError(Kind::kUnknownTarget, "target id outside category list");
  }

  std::size_t free_count = 0;
  std::size_t first_free = 0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const auto v = cells_.data()[i];
    if (v >= category_count() || v < kWall) {
      const Cell c = cells_.cell_of(i);
      throw SceneInvariantError(Kind::kCategoryOutOfRange,
                                "category id " + std::to_string(v) + " at (" + std::to_string(c.row) +
                                    "," + std::to_string(c.col) + ") is not below C_n=" +
                                    std::to_string(category_count()));
    }
    if (v == kFree && free_count++ == 0) first_free = i;
  }
  if (free_count == 0) throw SceneInvariantError(Kind::kNoFreeCell, "scene has no free cell");

  // Free space must be one 4-connected component.
  std::vector<std::uint8_t> seen(cells_.size(), 0);
  std::queue<std::size_t> open;
  open.push(first_free);
  seen[first_free] = 1;
  std::size_t reached = 0;
  while (!open.empty()) {
    const Cell c = cells_.cell_of(open.front());
    open.pop();
    ++reached;
    constexpr int dr[] = {1, -1, 0, 0};
    constexpr int dc[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.row + dr[k], c.col + dc[k]};
      if (!cells_.contains(n)) continue;
      const auto idx = cells_.index(n.row, n.col);
      if (seen[idx] || cells_.data()[idx] != kFree) continue;
      seen[idx] = 1;
      open.push(idx);
    }
  }
  if (reached != free_count)
    throw SceneInvariantError(Kind::kDisconnectedFreeSpace,
                              "free space splits into multiple components (" + std::to_string(reached) +
                                  " of " + std::to_string(free_count) + " cells reachable)");
}

bool Scene::free_at(Vec2 p) const {
  const Cell c = frame().to_cell(p);
  return cells_.contains(c) && !occupied(c);
}

std::optional<CategoryId> Scene::find_category(const std::string& name) const {
  const auto it = std::find(categories_.begin(), categories_.end(), name);
  if (it == categories_.end()) return std::nullopt;
  return static_cast<CategoryId>(it - categories_.begin());
}

CategoryId Scene::category_id(const std::string& name) const {
  if (auto id = find_category(name)) return *id;
  throw std::out_of_range("unknown category '" + name + "'");
}

std::vector<Cell> Scene::cells_of(CategoryId category) const {
  std::vector<Cell> out;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_.data()[i] == category) out.push_back(cells_.cell_of(i));
  return out;
}

bool Scene::has_category(CategoryId category) const {
  return std::find(cells_.data().begin(), cells_.data().end(), category) != cells_.data().end();
}

Scene parse_scene(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SceneParseError(std::string("scene JSON: ") + e.what());
  }

  double resolution = 0.0;
  std::vector<std::string> categories;
  std::vector<std::string> target_names;
  std::vector<RoomRecord> rooms;
  Grid<std::int16_t> cells;
  try {
    resolution = doc.at("resolution").get<double>();
    categories = doc.at("categories").get<std::vector<std::string>>();
    target_names = doc.at("targets").get<std::vector<std::string>>();

    const auto& grid = doc.at("grid");
    if (!grid.is_array() || grid.empty())
      throw SceneInvariantError(SceneInvariantError::Kind::kEmptyGrid, "grid must be a nonempty array");
    const int rows = static_cast<int>(grid.size());
    const int cols = static_cast<int>(grid.front().size());
    cells = Grid<std::int16_t>(rows, cols, Scene::kFree);
    for (int r = 0; r < rows; ++r) {
      const auto& row = grid[r];
      if (!row.is_array() || static_cast<int>(row.size()) != cols)
        throw SceneInvariantError(SceneInvariantError::Kind::kRaggedGrid,
                                  "grid row " + std::to_string(r) + " has the wrong length");
      for (int c = 0; c < cols; ++c) {
        const auto& v = row[c];
        if (v.is_number_integer()) {
          const auto code = v.get<int>();
          if (code == 0) cells(r, c) = Scene::kFree;
          else if (code == 1) cells(r, c) = Scene::kWall;
          else throw SceneParseError("cell code must be 0, 1 or \"+k\"");
        } else if (v.is_string()) {
          const auto s = v.get<std::string>();
          if (s.size() < 2 || s[0] != '+' ||
              !std::all_of(s.begin() + 1, s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            throw SceneParseError("object cell must look like \"+k\", got \"" + s + "\"");
          const long id = std::stol(s.substr(1));
          if (id > 32767) throw SceneInvariantError(SceneInvariantError::Kind::kCategoryOutOfRange, "category id too large");
          cells(r, c) = static_cast<std::int16_t>(id);
        } else {
          throw SceneParseError("cell must be an integer or string");
        }
      }
    }

    if (doc.contains("rooms")) {
      for (const auto& jr : doc.at("rooms")) {
        RoomRecord room;
        room.type = jr.at("type").get<std::string>();
        const auto b = jr.at("bounds").get<std::vector<int>>();
        if (b.size() != 4) throw SceneParseError("room bounds need 4 integers");
        room.bounds = {b[0], b[1], b[2], b[3]};
        for (const auto& name : jr.at("objects").get<std::vector<std::string>>()) {
          const auto it = std::find(categories.begin(), categories.end(), name);
          if (it == categories.end()) throw SceneParseError("room object '" + name + "' is not a category");
          room.objects.insert(static_cast<CategoryId>(it - categories.begin()));
        }
        rooms.push_back(std::move(room));
      }
    }
  } catch (const json::exception& e) {
    throw SceneParseError(std::string("scene schema: ") + e.what());
  }

  std::vector<CategoryId> targets;
  for (const auto& name : target_names) {
    const auto it = std::find(categories.begin(), categories.end(), name);
    if (it == categories.end())
      throw SceneInvariantError(SceneInvariantError::Kind::kUnknownTarget,
                                "target '" + name + "' is not among the categories");
    targets.push_back(static_cast<CategoryId>(it - categories.begin()));
  }
  return Scene(resolution, std::move(categories), std::move(targets), std::move(cells), std::move(rooms));
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SceneParseError("cannot open scene file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

std::string serialize_scene(const Scene& scene) {
  std::ostringstream out;
  const auto& names = scene.category_names();
  json targets = json::array();
  for (CategoryId t : scene.targets()) targets.push_back(names[t]);

  out << "{\n";
  out << "  \"resolution\": " << json(scene.resolution()).dump() << ",\n";
  out << "  \"categories\": " << json(names).dump() << ",\n";
  out << "  \"targets\": " << targets.dump() << ",\n";
  out << "  \"grid\": [\n";
  const auto& cells = scene.cells();
  for (int r = 0; r < cells.rows(); ++r) {
    out << "    [";
    for (int c = 0; c < cells.cols(); ++c) {
      if (c) out << ',';
      const auto v = cells(r, c);
      if (v == Scene::kFree) out << '0';
      else if (v == Scene::kWall) out << '1';
      else out << "\"+" << v << '"';
    }
    out << (r + 1 < cells.rows() ? "],\n" : "]\n");
  }
  out << "  ]";
  if (!scene.rooms().empty()) {
    out << ",\n  \"rooms\": [\n";
    for (std::size_t i = 0; i < scene.rooms().size(); ++i) {
      const auto& room = scene.rooms()[i];
      json objects = json::array();
      for (CategoryId o : room.objects) objects.push_back(names[o]);
      json jr = {{"type", room.type},
                 {"bounds", {room.bounds.row0, room.bounds.col0, room.bounds.row1, room.bounds.col1}},
                 {"objects", objects}};
      out << "    " << jr.dump() << (i + 1 < scene.rooms().size() ? ",\n" : "\n");
    }
    out << "  ]";
  }
  out << "\n}\n";
  return out.str();
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scene file " + path.string());
  out << serialize_scene(scene);
}

}  // namespace frontnav
