#include "annulus/io.hpp"

#include <fstream>
#include <sstream>

#include "annulus/error.hpp"

namespace annulus::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

long decode_long(const Json& j) {
  if (!j.is_number_integer()) bad("expected an integer, got " + j.dump());
  return j.get<long>();
}

std::vector<std::pair<Rational, Rational>> decode_breaks(const Json& j) {
  if (!j.is_array() || j.empty()) bad("breaks must be a non-empty array");
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& b : j) {
    if (!b.is_array() || b.size() != 2) bad("a break is a pair [t, value]");
    out.emplace_back(decode_rational(b[0]), decode_rational(b[1]));
  }
  return out;
}

Json encode_breaks(const std::vector<std::pair<Rational, Rational>>& breaks) {
  Json out = Json::array();
  for (const auto& [t, v] : breaks) out.push_back({encode(t), encode(v)});
  return out;
}

Json encode_points(const std::vector<Point>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(encode(p));
  return out;
}

Json encode_order(const farey::CyclicOrder& order) { return order.permutation; }

Json encode_member(const bricks::Member& m) { return {{"brick", m.first}, {"deck", m.second}}; }

}  // namespace

Json encode(const Rational& r) { return r.str(); }

Rational decode_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      bad("not a rational: " + j.dump());
    }
  }
  bad("expected a rational string, got " + j.dump());
}

Json encode(const Point& p) { return {encode(p.x), encode(p.y)}; }

Point decode_point(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad("a point is a pair [x, y]");
  return {decode_rational(j[0]), decode_rational(j[1])};
}

Json encode(const EssentialLine& line) {
  return {{"tail_down", encode(line.tail_down())},
          {"vertices", encode_points(line.vertices())},
          {"tail_up", encode(line.tail_up())}};
}

EssentialLine decode_line(const Json& j) {
  std::vector<Point> vertices;
  if (j.contains("vertices")) {
    if (!j.at("vertices").is_array()) bad("vertices must be an array");
    for (const auto& v : j.at("vertices")) vertices.push_back(decode_point(v));
  }
  return EssentialLine::make(decode_rational(field(j, "tail_down")), std::move(vertices),
                             decode_rational(field(j, "tail_up")));
}

Json encode(const MapDescriptor& desc) {
  return std::visit(
      [](const auto& node) -> Json {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, MapDescriptor::Rotation>) {
          return {{"rotation", encode(node.rho)}};
        } else if constexpr (std::is_same_v<T, MapDescriptor::Twist>) {
          Json t{{"breaks", encode_breaks(node.tau.breaks())}};
          if (node.linear_tails) t["linear_tails"] = true;
          return {{"twist", t}};
        } else if constexpr (std::is_same_v<T, MapDescriptor::Shear>) {
          return {{"shear", {{"breaks", encode_breaks(node.sigma)}}}};
        } else if constexpr (std::is_same_v<T, MapDescriptor::Compose>) {
          Json parts = Json::array();
          for (const auto& m : node.maps) parts.push_back(encode(m));
          return {{"compose", parts}};
        } else if constexpr (std::is_same_v<T, MapDescriptor::Power>) {
          return {{"power", {{"map", encode(*node.base)}, {"k", node.k}}}};
        } else {
          return {{"deck", node.k}};
        }
      },
      desc.node);
}

MapDescriptor decode_map(const Json& j) {
  if (!j.is_object() || j.size() != 1) bad("a map node is an object with exactly one key");
  const auto& [key, value] = *j.items().begin();
  if (key == "rotation") return MapDescriptor::rotation(decode_rational(value));
  if (key == "twist") {
    MapDescriptor d = MapDescriptor::twist(decode_breaks(field(value, "breaks")));
    if (value.contains("linear_tails")) std::get<MapDescriptor::Twist>(d.node).linear_tails = value.at("linear_tails").get<bool>();
    return d;
  }
  if (key == "shear") return MapDescriptor::shear(decode_breaks(field(value, "breaks")));
  if (key == "compose") {
    if (!value.is_array() || value.empty()) bad("compose needs a non-empty array");
    std::vector<MapDescriptor> parts;
    for (const auto& m : value) parts.push_back(decode_map(m));
    return MapDescriptor::compose(std::move(parts));
  }
  if (key == "power") return MapDescriptor::power(decode_map(field(value, "map")), decode_long(field(value, "k")));
  if (key == "deck") return MapDescriptor::deck(decode_long(value));
  bad("unknown map node \"" + key + "\"");
}

Json encode(const Polygon& poly) { return encode_points(poly); }

Polygon decode_polygon(const Json& j) {
  if (!j.is_array() || j.size() < 3) bad("a polygon needs at least three vertices");
  Polygon out;
  for (const auto& p : j) out.push_back(decode_point(p));
  return out;
}

Json encode(const rotation::RotationEstimate& est) {
  Json samples = Json::array();
  for (const auto& s : est.samples) {
    Json row{{"seed", encode(s.seed)}, {"revisits", s.revisits}, {"recurrence_times", s.revisit_times}};
    row["rho_lo"] = s.lo ? encode(*s.lo) : Json(nullptr);
    row["rho_hi"] = s.hi ? encode(*s.hi) : Json(nullptr);
    row["rho_last"] = s.last ? encode(*s.last) : Json(nullptr);
    samples.push_back(row);
  }
  return {{"interval", {encode(est.lo), encode(est.hi)}},
          {"interval_decimal", {est.lo.to_double(), est.hi.to_double()}},
          {"inner", {encode(est.inner_lo), encode(est.inner_hi)}},
          {"band", {encode(est.band_lo), encode(est.band_hi)}},
          {"n_max", est.n_max},
          {"tail_start", est.tail_start},
          {"grid", est.grid},
          {"samples", samples}};
}

Json encode(const construction::PipelineReport& r) {
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back({{"map", c.name}, {"verdict", to_string(c.verdict)}});
  Json checks = Json::array();
  for (const auto& c : r.disjointness)
    checks.push_back({{"i", c.i}, {"j", c.j}, {"k", c.k}, {"verdict", to_string(c.verdict)}});
  Json iterates = Json::array();
  for (const auto& l : r.iterates) iterates.push_back(encode(l));
  return {{"line", encode(r.line)},
          {"farey", {encode(r.farey.left), encode(r.farey.right)}},
          {"seed_source", r.seed_source},
          {"seed", encode(r.seed)},
          {"iterates", iterates},
          {"certificates", certs},
          {"disjointness", checks},
          {"deck_bound", r.deck_bound},
          {"cyclic_order", encode_order(r.cyclic_order)},
          {"reference_order", encode_order(r.reference_order)},
          {"order_matches", r.cyclic_order == r.reference_order}};
}

Json encode(const bricks::BrickComplex& cx) {
  Json bricks = Json::array();
  for (int b : cx.brick_ids()) {
    Json members = Json::array();
    for (const auto& [c, o] : cx.members(b))
      members.push_back({{"row", cx.cells[c].row}, {"col", cx.cells[c].col}, {"deck", o},
                         {"polygon", encode(cx.cell_polygon(c, o))}});
    bricks.push_back({{"id", b}, {"members", members}});
  }
  return {{"period", 1},
          {"window", {encode(cx.ylo), encode(cx.yhi)}},
          {"resolution", encode(cx.resolution)},
          {"rows", cx.rows},
          {"cells_per_row", cx.cols},
          {"bricks", bricks}};
}

Json encode(const bricks::RegionReport& r) {
  Json reachable = Json::array();
  for (const auto& m : r.reachable) reachable.push_back(encode_member(m));
  Json boundary = Json::array();
  for (const auto& c : r.boundary)
    boundary.push_back({{"points", encode_points(c.points)},
                        {"closed", c.closed},
                        {"starts_bottom", c.starts_bottom},
                        {"ends_top", c.ends_top}});
  return {{"seed", r.seed},
          {"use_t_union", r.use_t_union},
          {"deck_range", r.deck_range},
          {"reachable", reachable},
          {"seed_translates", r.seed_translates},
          {"whole_strip", r.whole_strip},
          {"containment", r.containment},
          {"boundary", boundary}};
}

Json encode(const bricks::ExtractResult& ex) {
  Json lines = Json::array();
  for (size_t i = 0; i < ex.lines.size(); ++i)
    lines.push_back({{"line", encode(ex.lines[i])}, {"is_brouwer_line", to_string(ex.verdicts[i])}});
  Json rejected = Json::array();
  for (const auto& r : ex.rejected)
    rejected.push_back({{"error", "NotALine"}, {"reason", r.reason}, {"points", encode_points(r.component.points)}});
  return {{"lines", lines}, {"rejected", rejected}};
}

Json encode(const bricks::ChainSearch& s) {
  Json out{{"exhaustive", s.exhaustive}};
  if (!s.witness) {
    out["witness"] = nullptr;
    return out;
  }
  Json disks = Json::array();
  for (const auto& m : s.witness->disks) disks.push_back(encode_member(m));
  out["witness"] = {{"disks", disks}, {"powers", s.witness->powers}, {"closed", s.witness->closed}};
  return out;
}

Json encode(const bricks::RelationGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"from", e.from}, {"to", e.to}, {"power", e.power}, {"deck", e.deck}});
  return {{"nodes", g.nodes}, {"edges", edges}};
}

bricks::RelationGraph decode_graph(const Json& j) {
  bricks::RelationGraph g;
  g.nodes = static_cast<int>(decode_long(field(j, "nodes")));
  if (g.nodes < 0) bad("negative node count");
  const Json& edges = field(j, "edges");
  if (!edges.is_array()) bad("edges must be an array");
  for (const auto& e : edges) {
    bricks::RelationEdge edge;
    edge.from = static_cast<int>(decode_long(field(e, "from")));
    edge.to = static_cast<int>(decode_long(field(e, "to")));
    edge.power = e.contains("power") ? static_cast<int>(decode_long(e.at("power"))) : 1;
    edge.deck = e.contains("deck") ? decode_long(e.at("deck")) : 0;
    g.edges.push_back(edge);
  }
  return g;
}

Json encode(const bricks::Lemma41Report& r) {
  Json out{{"h1", r.h1}, {"h2", r.h2}, {"h3", r.h3}, {"h4_right", r.h4_right}, {"h4_left", r.h4_left},
           {"fixed_point_predicted", r.fixed_point_predicted}, {"failures", r.failures}};
  out["fixed_point"] = r.fixed_point ? encode(*r.fixed_point) : Json(nullptr);
  return out;
}

Json encode(const bricks::CircleDescriptor& c) {
  return {{"breaks", encode_points(c.breaks)}, {"level", encode(c.level)}, {"amplitude", encode(c.amplitude)}};
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    bad(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << text;
}

}  // namespace annulus::io
