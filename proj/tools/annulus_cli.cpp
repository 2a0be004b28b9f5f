// Command-line front end. Every run writes one JSON report (to --out or
// stdout) carrying the tool version and the resolved parameters.
//
// Exit status: 0 success, 1 invalid input, 2 computation error (the error is
// recorded in the report).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "annulus/bricks.hpp"
#include "annulus/construction.hpp"
#include "annulus/error.hpp"
#include "annulus/io.hpp"
#include "annulus/rotation.hpp"
#include "annulus/svg.hpp"

using namespace annulus;
using io::Json;

namespace {

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::BadResolution:
    case ErrorCode::NotEventuallyRigid:
    case ErrorCode::NotInvertible:
    case ErrorCode::NotSimple:
      return true;
    default:
      return false;
  }
}

Json load(const std::string& spec) {
  if (!spec.empty() && (spec.front() == '{' || spec.front() == '[')) {
    try {
      return Json::parse(spec);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::InvalidInput, std::string("inline JSON: ") + e.what());
    }
  }
  return io::read_json(spec);
}

Rational rat(const std::string& s) { return Rational::parse(s); }

struct Options {
  std::string out;
  std::string svg;
  std::string map;

  // rotset
  std::vector<std::string> band{"-1", "1"};
  int n = 1000;
  int grid = 8;
  int tail_start = -1;

  // periodic
  std::string target = "0";
  std::vector<std::string> window{"0", "1", "-1", "1"};
  std::string tol = "1/1000000000";
  int periodic_grid = 32;

  // translate-line
  std::vector<std::string> farey;
  int vertical_grid = 16;
  std::vector<std::string> seed_lines;

  // join
  std::string line_a, line_b;

  // bricks / franks
  std::vector<std::string> strip{"-1", "1"};
  std::string resolution = "1/10";
  int seed_row = -1;
  int seed_col = 0;
  bool t_union = false;
  long deck_range = 0;
  std::string graph;
  int max_power = 8;

  // free-circle
  std::vector<std::string> levels_range{"-1", "1"};
  int levels = 9;
  std::vector<std::string> amplitudes{"0", "1/4", "-1/4"};
  long budget = 1000;
};

LiftedMap load_map(const Options& o, Json& params) {
  if (o.map.empty()) throw Error(ErrorCode::InvalidInput, "--map is required");
  const MapDescriptor desc = io::decode_map(load(o.map));
  params["map"] = io::encode(desc);
  return LiftedMap::make(desc);
}

Json encode_strings_as_rationals(const std::vector<std::string>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(io::encode(rat(s)));
  return out;
}

Json run_rotset(const Options& o, Json& params) {
  const LiftedMap f = load_map(o, params);
  const Rational a = rat(o.band.at(0)), b = rat(o.band.at(1));
  params["band"] = {io::encode(a), io::encode(b)};
  params["n"] = o.n;
  params["grid"] = o.grid;
  std::optional<int> tail;
  if (o.tail_start >= 0) tail = o.tail_start;
  params["tail_start"] = tail ? Json(*tail) : Json(nullptr);
  return io::encode(rotation::weak_rotation_set(f, a, b, o.n, o.grid, tail));
}

Json run_periodic(const Options& o, Json& params) {
  const LiftedMap f = load_map(o, params);
  const Rational target = rat(o.target), tol = rat(o.tol);
  const rotation::Window w{rat(o.window.at(0)), rat(o.window.at(1)), rat(o.window.at(2)), rat(o.window.at(3))};
  params["target"] = io::encode(target);
  params["window"] = encode_strings_as_rationals(o.window);
  params["tol"] = io::encode(tol);
  params["grid"] = o.periodic_grid;
  const auto z = rotation::find_periodic_point(f, target, w, tol, o.periodic_grid);
  Json out{{"found", z.has_value()}};
  out["point"] = z ? io::encode(*z) : Json(nullptr);
  if (z) {
    const long p = target.num().get_si(), q = target.den().get_si();
    const Point image = f.power(q).apply(*z);
    out["residual"] = io::encode(maps::linf(image, {z->x + Rational(p), z->y}));
  }
  return out;
}

Json run_translate_line(const Options& o, Json& params) {
  const LiftedMap f = load_map(o, params);
  if (o.farey.size() != 2) throw Error(ErrorCode::InvalidInput, "--farey needs two rationals");
  const auto iv = farey::FareyInterval::make(rat(o.farey[0]), rat(o.farey[1]));
  construction::PipelineOptions opt;
  opt.vertical_grid = o.vertical_grid;
  Json seeds = Json::array();
  for (const auto& s : o.seed_lines) {
    opt.extra_seeds.push_back(io::decode_line(load(s)));
    seeds.push_back(io::encode(opt.extra_seeds.back()));
  }
  params["farey"] = {io::encode(iv.left), io::encode(iv.right)};
  params["vertical_grid"] = o.vertical_grid;
  params["seed_lines"] = seeds;
  const auto report = construction::translation_line_pipeline(f, iv, opt);
  const auto replay = construction::replay(report, f);
  Json out = io::encode(report);
  out["replay"] = {{"ok", replay.ok}, {"mismatches", replay.mismatches}};
  if (!o.svg.empty()) {
    const double x0 = Rational(report.line.tail_down().floor()).to_double();
    svg::View view{x0, x0 + 2, -1.5, 1.5};
    io::write_text(o.svg, svg::lines_figure(report.iterates, view));
  }
  return out;
}

Json run_join(const Options& o, Json& params) {
  if (o.line_a.empty() || o.line_b.empty()) throw Error(ErrorCode::InvalidInput, "--a and --b are required");
  const EssentialLine a = io::decode_line(load(o.line_a)), b = io::decode_line(load(o.line_b));
  params["a"] = io::encode(a);
  params["b"] = io::encode(b);
  const EssentialLine j = lines::join(a, b);
  Json out{{"join", io::encode(j)},
           {"compare_join_a", to_string(lines::compare(j, a))},
           {"compare_join_b", to_string(lines::compare(j, b))},
           {"compare_a_b", to_string(lines::compare(a, b))}};
  if (!o.svg.empty()) {
    svg::View view{std::floor(std::min(a.min_x(), b.min_x()).to_double()), 0, -2, 2};
    view.xhi = view.xlo + 2;
    io::write_text(o.svg, svg::lines_figure({a, b, j}, view));
  }
  return out;
}

bricks::BrickComplex merged_complex(const Options& o, const LiftedMap& f, Json& params, Json& out) {
  const Rational ylo = rat(o.strip.at(0)), yhi = rat(o.strip.at(1)), r = rat(o.resolution);
  params["strip"] = {io::encode(ylo), io::encode(yhi)};
  params["resolution"] = io::encode(r);
  const auto initial = bricks::build_decomposition(ylo, yhi, r);
  const auto t0 = bricks::check_trivalence(initial);
  const auto cx = bricks::maximal_free_merge(initial, f);
  const auto t1 = bricks::check_trivalence(cx);
  out["trivalence"] = {{"initial", {{"ok", t0.ok}, {"vertices", t0.vertices}, {"bad", t0.bad}}},
                       {"merged", {{"ok", t1.ok}, {"vertices", t1.vertices}, {"bad", t1.bad}}}};
  out["brick_count"] = {{"initial", initial.brick_count()}, {"merged", cx.brick_count()}};
  return cx;
}

Json run_bricks(const Options& o, Json& params) {
  const LiftedMap f = load_map(o, params);
  Json out;
  const auto cx = merged_complex(o, f, params, out);
  const int row = o.seed_row >= 0 ? o.seed_row : cx.rows / 2;
  if (row >= cx.rows || o.seed_col < 0 || o.seed_col >= cx.cols)
    throw Error(ErrorCode::InvalidInput, "seed cell outside the complex");
  const int seed = cx.brick_of[row * cx.cols + o.seed_col];
  params["seed_cell"] = {{"row", row}, {"col", o.seed_col}};
  params["t_union"] = o.t_union;
  std::optional<long> range;
  if (o.deck_range > 0) range = o.deck_range;
  const auto region = bricks::order_and_attractors(cx, f, seed, o.t_union, range);
  params["deck_range"] = region.deck_range;
  const auto extracted = bricks::extract_brouwer_lines(region, f);
  const auto graph = bricks::relation_graph(cx, f, 1, true);
  const auto stats = bricks::comparability_stats(cx, graph, region.deck_range);
  out["complex"] = io::encode(cx);
  out["region"] = io::encode(region);
  out["extracted"] = io::encode(extracted);
  out["comparability"] = {{"adjacent_pairs", stats.adjacent_pairs}, {"comparable", stats.comparable}};
  if (!o.svg.empty()) {
    svg::View view{0, 2, cx.ylo.to_double(), cx.yhi.to_double()};
    io::write_text(o.svg, svg::bricks_figure(cx, &region, extracted.lines, view));
  }
  return out;
}

Json run_franks(const Options& o, Json& params) {
  params["max_power"] = o.max_power;
  if (!o.graph.empty()) {
    const auto g = io::decode_graph(load(o.graph));
    params["graph"] = io::encode(g);
    return {{"search", io::encode(bricks::find_periodic_free_chain(g))}};
  }
  const LiftedMap f = load_map(o, params);
  Json out;
  const auto cx = merged_complex(o, f, params, out);
  out["search"] = io::encode(bricks::find_periodic_free_chain(cx, f, o.max_power));
  return out;
}

Json run_free_circle(const Options& o, Json& params) {
  const LiftedMap f = load_map(o, params);
  bricks::CircleFamily family;
  family.ylo = rat(o.levels_range.at(0));
  family.yhi = rat(o.levels_range.at(1));
  family.levels = o.levels;
  family.amplitudes.clear();
  for (const auto& a : o.amplitudes) family.amplitudes.push_back(rat(a));
  params["levels_range"] = {io::encode(family.ylo), io::encode(family.yhi)};
  params["levels"] = family.levels;
  params["amplitudes"] = encode_strings_as_rationals(o.amplitudes);
  params["budget"] = o.budget;
  const auto c = bricks::find_free_essential_circle(f, family, static_cast<size_t>(o.budget));
  Json out{{"found", c.has_value()}};
  out["circle"] = c ? io::encode(*c) : Json(nullptr);
  return out;
}

int emit(const Options& o, const Json& report) {
  const std::string text = report.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    try {
      io::write_text(o.out, text);
    } catch (const Error& e) {
      std::cerr << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact PL experiments with lifted annulus maps"};
  app.set_version_flag("--version", std::string(io::kVersion));
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_map) {
    sub->add_option("--out", o.out, "report path (default: stdout)");
    if (needs_map) sub->add_option("--map", o.map, "map descriptor: JSON file or inline JSON");
  };

  auto* rotset = app.add_subcommand("rotset", "weak rotation set over a band");
  common(rotset, true);
  rotset->add_option("--band", o.band, "band y-range")->expected(2);
  rotset->add_option("--n", o.n, "iterations per seed");
  rotset->add_option("--grid", o.grid, "seed lattice size");
  rotset->add_option("--tail-start", o.tail_start, "first iterate counted (default n/2)");

  auto* periodic = app.add_subcommand("periodic", "periodic point of rotation number p/q");
  common(periodic, true);
  periodic->add_option("--target", o.target, "p/q");
  periodic->add_option("--window", o.window, "xlo xhi ylo yhi")->expected(4);
  periodic->add_option("--tol", o.tol, "residual tolerance");
  periodic->add_option("--grid", o.periodic_grid, "scan grid");

  auto* tline = app.add_subcommand("translate-line", "line with pairwise disjoint projected iterates");
  common(tline, true);
  tline->add_option("--farey", o.farey, "Farey interval endpoints")->expected(2)->required();
  tline->add_option("--vertical-grid", o.vertical_grid, "vertical seeds x = i/grid");
  tline->add_option("--seed-line", o.seed_lines, "extra seed line (JSON file or inline)");
  tline->add_option("--svg", o.svg, "SVG output path");

  auto* join = app.add_subcommand("join", "join of two essential lines");
  common(join, false);
  join->add_option("--a", o.line_a, "first line (JSON file or inline)");
  join->add_option("--b", o.line_b, "second line (JSON file or inline)");
  join->add_option("--svg", o.svg, "SVG output path");

  auto* br = app.add_subcommand("bricks", "free brick decomposition, attractor and boundary lines");
  common(br, true);
  br->add_option("--strip", o.strip, "window y-range")->expected(2);
  br->add_option("--resolution", o.resolution, "row height, 1/resolution even");
  br->add_option("--seed-row", o.seed_row, "row of the seed cell (default: middle)");
  br->add_option("--seed-col", o.seed_col, "column of the seed cell");
  br->add_flag("--t-union", o.t_union, "use the union of all deck translates");
  br->add_option("--deck-range", o.deck_range, "deck translates explored (default: automatic)");
  br->add_option("--svg", o.svg, "SVG output path");

  auto* franks = app.add_subcommand("franks", "periodic free chain search");
  common(franks, true);
  franks->add_option("--graph", o.graph, "relation graph JSON instead of a map");
  franks->add_option("--strip", o.strip, "window y-range")->expected(2);
  franks->add_option("--resolution", o.resolution, "row height");
  franks->add_option("--max-power", o.max_power, "largest power in the relation");

  auto* circle = app.add_subcommand("free-circle", "search for an essential circle disjoint from its image");
  common(circle, true);
  circle->add_option("--levels-range", o.levels_range, "range of circle heights")->expected(2);
  circle->add_option("--levels", o.levels, "number of heights");
  circle->add_option("--amplitudes", o.amplitudes, "bump amplitudes");
  circle->add_option("--budget", o.budget, "maximum circles tested");

  Json report{{"tool", "annulus"}, {"version", io::kVersion}};
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report["command"] = nullptr;
    report["error"] = {{"code", "InvalidInput"}, {"message", e.what()}};
    std::cerr << e.what() << "\n";
    emit(o, report);
    return 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  report["command"] = sub->get_name();
  Json params = Json::object();
  int status = 0;
  try {
    Json result;
    if (sub == rotset) result = run_rotset(o, params);
    else if (sub == periodic) result = run_periodic(o, params);
    else if (sub == tline) result = run_translate_line(o, params);
    else if (sub == join) result = run_join(o, params);
    else if (sub == br) result = run_bricks(o, params);
    else if (sub == franks) result = run_franks(o, params);
    else result = run_free_circle(o, params);
    report["result"] = result;
  } catch (const Error& e) {
    status = is_input_error(e.code()) ? 1 : 2;
    report["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  } catch (const std::exception& e) {
    status = 1;
    report["error"] = {{"code", "InvalidInput"}, {"message", e.what()}};
  }
  report["params"] = params;
  const int written = emit(o, report);
  return status != 0 ? status : written;
}
