#pragma once

// JSON encoding of lines, map descriptors and module reports. Rationals are
// written as "p/q" strings; on input plain integers and decimal strings are
// accepted as well.

#include <json.hpp>

#include <string>

#include "annulus/bricks.hpp"
#include "annulus/construction.hpp"
#include "annulus/lines.hpp"
#include "annulus/maps.hpp"
#include "annulus/rotation.hpp"

namespace annulus::io {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

Json encode(const Rational& r);
Rational decode_rational(const Json& j);

Json encode(const Point& p);
Point decode_point(const Json& j);

Json encode(const EssentialLine& line);
EssentialLine decode_line(const Json& j);

Json encode(const MapDescriptor& desc);
/// Throws InvalidInput on unknown keys or malformed nodes.
MapDescriptor decode_map(const Json& j);

Json encode(const Polygon& poly);
Polygon decode_polygon(const Json& j);

Json encode(const rotation::RotationEstimate& est);
Json encode(const construction::PipelineReport& report);

Json encode(const bricks::BrickComplex& complex);
Json encode(const bricks::RegionReport& report);
Json encode(const bricks::ExtractResult& result);
Json encode(const bricks::ChainSearch& search);
Json encode(const bricks::RelationGraph& graph);
bricks::RelationGraph decode_graph(const Json& j);
Json encode(const bricks::Lemma41Report& report);
Json encode(const bricks::CircleDescriptor& circle);

/// Throws InvalidInput when the file is missing or not JSON.
Json read_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace annulus::io
