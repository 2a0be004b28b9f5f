#pragma once

// Interpolating chains, the iterated-join reduction for commuting maps and
// the translation-line pipeline for Farey intervals.

#include <string>
#include <vector>

#include "annulus/farey.hpp"
#include "annulus/lines.hpp"
#include "annulus/maps.hpp"

namespace annulus::construction {

/// Commuting maps H_1..H_p with exponents q_1..q_p. A line G is of this type
/// when G < H_j^{q_j}(G) for every j.
struct TypeSpec {
  std::vector<LiftedMap> maps;
  std::vector<int> exponents;

  /// Validates lengths, positivity and pairwise commutation on sample points.
  static TypeSpec make(std::vector<LiftedMap> maps, std::vector<int> exponents);
};

/// True when compare(line, H_j^{q_j}(line)) is StrictlyLess for every j.
bool is_of_type(const TypeSpec& spec, const EssentialLine& line,
                size_t budget = LiftedMap::kDefaultBudget);

/// G_0 = seed < G_1 < ... < G_{q_1 - 1} < join_j H_j^{q_j}(seed), by
/// recursive midline bisection. Throws SeedNotOfType.
std::vector<EssentialLine> interpolate_chain(const TypeSpec& spec, const EssentialLine& seed,
                                             size_t budget = LiftedMap::kDefaultBudget);

/// One reduction of the first exponent to 1. Throws SeedNotOfType or
/// VerificationFailed.
EssentialLine lemma31_reduce(const TypeSpec& spec, const EssentialLine& seed,
                             size_t budget = LiftedMap::kDefaultBudget);

/// Applies the reduction to every coordinate in turn, reaching type (1, ..., 1).
EssentialLine reduce_to_unit_type(const TypeSpec& spec, const EssentialLine& seed,
                                  size_t budget = LiftedMap::kDefaultBudget);

struct DisjointnessCheck {
  int i = 0;
  int j = 0;
  long k = 0;  // compares F^i(G) with T^k F^j(G)
  OrderVerdict verdict = OrderVerdict::Crossing;
};

struct Certificate {
  std::string name;  // "Phi", "Psi", "T"
  OrderVerdict verdict = OrderVerdict::Crossing;
};

struct PipelineReport {
  EssentialLine line = EssentialLine::vertical(Rational(0));
  farey::FareyInterval farey;
  std::string seed_source;
  EssentialLine seed = EssentialLine::vertical(Rational(0));
  std::vector<EssentialLine> iterates;  // F^i(line), i = 0 .. q + q' - 1
  std::vector<Certificate> certificates;
  std::vector<DisjointnessCheck> disjointness;
  long deck_bound = 0;
  farey::CyclicOrder cyclic_order;
  farey::CyclicOrder reference_order;
};

struct PipelineOptions {
  int vertical_grid = 16;                  // seeds x = i / grid
  std::vector<EssentialLine> extra_seeds;  // tried after the verticals
  size_t budget = LiftedMap::kDefaultBudget;
};

/// Phi = T^{-p} F^q and Psi = T^{p'} F^{-q'} for the interval ]p/q, p'/q'[.
std::pair<LiftedMap, LiftedMap> farey_maps(const LiftedMap& map, const farey::FareyInterval& iv);

/// Throws NoSeedFound, VerificationFailed or NotDisjoint.
PipelineReport translation_line_pipeline(const LiftedMap& map, const farey::FareyInterval& iv,
                                         const PipelineOptions& options = {});

/// Cyclic order of the projections of `lines`; representatives are moved by
/// deck shifts into the strip between lines[0] and T(lines[0]). Throws
/// NotDisjoint naming the first pair (and shift) that meets.
farey::CyclicOrder verify_cyclic_order(const std::vector<EssentialLine>& lines, long deck_bound);

struct ReplayResult {
  bool ok = true;
  std::vector<std::string> mismatches;
};

/// Recomputes every verdict in the report from the stored line and the map.
ReplayResult replay(const PipelineReport& report, const LiftedMap& map);

}  // namespace annulus::construction
