#include "annulus/construction.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "annulus/error.hpp"
#include "annulus/parallel.hpp"

namespace annulus::construction {

namespace {

std::vector<Point> commutation_probes() {
  std::vector<Point> pts;
  for (int i = -3; i <= 3; ++i)
    for (int j = -3; j <= 3; ++j) pts.push_back({Rational(2 * i + 1, 7), Rational(3 * j, 5)});
  return pts;
}

EssentialLine deck(const EssentialLine& line, long k) {
  return line.translated({Rational(k), Rational(0)});
}

// Places `count` lines strictly between lo < hi by recursive bisection.
void bisect_between(const EssentialLine& lo, const EssentialLine& hi, int count,
                    std::vector<EssentialLine>& out) {
  if (count <= 0) return;
  const EssentialLine mid = lines::midline(lo, hi);
  const int left = (count - 1) / 2;
  bisect_between(lo, mid, left, out);
  out.push_back(mid);
  bisect_between(mid, hi, count - 1 - left, out);
}

TypeSpec rotated_to_front(const TypeSpec& spec, size_t k) {
  TypeSpec out = spec;
  std::swap(out.maps[0], out.maps[k]);
  std::swap(out.exponents[0], out.exponents[k]);
  return out;
}

bool strictly_less(const EssentialLine& a, const EssentialLine& b) {
  return lines::compare(a, b) == OrderVerdict::StrictlyLess;
}

long deck_bound_for(const LiftedMap& map, long steps) {
  const Rational span = Rational(steps) * map.displacement_bound();
  mpz_class c = span.floor();
  if (Rational(mpq_class(c)) < span) c += 1;
  return c.get_si() + 1;
}

}  // namespace

TypeSpec TypeSpec::make(std::vector<LiftedMap> maps, std::vector<int> exponents) {
  if (maps.empty() || maps.size() != exponents.size())
    throw Error(ErrorCode::InvalidInput, "type needs one exponent per map");
  for (int q : exponents)
    if (q < 1) throw Error(ErrorCode::InvalidInput, "exponents must be positive");
  const auto probes = commutation_probes();
  for (size_t a = 0; a < maps.size(); ++a)
    for (size_t b = a + 1; b < maps.size(); ++b)
      for (const Point& z : probes)
        if (maps[a].apply(maps[b].apply(z)) != maps[b].apply(maps[a].apply(z)))
          throw Error(ErrorCode::InvalidInput, "maps " + std::to_string(a) + " and " +
                                                   std::to_string(b) + " do not commute");
  return TypeSpec{std::move(maps), std::move(exponents)};
}

bool is_of_type(const TypeSpec& spec, const EssentialLine& line, size_t budget) {
  for (size_t j = 0; j < spec.maps.size(); ++j)
    if (!strictly_less(line, spec.maps[j].power(spec.exponents[j]).apply_to_line(line, budget)))
      return false;
  return true;
}

std::vector<EssentialLine> interpolate_chain(const TypeSpec& spec, const EssentialLine& seed,
                                             size_t budget) {
  std::vector<EssentialLine> images;
  for (size_t j = 0; j < spec.maps.size(); ++j) {
    images.push_back(spec.maps[j].power(spec.exponents[j]).apply_to_line(seed, budget));
    if (!strictly_less(seed, images.back()))
      throw Error(ErrorCode::SeedNotOfType, "seed is not below H_" + std::to_string(j + 1) +
                                                "^" + std::to_string(spec.exponents[j]) +
                                                " of itself");
  }
  const EssentialLine top = lines::join_all(images);
  std::vector<EssentialLine> chain{seed};
  bisect_between(seed, top, spec.exponents[0] - 1, chain);
  return chain;
}

EssentialLine lemma31_reduce(const TypeSpec& spec, const EssentialLine& seed, size_t budget) {
  const auto chain = interpolate_chain(spec, seed, budget);
  const int q1 = spec.exponents[0];
  std::vector<EssentialLine> shifted;
  for (int i = 0; i < q1; ++i)
    shifted.push_back(spec.maps[0].power(q1 - i).apply_to_line(chain[i], budget));
  const EssentialLine out = lines::join_all(shifted);

  if (!strictly_less(out, spec.maps[0].apply_to_line(out, budget)))
    throw Error(ErrorCode::VerificationFailed, "reduced line is not below its H_1 image");
  for (size_t j = 1; j < spec.maps.size(); ++j)
    if (!strictly_less(out, spec.maps[j].power(spec.exponents[j]).apply_to_line(out, budget)))
      throw Error(ErrorCode::VerificationFailed,
                  "reduced line lost the H_" + std::to_string(j + 1) + " condition");
  return out;
}

EssentialLine reduce_to_unit_type(const TypeSpec& spec, const EssentialLine& seed, size_t budget) {
  TypeSpec cur = spec;
  EssentialLine line = seed;
  for (size_t k = 0; k < cur.maps.size(); ++k) {
    if (cur.exponents[k] == 1) continue;
    line = lemma31_reduce(rotated_to_front(cur, k), line, budget);
    cur.exponents[k] = 1;
  }
  if (!is_of_type(cur, line, budget))
    throw Error(ErrorCode::VerificationFailed, "final line is not of unit type");
  return line;
}

std::pair<LiftedMap, LiftedMap> farey_maps(const LiftedMap& map, const farey::FareyInterval& iv) {
  const long p = iv.left.num().get_si(), q = iv.left.den().get_si();
  const long pp = iv.right.num().get_si(), qq = iv.right.den().get_si();
  const MapDescriptor& f = map.descriptor();
  LiftedMap phi = LiftedMap::make(MapDescriptor::compose({MapDescriptor::deck(-p), MapDescriptor::power(f, q)}));
  LiftedMap psi = LiftedMap::make(MapDescriptor::compose({MapDescriptor::deck(pp), MapDescriptor::power(f, -qq)}));
  return {std::move(phi), std::move(psi)};
}

farey::CyclicOrder verify_cyclic_order(const std::vector<EssentialLine>& lines, long deck_bound) {
  const int n = static_cast<int>(lines.size());
  if (n == 0) throw Error(ErrorCode::InvalidInput, "no lines to order");
  auto meets = [](OrderVerdict v) {
    return v != OrderVerdict::StrictlyLess && v != OrderVerdict::StrictlyGreater;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (long k = -deck_bound; k <= deck_bound; ++k) {
        if (i == j && k == 0) continue;
        if (meets(lines::compare(lines[i], deck(lines[j], k))))
          throw Error(ErrorCode::NotDisjoint, "line " + std::to_string(i) + " meets line " +
                                                  std::to_string(j) + " shifted by " +
                                                  std::to_string(k));
      }

  // Representatives in the strip between lines[0] and T(lines[0]).
  const EssentialLine& base = lines[0];
  const EssentialLine next = deck(base, 1);
  std::vector<EssentialLine> reps{base};
  for (int i = 1; i < n; ++i) {
    std::optional<EssentialLine> rep;
    for (long k = -deck_bound - 1; k <= deck_bound + 1 && !rep; ++k) {
      EssentialLine c = deck(lines[i], k);
      if (strictly_less(base, c) && strictly_less(c, next)) rep = std::move(c);
    }
    if (!rep)
      throw Error(ErrorCode::NotDisjoint, "line " + std::to_string(i) +
                                              " has no translate between line 0 and its deck image");
    reps.push_back(std::move(*rep));
  }
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return a != b && strictly_less(reps[a], reps[b]); });
  return farey::CyclicOrder::canonical(idx);
}

PipelineReport translation_line_pipeline(const LiftedMap& map, const farey::FareyInterval& iv,
                                         const PipelineOptions& options) {
  if (!farey::is_farey_interval(iv.left, iv.right))
    throw Error(ErrorCode::InvalidInput, "not a Farey interval");
  const long q = iv.left.den().get_si();
  const long qq = iv.right.den().get_si();
  const auto [phi, psi] = farey_maps(map, iv);
  const LiftedMap t = LiftedMap::translation(Rational(1));
  const TypeSpec spec = TypeSpec::make({phi, psi, t}, {static_cast<int>(qq), static_cast<int>(q), 1});

  std::vector<std::pair<std::string, EssentialLine>> family;
  for (int i = 0; i < options.vertical_grid; ++i)
    family.emplace_back("vertical x=" + Rational(i, options.vertical_grid).str(),
                        EssentialLine::vertical(Rational(i, options.vertical_grid)));
  for (size_t i = 0; i < options.extra_seeds.size(); ++i)
    family.emplace_back("extra seed " + std::to_string(i), options.extra_seeds[i]);

  std::vector<char> ok(family.size(), 0);
  parallel_for(family.size(), [&](size_t s) {
    try {
      ok[s] = is_of_type(spec, family[s].second, options.budget);
    } catch (const Error&) {
      ok[s] = 0;
    }
  });
  const auto hit = std::find(ok.begin(), ok.end(), 1);
  if (hit == ok.end())
    throw Error(ErrorCode::NoSeedFound, "no seed of type (" + std::to_string(qq) + ", " +
                                            std::to_string(q) + ", 1) among " +
                                            std::to_string(family.size()) + " candidates");
  const size_t chosen = static_cast<size_t>(hit - ok.begin());

  PipelineReport report;
  report.farey = iv;
  report.seed_source = family[chosen].first;
  report.seed = family[chosen].second;
  report.line = reduce_to_unit_type(spec, report.seed, options.budget);
  report.certificates = {
      {"Phi", lines::compare(report.line, phi.apply_to_line(report.line, options.budget))},
      {"Psi", lines::compare(report.line, psi.apply_to_line(report.line, options.budget))},
      {"T", lines::compare(report.line, deck(report.line, 1))}};

  const int count = static_cast<int>(q + qq);
  report.iterates.push_back(report.line);
  for (int i = 1; i < count; ++i)
    report.iterates.push_back(map.apply_to_line(report.iterates.back(), options.budget));
  report.deck_bound = deck_bound_for(map, count);
  for (int i = 0; i < count; ++i)
    for (int j = i; j < count; ++j)
      for (long k = -report.deck_bound; k <= report.deck_bound; ++k) {
        if (i == j && k == 0) continue;
        report.disjointness.push_back(
            {i, j, k, lines::compare(report.iterates[i], deck(report.iterates[j], k))});
      }
  for (const auto& c : report.disjointness)
    if (c.verdict != OrderVerdict::StrictlyLess && c.verdict != OrderVerdict::StrictlyGreater)
      throw Error(ErrorCode::VerificationFailed,
                  "iterates " + std::to_string(c.i) + " and " + std::to_string(c.j) +
                      " meet under shift " + std::to_string(c.k));
  report.cyclic_order = verify_cyclic_order(report.iterates, report.deck_bound);
  report.reference_order = farey::rotation_cyclic_order(iv.mediant(), count - 1);
  return report;
}

ReplayResult replay(const PipelineReport& report, const LiftedMap& map) {
  ReplayResult res;
  auto fail = [&](std::string msg) {
    res.ok = false;
    res.mismatches.push_back(std::move(msg));
  };
  const auto [phi, psi] = farey_maps(map, report.farey);
  for (const auto& c : report.certificates) {
    OrderVerdict v = OrderVerdict::Crossing;
    if (c.name == "Phi") v = lines::compare(report.line, phi.apply_to_line(report.line));
    else if (c.name == "Psi") v = lines::compare(report.line, psi.apply_to_line(report.line));
    else if (c.name == "T") v = lines::compare(report.line, deck(report.line, 1));
    else fail("unknown certificate " + c.name);
    if (v != c.verdict) fail("certificate " + c.name + " recomputes to " + to_string(v));
    if (v != OrderVerdict::StrictlyLess) fail("certificate " + c.name + " is not strict");
  }
  if (report.iterates.empty() || report.iterates.front() != report.line)
    fail("iterate list does not start at the line");
  for (size_t i = 1; i < report.iterates.size(); ++i)
    if (map.apply_to_line(report.iterates[i - 1]) != report.iterates[i])
      fail("iterate " + std::to_string(i) + " is not the image of its predecessor");
  for (const auto& c : report.disjointness) {
    const OrderVerdict v =
        lines::compare(report.iterates.at(c.i), deck(report.iterates.at(c.j), c.k));
    if (v != c.verdict)
      fail("check (" + std::to_string(c.i) + "," + std::to_string(c.j) + "," +
           std::to_string(c.k) + ") recomputes to " + to_string(v));
  }
  try {
    if (verify_cyclic_order(report.iterates, report.deck_bound) != report.cyclic_order)
      fail("cyclic order differs on replay");
  } catch (const Error& e) {
    fail(e.what());
  }
  return res;
}

}  // namespace annulus::construction
