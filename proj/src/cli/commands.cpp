#include "commands.hpp"

#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace skewlab::cli {
namespace {

IntMatrix2 matrix(const std::array<std::int64_t, 4>& m) { return {m[0], m[1], m[2], m[3]}; }
TorusPoint2 point(const std::array<double, 2>& p) { return {p[0], p[1]}; }
TorusPoint4 point4(const std::array<double, 4>& p) { return {{p[0], p[1]}, {p[2], p[3]}}; }
Json pt(const TorusPoint2& p) { return Json::array({p.x(), p.y()}); }
Json pt(const TorusPoint4& p) { return Json::array({p.base.x(), p.base.y(), p.fiber.x(), p.fiber.y()}); }

Json chain_json(const RotationChain& c) {
  Json out = Json::array();
  for (const auto& r : c.rotations())
    out.push_back(Json{{"center", pt(r.center())}, {"rho", r.rho()}, {"theta", r.theta()}});
  return out;
}

SearchOptions search_options(const SearchSpec& s, std::uint64_t run_seed) {
  SearchOptions o;
  o.grid = s.grid;
  o.rho = s.rho;
  o.theta_max = s.theta_max;
  o.budget = s.budget;
  o.seed = s.seed.value_or(run_seed);
  o.check.angle_tol = s.angle_tol;
  o.check.refine_levels = s.refine_levels;
  return o;
}

Json report_json(const IntersectionReport& r) {
  return Json{{"empty", r.empty},
              {"angle_tol", r.angle_tol},
              {"witness_count", r.witnesses.size()},
              {"min_separation", r.min_separation},
              {"argmin", pt(r.argmin)},
              {"refined_cells", r.refined_cells},
              {"evaluated_points", r.evaluated_points}};
}

std::string witnesses_csv(const IntersectionReport& r) {
  CsvWriter csv({"x", "y", "w", "v1", "v2", "v3", "separation"});
  for (const auto& w : r.witnesses)
    csv.row({num(w.x.x()), num(w.x.y()), num(w.w.angle()), num(w.v[0].angle()),
             num(w.v[1].angle()), num(w.v[2].angle()), num(w.separation)});
  return csv.str();
}

Json search_json(const SearchResult& s, const SearchOptions& o) {
  Json h = Json::array();
  for (const auto& c : s.h) h.push_back(chain_json(c));
  return Json{{"success", s.success},
              {"trial", s.trial},
              {"trials_run", s.trials_run},
              {"budget", o.budget},
              {"seed", o.seed},
              {"grid", o.grid},
              {"rho", o.rho},
              {"theta_max", o.theta_max},
              {"angle_bound", s.angle_bound},
              {"report", report_json(s.report)},
              {"h", h}};
}

struct Built {
  std::shared_ptr<const SkewProductSystem> f;  // null when a search failed
  bool broken = false;
  TorusPoint2 p_u;
  std::array<TorusPoint2, 3> q;
  std::array<double, 3> t{};
  std::array<int, 3> transport_depth{};
  std::array<RotationChain, 3> h;
  std::optional<SearchResult> search;
  SearchOptions search_opts;
};

// `diagnose` skips the domination check so that verify can report it.
Built build(RunContext& ctx, bool diagnose = false) {
  auto scope = ctx.timings.scope("build_system");
  const Config& cfg = ctx.config;
  const SystemSpec& s = cfg.system;
  std::vector<Perturbation> perts;
  for (const auto& p : s.perturbations) {
    if (!(p.gate_radius > 0.0)) throw InvalidArgument("perturbation gate radius must be positive");
    perts.emplace_back(FiberPerturbation{BaseGate{point(p.gate_center), p.gate_radius},
                                         make_chain(p.rotations)});
  }
  SkewProductSystem sys(matrix(s.base), matrix(s.fiber), std::move(perts),
                        s.check_domination && !diagnose);
  Built b;
  if (!s.rigidity_breaking) {
    b.f = std::make_shared<const SkewProductSystem>(std::move(sys));
    ctx.system_hash = b.f->hash();
    return b;
  }
  const RigiditySpec& rb = *s.rigidity_breaking;
  RigidityOptions ro;
  ro.gate_radius = rb.gate_radius;
  ro.orbit_depth = rb.orbit_depth;
  b.broken = true;
  b.p_u = point(rb.p_u);
  b.t = rb.t ? *rb.t : find_leaf_parameters(sys, b.p_u, ro);
  for (int i = 0; i < 3; ++i) b.q[i] = leaf_point(sys, Leaf::unstable, b.p_u, b.t[i]);
  if (rb.h) {
    for (int i = 0; i < 3; ++i) b.h[i] = make_chain((*rb.h)[i]);
  } else {
    auto ref = std::make_shared<const SkewProductSystem>(sys);
    b.search_opts = search_options(rb.search, cfg.seed);
    const AngleFields fields = angle_fields(ref, b.p_u, b.q, rb.search.field_resolution);
    auto search_scope = ctx.timings.scope("search");
    b.search = search_perturbation(fields.w, fields.v[0], fields.v[1], fields.v[2], b.search_opts);
    if (!b.search->success) return b;
    b.h = b.search->h;
  }
  RigidityBreaking r = build_rigidity_breaking(sys, b.p_u, b.q, b.h, rb.holonomy_tol, ro);
  b.transport_depth = r.transport_depth;
  b.f = std::make_shared<const SkewProductSystem>(std::move(r.system));
  ctx.system_hash = b.f->hash();
  return b;
}

const SkewProductSystem& require_system(const Built& b) {
  if (!b.f)
    throw NonConvergence("perturbation search exhausted its budget without an empty intersection",
                         b.search ? b.search->report.min_separation : 0.0);
  return *b.f;
}

Json ineq_json(const Inequality& q) {
  return Json{{"name", q.name}, {"lhs", q.lhs},   {"rhs", q.rhs},
              {"strict", q.strict}, {"holds", q.holds}, {"margin", q.margin}};
}

Json bounds_json(const RateBounds& r) { return Json{{"lo", r.lo}, {"hi", r.hi}}; }

int cmd_verify(RunContext& ctx) {
  const Built b = build(ctx, true);
  const SkewProductSystem& f = require_system(b);
  const VerifySpec& v = ctx.config.verify;
  CsvWriter csv({"grid", "points", "ss_lo", "ss_hi", "ws_lo", "ws_hi", "wu_lo", "wu_hi", "uu_lo",
                 "uu_hi", "a", "b", "c", "bunching_margin_1", "bunching_margin_2", "ratio_lhs",
                 "ratio_rhs"});
  Json grids = Json::array();
  bool a = true, bb = true, c = true;
  for (int n : v.grids) {
    GridOptions go;
    go.n = n;
    go.random_offset = v.random_offset;
    go.seed = ctx.config.seed;
    go.splitting.max_iter = v.max_iter;
    go.splitting.tol = v.tol;
    ConditionReport rep;
    {
      auto scope = ctx.timings.scope("expansion_rates");
      rep = verify_conditions(expansion_rates(f, go));
    }
    a = a && rep.a;
    bb = bb && rep.b;
    c = c && rep.c;
    const auto& B = rep.bounds;
    Json ord = Json::array(), bun = Json::array();
    for (const auto& q : rep.ordering) ord.push_back(ineq_json(q));
    for (const auto& q : rep.bunching) bun.push_back(ineq_json(q));
    grids.push_back(Json{{"grid", n},
                         {"points", B.points},
                         {"bounds",
                          {{"ss", bounds_json(B.ss)},
                           {"ws", bounds_json(B.ws)},
                           {"wu", bounds_json(B.wu)},
                           {"uu", bounds_json(B.uu)}}},
                         {"a", rep.a},
                         {"b", rep.b},
                         {"c", rep.c},
                         {"ordering", ord},
                         {"bunching", bun},
                         {"ratio", ineq_json(rep.ratio)}});
    csv.row({std::to_string(n), std::to_string(B.points), num(B.ss.lo), num(B.ss.hi), num(B.ws.lo),
             num(B.ws.hi), num(B.wu.lo), num(B.wu.hi), num(B.uu.lo), num(B.uu.hi),
             rep.a ? "1" : "0", rep.b ? "1" : "0", rep.c ? "1" : "0",
             num(rep.bunching[0].margin), num(rep.bunching[1].margin), num(rep.ratio.lhs),
             num(rep.ratio.rhs)});
  }
  const bool pass = a && bb && c;
  ctx.out.write_json("conditions.json", Json{{"system", f.describe()},
                                             {"sampled_bounds", true},
                                             {"a", a},
                                             {"b", bb},
                                             {"c", c},
                                             {"pass", pass},
                                             {"grids", grids}});
  ctx.out.write("conditions.csv", csv.str());
  if (pass) return 0;
  std::string failed;
  if (!a) failed += " (a)";
  if (!bb) failed += " (b)";
  if (!c) failed += " (c)";
  ctx.message = "conditions failed:" + failed;
  return 3;
}

struct HolonomyRow {
  std::string kind;
  TorusPoint2 p, q, x;
  double t = std::nan("");
  HolonomyResult r;
  double ratio = std::nan("");
  std::string error;
};

int cmd_holonomy(RunContext& ctx) {
  const Built b = build(ctx);
  const SkewProductSystem& f = require_system(b);
  const HolonomySpec& hs = ctx.config.holonomy;
  HolonomyOptions ho;
  ho.tol = hs.tol;
  ho.max_depth = hs.max_depth;
  ho.min_depth = hs.min_depth;

  const std::size_t n_random = hs.triples;
  std::vector<HolonomyRow> rows(n_random + hs.rows.size());
  const CounterRng rng(ctx.config.seed, 0x686f6c6fULL);
  for (std::size_t k = 0; k < n_random; ++k) {
    HolonomyRow& row = rows[k];
    row.kind = "random";
    row.p = TorusPoint2(rng.uniform(5 * k), rng.uniform(5 * k + 1));
    row.t = (rng.uniform(5 * k + 2) - 0.5) * hs.leaf_span;
    row.q = leaf_point(f, Leaf::unstable, row.p, row.t);
    row.x = TorusPoint2(rng.uniform(5 * k + 3), rng.uniform(5 * k + 4));
  }
  for (std::size_t k = 0; k < hs.rows.size(); ++k) {
    HolonomyRow& row = rows[n_random + k];
    row.kind = "explicit";
    row.p = point(hs.rows[k].p);
    row.q = point(hs.rows[k].q);
    row.x = point(hs.rows[k].x);
  }
  {
    auto scope = ctx.timings.scope("holonomy");
    parallel_chunks(rows.size(), 4, 0, [&](std::size_t lo, std::size_t hi, std::size_t) {
      for (std::size_t k = lo; k < hi; ++k) {
        HolonomyRow& row = rows[k];
        try {
          if (row.kind == "explicit") row.t = leaf_parameter(f, Leaf::unstable, row.p, row.q);
          row.r = holonomy_along(f, Leaf::unstable, row.p, 0.0, row.t, row.x, ho);
          row.ratio = fit_geometric_ratio(row.r.increments);
        } catch (const NotOnLeaf& e) {
          row.error = e.what();
        }
      }
    });
  }

  CsvWriter csv({"row", "kind", "p_x", "p_y", "q_x", "q_y", "t", "x_x", "x_y", "h_x", "h_y",
                 "depth", "last_increment", "converged", "certified", "displacement", "ratio",
                 "error"});
  std::vector<double> envelope;
  std::size_t errors = 0, unconverged = 0, uncertified = 0;
  int max_depth = 0;
  double max_disp = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const HolonomyRow& row = rows[k];
    std::vector<std::string> cells{std::to_string(k), row.kind, num(row.p.x()), num(row.p.y()),
                                   num(row.q.x()),    num(row.q.y()), num(row.t), num(row.x.x()),
                                   num(row.x.y())};
    if (!row.error.empty()) {
      ++errors;
      cells.insert(cells.end(), {"", "", "", "", "", "", "", "", row.error});
      csv.row(cells);
      continue;
    }
    const auto& r = row.r;
    const double disp = torus_dist(r.point, row.x);
    max_disp = std::max(max_disp, disp);
    max_depth = std::max(max_depth, r.depth);
    if (!r.converged) ++unconverged;
    if (!r.certified) ++uncertified;
    if (envelope.size() < r.increments.size()) envelope.resize(r.increments.size(), 0.0);
    for (std::size_t i = 0; i < r.increments.size(); ++i)
      envelope[i] = std::max(envelope[i], r.increments[i]);
    cells.insert(cells.end(),
                 {num(r.point.x()), num(r.point.y()), std::to_string(r.depth),
                  num(r.increments.empty() ? 0.0 : r.increments.back()), r.converged ? "1" : "0",
                  r.certified ? "1" : "0", num(disp), num(row.ratio), ""});
    csv.row(cells);
  }
  ctx.warnings += int(errors);
  ctx.out.write("holonomy.csv", csv.str());
  ctx.out.write_json("holonomy_summary.json",
                     Json{{"rows", rows.size()},
                          {"random_rows", n_random},
                          {"explicit_rows", hs.rows.size()},
                          {"errors", errors},
                          {"unconverged", unconverged},
                          {"uncertified", uncertified},
                          {"max_depth", max_depth},
                          {"max_displacement", max_disp},
                          {"envelope", envelope},
                          {"envelope_ratio", fit_geometric_ratio(envelope)},
                          {"tol", ho.tol}});
  if (unconverged == 0) return 0;
  ctx.message = std::to_string(unconverged) + " holonomies did not converge";
  return 4;
}

struct Geometry {
  TorusPoint2 p_u;
  std::array<TorusPoint2, 3> q;
  std::array<double, 3> t;
};

Geometry leaf_geometry(const RunContext& ctx, const Built& b, const SkewProductSystem& f) {
  if (b.broken) return {b.p_u, b.q, b.t};
  const TransversalitySpec& ts = ctx.config.transversality;
  Geometry g;
  g.p_u = point(ts.p_u);
  g.t = ts.t ? *ts.t : find_leaf_parameters(f, g.p_u);
  for (int i = 0; i < 3; ++i) g.q[i] = leaf_point(f, Leaf::unstable, g.p_u, g.t[i]);
  return g;
}

int cmd_transversality(RunContext& ctx) {
  const Built b = build(ctx);
  const SkewProductSystem& f = require_system(b);
  const TransversalitySpec& ts = ctx.config.transversality;
  const Geometry g = leaf_geometry(ctx, b, f);

  AlphaMinResult am;
  {
    auto scope = ctx.timings.scope("alpha_min");
    am = alpha_min(f, g.p_u, g.q, ts.grid);
  }
  Json profiles = Json::array();
  CsvWriter prof_csv({"q_index", "t", "alpha"});
  {
    auto scope = ctx.timings.scope("alpha_profile");
    for (int i = 0; i < 3; ++i) {
      const AlphaProfile p =
          alpha_leaf_profile(f, g.p_u, g.t[i], am.argmin, ts.profile_half_width, ts.profile_steps);
      profiles.push_back(Json{{"q_index", i},
                              {"t_center", g.t[i]},
                              {"value", p.center_value},
                              {"half_value_interval", Json::array({p.lo, p.hi})}});
      for (std::size_t k = 0; k < p.t.size(); ++k)
        prof_csv.row({std::to_string(i), num(p.t[k]), num(p.alpha[k])});
    }
  }
  Json q = Json::array();
  for (const auto& qi : g.q) q.push_back(pt(qi));
  ctx.out.write_json("alpha.json", Json{{"grid", am.n},
                                        {"p_u", pt(g.p_u)},
                                        {"q", q},
                                        {"t", g.t},
                                        {"alpha_min", am.alpha_min},
                                        {"argmin", pt(am.argmin)},
                                        {"alpha_max", am.alpha_max},
                                        {"per_q_max", am.per_q_max},
                                        {"positive", am.alpha_min > 0.0},
                                        {"profiles", profiles}});
  ctx.out.write("alpha_profile.csv", prof_csv.str());

  auto fs = b.f;
  IntersectionReport rep;
  {
    auto scope = ctx.timings.scope("intersection");
    const AngleFields fields = angle_fields(fs, g.p_u, g.q, ts.field_resolution);
    IntersectionOptions io;
    io.angle_tol = ts.angle_tol;
    rep = check_empty_intersection(fields.w, fields.v[0], fields.v[1], fields.v[2], io);
  }
  Json ij = report_json(rep);
  ij["field_resolution"] = ts.field_resolution;
  ctx.out.write_json("intersection.json", ij);
  ctx.out.write("witnesses.csv", witnesses_csv(rep));

  if (!ts.search) return 0;
  const SearchOptions so = search_options(ts.search_options, ctx.config.seed);
  SearchResult sr;
  {
    auto scope = ctx.timings.scope("search");
    const AngleFields fields = angle_fields(fs, g.p_u, g.q, ts.search_options.field_resolution);
    sr = search_perturbation(fields.w, fields.v[0], fields.v[1], fields.v[2], so);
  }
  ctx.out.write_json("search.json", search_json(sr, so));
  ctx.out.write("search_witnesses.csv", witnesses_csv(sr.report));
  if (sr.success) return 0;
  ctx.message = "search exhausted its budget without an empty intersection";
  return 4;
}

int cmd_ugibbs(RunContext& ctx) {
  const Built b = build(ctx);
  const SkewProductSystem& f = require_system(b);
  const UgibbsSpec& us = ctx.config.ugibbs;
  std::vector<TorusPoint4> seeds;
  for (const auto& s : us.seeds) seeds.push_back(point4(s));
  UniquenessOptions uo;
  uo.schedule = us.schedule;
  uo.samples = us.samples;
  uo.threshold_multi = us.threshold_multi;
  uo.threshold_single = us.threshold_single;
  uo.seed = ctx.config.seed;
  uo.bins = us.bins;
  uo.leaf_length = us.leaf_length;
  uo.holonomy = us.holonomy;
  UniquenessReport rep;
  {
    auto scope = ctx.timings.scope("uniqueness_probe");
    rep = uniqueness_probe(f, seeds, uo);
  }
  CsvWriter csv({"n", "i", "j", "tv"});
  for (std::size_t s = 0; s < rep.schedule.size(); ++s)
    for (std::size_t i = 0; i < seeds.size(); ++i)
      for (std::size_t j = i + 1; j < seeds.size(); ++j)
        csv.row({std::to_string(rep.schedule[s]), std::to_string(i), std::to_string(j),
                 num(rep.distances[s][i][j])});
  Json seeds_json = Json::array();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const EmpiricalMeasure& mu = rep.measures[i].back();
    const SuTorusResult su = su_torus_detect(mu.fiber_marginal());
    Json atoms = Json::array();
    for (const auto& a : su.atoms)
      atoms.push_back(Json{{"bin", Json::array({a.i, a.j})}, {"weight", a.weight}});
    seeds_json.push_back(Json{{"point", pt(seeds[i])},
                              {"bins", mu.bins()},
                              {"cluster", rep.cluster_of[i]},
                              {"su_torus", {{"detected", su.detected}, {"mass", su.mass}, {"atoms", atoms}}}});
    if (us.histograms) {
      std::ostringstream c, u;
      write_histogram_csv(c, mu);
      write_ugh1(u, mu);
      ctx.out.write("hist_seed" + std::to_string(i) + ".csv", c.str());
      ctx.out.write("hist_seed" + std::to_string(i) + ".ugh", u.str());
    }
  }
  ctx.out.write_json("uniqueness.json", Json{{"verdict", verdict_name(rep.verdict)},
                                             {"clusters", rep.clusters},
                                             {"schedule", rep.schedule},
                                             {"samples", us.samples},
                                             {"threshold_multi", us.threshold_multi},
                                             {"threshold_single", us.threshold_single},
                                             {"final_distances", rep.distances.back()},
                                             {"seeds", seeds_json}});
  ctx.out.write("distances.csv", csv.str());
  return 0;
}

int cmd_density(RunContext& ctx) {
  const Built b = build(ctx);
  const SkewProductSystem& f = require_system(b);
  const DensitySpec& ds = ctx.config.density;
  DensityOptions o;
  o.epsilon = ds.epsilon;
  o.m_max = ds.m_max;
  o.samples = ds.samples;
  o.seed = ctx.config.seed;
  o.leaf_length = ds.leaf_length;
  o.holonomy = ds.holonomy;
  DensityReport rep;
  {
    auto scope = ctx.timings.scope("density_probe");
    rep = density_probe(f, point4(ds.seed_point), o);
  }
  CsvWriter csv({"m", "coverage"});
  for (std::size_t j = 0; j < rep.coverage.size(); ++j)
    csv.row({std::to_string(j), num(rep.coverage[j])});
  ctx.out.write_json("density.json", Json{{"epsilon", rep.epsilon},
                                          {"cells_per_factor", rep.cells_per_factor},
                                          {"samples", ds.samples},
                                          {"m_max", ds.m_max},
                                          {"seed_point", ds.seed_point},
                                          {"first_full", rep.first_full >= 0 ? Json(rep.first_full) : Json(nullptr)},
                                          {"final_coverage", rep.coverage.back()}});
  ctx.out.write("coverage.csv", csv.str());
  return 0;
}

void emit_rotations(YAML::Emitter& e, const RotationChain& c) {
  e << YAML::BeginSeq;
  for (const auto& r : c.rotations())
    e << YAML::Flow << YAML::BeginMap << YAML::Key << "center" << YAML::Value << YAML::Flow
      << YAML::BeginSeq << r.center().x() << r.center().y() << YAML::EndSeq << YAML::Key << "rho"
      << YAML::Value << r.rho() << YAML::Key << "theta" << YAML::Value << r.theta()
      << YAML::EndMap;
  e << YAML::EndSeq;
}

std::string system_yaml(const Config& cfg, const Built& b) {
  const SystemSpec& s = cfg.system;
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  auto mat = [&](const std::array<std::int64_t, 4>& m) {
    e << YAML::Flow << YAML::BeginSeq << YAML::Flow << YAML::BeginSeq << m[0] << m[1]
      << YAML::EndSeq << YAML::Flow << YAML::BeginSeq << m[2] << m[3] << YAML::EndSeq
      << YAML::EndSeq;
  };
  e << YAML::BeginMap << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "base" << YAML::Value;
  mat(s.base);
  e << YAML::Key << "fiber" << YAML::Value;
  mat(s.fiber);
  e << YAML::Key << "check_domination" << YAML::Value << s.check_domination;
  if (!s.perturbations.empty()) {
    e << YAML::Key << "perturbations" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : s.perturbations) {
      e << YAML::BeginMap << YAML::Key << "gate" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "center" << YAML::Value << YAML::Flow << YAML::BeginSeq << p.gate_center[0]
        << p.gate_center[1] << YAML::EndSeq << YAML::Key << "radius" << YAML::Value
        << p.gate_radius << YAML::EndMap;
      e << YAML::Key << "rotations" << YAML::Value;
      emit_rotations(e, make_chain(p.rotations));
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  const RigiditySpec& rb = *s.rigidity_breaking;
  e << YAML::Key << "rigidity_breaking" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "p_u" << YAML::Value << YAML::Flow << YAML::BeginSeq << b.p_u.x() << b.p_u.y()
    << YAML::EndSeq;
  e << YAML::Key << "t" << YAML::Value << YAML::Flow << YAML::BeginSeq << b.t[0] << b.t[1] << b.t[2]
    << YAML::EndSeq;
  e << YAML::Key << "gate_radius" << YAML::Value << rb.gate_radius;
  e << YAML::Key << "orbit_depth" << YAML::Value << rb.orbit_depth;
  e << YAML::Key << "holonomy_tol" << YAML::Value << rb.holonomy_tol;
  e << YAML::Key << "h" << YAML::Value << YAML::BeginSeq;
  for (const auto& c : b.h) emit_rotations(e, c);
  e << YAML::EndSeq << YAML::EndMap << YAML::EndMap;
  e << YAML::Key << "seed" << YAML::Value << cfg.seed << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

int cmd_perturb(RunContext& ctx) {
  if (!ctx.config.system.rigidity_breaking)
    throw ConfigError(ctx.config.path + ": perturb needs a system.rigidity_breaking section");
  const Built b = build(ctx);
  if (b.search) {
    ctx.out.write_json("search.json", search_json(*b.search, b.search_opts));
    ctx.out.write("witnesses.csv", witnesses_csv(b.search->report));
  }
  const SkewProductSystem& f = require_system(b);
  Json q = Json::array();
  for (const auto& qi : b.q) q.push_back(pt(qi));
  ctx.out.write_json("rigidity.json", Json{{"p_u", pt(b.p_u)},
                                           {"q", q},
                                           {"t", b.t},
                                           {"transport_depth", b.transport_depth},
                                           {"gate_radius", ctx.config.system.rigidity_breaking->gate_radius},
                                           {"system_hash", hex64(f.hash())}});
  ctx.out.write("system.yaml", system_yaml(ctx.config, b));
  return 0;
}

const std::vector<std::pair<std::string, Command>>& table() {
  static const std::vector<std::pair<std::string, Command>> t{
      {"verify", cmd_verify},   {"holonomy", cmd_holonomy}, {"transversality", cmd_transversality},
      {"ugibbs", cmd_ugibbs},   {"density", cmd_density},   {"perturb", cmd_perturb}};
  return t;
}

}  // namespace

Command find_command(const std::string& name) {
  for (const auto& [n, c] : table())
    if (n == name) return c;
  return nullptr;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, c] : table()) v.push_back(n);
    return v;
  }();
  return names;
}

}  // namespace skewlab::cli
