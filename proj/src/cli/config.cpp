#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace skewlab::cli {
namespace {

class Section {
 public:
  Section(const YAML::Node& node, std::string path, std::string origin)
      : node_(node), path_(std::move(path)), origin_(std::move(origin)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) fail(node_, "expected a mapping");
  }

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    throw ConfigError(origin_ + ":" + std::to_string(at.Mark().line + 1) + ": " + path_ + ": " +
                      msg);
  }

  bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

  YAML::Node raw(const std::string& key) {
    used_.insert(key);
    if (has(key)) return std::as_const(node_)[key];
    static const YAML::Node empty(YAML::NodeType::Map);
    return empty[key];
  }

  Section sub(const std::string& key) { return Section(raw(key), path_ + "." + key, origin_); }

  template <class T>
  void read(const std::string& key, T& out) {
    const YAML::Node n = raw(key);
    if (!n) return;
    out = scalar<T>(n, key);
  }

  template <class T>
  void read(const std::string& key, std::optional<T>& out) {
    const YAML::Node n = raw(key);
    if (!n) return;
    T v{};
    if constexpr (std::is_arithmetic_v<T>)
      v = scalar<T>(n, key);
    else
      v = list<typename T::value_type>(n, key, std::tuple_size_v<T>, v);
    out = v;
  }

  template <class T, std::size_t N>
  void read(const std::string& key, std::array<T, N>& out) {
    const YAML::Node n = raw(key);
    if (n) out = list<T>(n, key, N, out);
  }

  template <class T>
  void read(const std::string& key, std::vector<T>& out) {
    const YAML::Node n = raw(key);
    if (!n) return;
    if (!n.IsSequence()) fail(n, key + ": expected a list");
    out.clear();
    for (const auto& e : n) out.push_back(scalar<T>(e, key));
  }

  // Checks that every key present was consumed.
  void done() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string k = kv.first.as<std::string>();
      if (!used_.count(k)) fail(kv.first, "unknown key '" + k + "'");
    }
  }

  const std::string& path() const { return path_; }
  const std::string& origin() const { return origin_; }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, key + ": expected a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::BadConversion&) {
      fail(n, key + ": cannot read '" + n.Scalar() + "'");
    }
  }

  template <class T, class A>
  A list(const YAML::Node& n, const std::string& key, std::size_t size, A out) const {
    if (!n.IsSequence() || n.size() != size)
      fail(n, key + ": expected a list of " + std::to_string(size) + " numbers");
    for (std::size_t i = 0; i < size; ++i) out[i] = scalar<T>(n[i], key);
    return out;
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::string origin_;
  std::set<std::string> used_;
};

void require(bool ok, const Section& s, const YAML::Node& at, const std::string& msg) {
  if (!ok) s.fail(at, msg);
}

std::array<std::int64_t, 4> read_matrix(Section& s, const std::string& key,
                                        std::array<std::int64_t, 4> def) {
  const YAML::Node n = s.raw(key);
  if (!n) return def;
  require(n.IsSequence() && n.size() == 2, s, n, key + ": expected [[a, b], [c, d]]");
  std::array<std::int64_t, 4> m{};
  for (int r = 0; r < 2; ++r) {
    require(n[r].IsSequence() && n[r].size() == 2, s, n[r], key + ": expected [[a, b], [c, d]]");
    for (int c = 0; c < 2; ++c) m[2 * r + c] = s.scalar<std::int64_t>(n[r][c], key);
  }
  return m;
}

RotationSpec read_rotation(const YAML::Node& n, const std::string& path, const std::string& origin) {
  Section s(n, path, origin);
  RotationSpec r;
  require(s.has("center") && s.has("rho") && s.has("theta"), s, n,
          "rotation needs center, rho and theta");
  s.read("center", r.center);
  s.read("rho", r.rho);
  s.read("theta", r.theta);
  s.done();
  return r;
}

std::vector<RotationSpec> read_rotations(const YAML::Node& n, const std::string& path,
                                         const std::string& origin) {
  Section s(YAML::Node(), path, origin);
  require(n.IsSequence(), s, n, "expected a list of rotations");
  std::vector<RotationSpec> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(read_rotation(n[i], path + "[" + std::to_string(i) + "]", origin));
  return out;
}

void read_search(Section& s, SearchSpec& o) {
  s.read("grid", o.grid);
  s.read("rho", o.rho);
  s.read("theta_max", o.theta_max);
  s.read("budget", o.budget);
  s.read("seed", o.seed);
  s.read("field_resolution", o.field_resolution);
  s.read("angle_tol", o.angle_tol);
  s.read("refine_levels", o.refine_levels);
  s.done();
}

void read_holonomy_opts(Section& s, HolonomyOptions& h) {
  s.read("tol", h.tol);
  s.read("max_depth", h.max_depth);
  s.read("min_depth", h.min_depth);
  s.done();
}

SystemSpec read_system(Section s) {
  SystemSpec sys;
  sys.base = read_matrix(s, "base", sys.base);
  sys.fiber = read_matrix(s, "fiber", sys.fiber);
  s.read("check_domination", sys.check_domination);
  if (const YAML::Node list = s.raw("perturbations")) {
    require(list.IsSequence(), s, list, "perturbations: expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = s.path() + ".perturbations[" + std::to_string(i) + "]";
      Section p(list[i], path, s.origin());
      PerturbationSpec ps;
      Section gate = p.sub("gate");
      require(gate.has("center") && gate.has("radius"), p, list[i], "gate needs center and radius");
      gate.read("center", ps.gate_center);
      gate.read("radius", ps.gate_radius);
      gate.done();
      const YAML::Node rots = p.raw("rotations");
      require(bool(rots), p, list[i], "perturbation needs rotations");
      ps.rotations = read_rotations(rots, path + ".rotations", s.origin());
      p.done();
      sys.perturbations.push_back(std::move(ps));
    }
  }
  if (s.has("rigidity_breaking")) {
    Section r = s.sub("rigidity_breaking");
    RigiditySpec rb;
    r.read("p_u", rb.p_u);
    r.read("t", rb.t);
    r.read("gate_radius", rb.gate_radius);
    r.read("orbit_depth", rb.orbit_depth);
    r.read("holonomy_tol", rb.holonomy_tol);
    if (const YAML::Node h = r.raw("h")) {
      require(h.IsSequence() && h.size() == 3, r, h, "h: expected three rotation lists");
      std::array<std::vector<RotationSpec>, 3> chains;
      for (int i = 0; i < 3; ++i)
        chains[i] = read_rotations(h[i], r.path() + ".h[" + std::to_string(i) + "]", s.origin());
      rb.h = std::move(chains);
    }
    Section search = r.sub("search");
    read_search(search, rb.search);
    r.done();
    sys.rigidity_breaking = std::move(rb);
  }
  s.done();
  return sys;
}

}  // namespace

Config parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  Config c;
  c.path = origin;
  Section top(root, "config", origin);
  if (!top.has("system")) top.fail(root, "missing section 'system'");
  c.system = read_system(top.sub("system"));
  top.read("seed", c.seed);

  {
    Section s = top.sub("verify");
    s.read("grids", c.verify.grids);
    s.read("random_offset", c.verify.random_offset);
    s.read("max_iter", c.verify.max_iter);
    s.read("tol", c.verify.tol);
    s.done();
  }
  {
    Section s = top.sub("holonomy");
    auto& h = c.holonomy;
    s.read("triples", h.triples);
    s.read("leaf_span", h.leaf_span);
    s.read("tol", h.tol);
    s.read("max_depth", h.max_depth);
    s.read("min_depth", h.min_depth);
    if (const YAML::Node rows = s.raw("rows")) {
      require(rows.IsSequence(), s, rows, "rows: expected a list");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        Section r(rows[i], s.path() + ".rows[" + std::to_string(i) + "]", origin);
        require(r.has("p") && r.has("q") && r.has("x"), r, rows[i], "row needs p, q and x");
        TripleSpec t;
        r.read("p", t.p);
        r.read("q", t.q);
        r.read("x", t.x);
        r.done();
        h.rows.push_back(t);
      }
    }
    s.done();
  }
  {
    Section s = top.sub("transversality");
    auto& t = c.transversality;
    s.read("grid", t.grid);
    s.read("field_resolution", t.field_resolution);
    s.read("angle_tol", t.angle_tol);
    s.read("search", t.search);
    s.read("profile_steps", t.profile_steps);
    s.read("profile_half_width", t.profile_half_width);
    s.read("p_u", t.p_u);
    s.read("t", t.t);
    Section so = s.sub("search_options");
    read_search(so, t.search_options);
    s.done();
  }
  {
    Section s = top.sub("ugibbs");
    auto& u = c.ugibbs;
    if (const YAML::Node seeds = s.raw("seeds")) {
      require(seeds.IsSequence(), s, seeds, "seeds: expected a list of [bx, by, fx, fy]");
      u.seeds.clear();
      for (const auto& e : seeds) u.seeds.push_back(s.list<double>(e, "seeds", 4, std::array<double, 4>{}));
    }
    s.read("schedule", u.schedule);
    s.read("samples", u.samples);
    s.read("leaf_length", u.leaf_length);
    s.read("threshold_multi", u.threshold_multi);
    s.read("threshold_single", u.threshold_single);
    s.read("bins", u.bins);
    s.read("histograms", u.histograms);
    Section h = s.sub("holonomy");
    read_holonomy_opts(h, u.holonomy);
    s.done();
  }
  {
    Section s = top.sub("density");
    auto& d = c.density;
    s.read("epsilon", d.epsilon);
    s.read("m_max", d.m_max);
    s.read("samples", d.samples);
    s.read("seed_point", d.seed_point);
    s.read("leaf_length", d.leaf_length);
    Section h = s.sub("holonomy");
    read_holonomy_opts(h, d.holonomy);
    s.done();
  }
  top.done();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

Json matrix_json(const std::array<std::int64_t, 4>& m) {
  return Json::array({Json::array({m[0], m[1]}), Json::array({m[2], m[3]})});
}

Json rotations_json(const std::vector<RotationSpec>& rs) {
  Json out = Json::array();
  for (const auto& r : rs)
    out.push_back(Json{{"center", r.center}, {"rho", r.rho}, {"theta", r.theta}});
  return out;
}

Json search_json(const SearchSpec& s, std::uint64_t run_seed) {
  return Json{{"grid", s.grid},
              {"rho", s.rho},
              {"theta_max", s.theta_max},
              {"budget", s.budget},
              {"seed", s.seed.value_or(run_seed)},
              {"field_resolution", s.field_resolution},
              {"angle_tol", s.angle_tol},
              {"refine_levels", s.refine_levels}};
}

Json holonomy_json(const HolonomyOptions& h) {
  return Json{{"tol", h.tol}, {"max_depth", h.max_depth}, {"min_depth", h.min_depth}};
}

Json optional_json(const std::optional<std::array<double, 3>>& t) {
  return t ? Json(*t) : Json(nullptr);
}

}  // namespace

Json effective_config(const Config& c) {
  Json sys{{"base", matrix_json(c.system.base)},
           {"fiber", matrix_json(c.system.fiber)},
           {"check_domination", c.system.check_domination}};
  Json perts = Json::array();
  for (const auto& p : c.system.perturbations)
    perts.push_back(Json{{"gate", {{"center", p.gate_center}, {"radius", p.gate_radius}}},
                         {"rotations", rotations_json(p.rotations)}});
  sys["perturbations"] = perts;
  if (const auto& rb = c.system.rigidity_breaking) {
    Json r{{"p_u", rb->p_u},
           {"t", optional_json(rb->t)},
           {"gate_radius", rb->gate_radius},
           {"orbit_depth", rb->orbit_depth},
           {"holonomy_tol", rb->holonomy_tol}};
    if (rb->h) {
      Json h = Json::array();
      for (const auto& chain : *rb->h) h.push_back(rotations_json(chain));
      r["h"] = h;
    } else {
      r["h"] = nullptr;
    }
    r["search"] = search_json(rb->search, c.seed);
    sys["rigidity_breaking"] = r;
  } else {
    sys["rigidity_breaking"] = nullptr;
  }

  Json rows = Json::array();
  for (const auto& t : c.holonomy.rows) rows.push_back(Json{{"p", t.p}, {"q", t.q}, {"x", t.x}});
  const auto& tr = c.transversality;
  const auto& u = c.ugibbs;
  const auto& d = c.density;
  return Json{
      {"system", sys},
      {"seed", c.seed},
      {"verify",
       {{"grids", c.verify.grids},
        {"random_offset", c.verify.random_offset},
        {"max_iter", c.verify.max_iter},
        {"tol", c.verify.tol}}},
      {"holonomy",
       {{"triples", c.holonomy.triples},
        {"leaf_span", c.holonomy.leaf_span},
        {"tol", c.holonomy.tol},
        {"max_depth", c.holonomy.max_depth},
        {"min_depth", c.holonomy.min_depth},
        {"rows", rows}}},
      {"transversality",
       {{"grid", tr.grid},
        {"field_resolution", tr.field_resolution},
        {"angle_tol", tr.angle_tol},
        {"search", tr.search},
        {"profile_steps", tr.profile_steps},
        {"profile_half_width", tr.profile_half_width},
        {"p_u", tr.p_u},
        {"t", optional_json(tr.t)},
        {"search_options", search_json(tr.search_options, c.seed)}}},
      {"ugibbs",
       {{"seeds", u.seeds},
        {"schedule", u.schedule},
        {"samples", u.samples},
        {"leaf_length", u.leaf_length},
        {"threshold_multi", u.threshold_multi},
        {"threshold_single", u.threshold_single},
        {"bins", u.bins.empty() ? Json(std::vector<std::uint32_t>(u.seeds.size(), 16)) : Json(u.bins)},
        {"histograms", u.histograms},
        {"holonomy", holonomy_json(u.holonomy)}}},
      {"density",
       {{"epsilon", d.epsilon},
        {"m_max", d.m_max},
        {"samples", d.samples},
        {"seed_point", d.seed_point},
        {"leaf_length", d.leaf_length},
        {"holonomy", holonomy_json(d.holonomy)}}}};
}

RotationChain make_chain(const std::vector<RotationSpec>& specs) {
  std::vector<LocalizedRotation> rs;
  for (const auto& s : specs)
    rs.emplace_back(TorusPoint2(s.center[0], s.center[1]), s.rho, s.theta);
  return RotationChain(std::move(rs));
}

std::vector<RotationSpec> chain_specs(const RotationChain& chain) {
  std::vector<RotationSpec> out;
  for (const auto& r : chain.rotations())
    out.push_back(RotationSpec{{r.center().x(), r.center().y()}, r.rho(), r.theta()});
  return out;
}

}  // namespace skewlab::cli
