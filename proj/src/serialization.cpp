#include "dforge/serialization.hpp"

#include "dforge/error.hpp"

namespace dforge {

namespace {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::kInvalidInput, std::string(what) + ": expected an array");
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::kInvalidInput, std::string(what) + ": expected numbers");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kInvalidInput, std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorCode::kInvalidInput, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<Vec> points_from_json(const json& j, const char* key) {
  const json& a = field(j, key);
  if (!a.is_array()) throw Error(ErrorCode::kInvalidInput, std::string("field '") + key + "' must be an array");
  std::vector<Vec> out;
  out.reserve(a.size());
  for (const auto& e : a) out.push_back(vec_from_json(e, key));
  return out;
}

json points_to_json(const std::vector<Vec>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(vec_to_json(p));
  return a;
}

}  // namespace

json sphere_to_json(const SphereElement& s) {
  return json{{"center", vec_to_json(s.center)}, {"radius", s.radius}, {"orientation", s.orientation}};
}

SphereElement sphere_from_json(const json& j) {
  const Vec c = vec_from_json(field(j, "center"), "center");
  const double r = number(j, "radius");
  const json& o = field(j, "orientation");
  if (!o.is_number_integer()) throw Error(ErrorCode::kInvalidInput, "orientation must be +1 or -1");
  return sphere_to_lorentz(EuclideanEmbedding::canonical(static_cast<int>(c.size())), c, r, o.get<int>());
}

json grid_to_json(const StructuredGrid& g) {
  return json{{"lower", vec_to_json(g.lower)}, {"spacing", vec_to_json(g.spacing)}, {"counts", g.counts}};
}

StructuredGrid grid_from_json(const json& j) {
  StructuredGrid g;
  g.lower = vec_from_json(field(j, "lower"), "lower");
  g.spacing = vec_from_json(field(j, "spacing"), "spacing");
  const json& c = field(j, "counts");
  if (!c.is_array()) throw Error(ErrorCode::kInvalidInput, "counts must be an array");
  for (const auto& e : c) {
    if (!e.is_number_integer() || e.get<int>() < 1) throw Error(ErrorCode::kInvalidInput, "counts must be positive integers");
    g.counts.push_back(e.get<int>());
  }
  if (g.lower.size() != g.dim() || g.spacing.size() != g.dim()) {
    throw Error(ErrorCode::kInvalidInput, "grid: lower/spacing/counts sizes differ");
  }
  return g;
}

json check_to_json(const CheckReport& r) {
  json j{{"name", r.name}, {"max_residual", r.max_residual}, {"tolerance", r.tolerance}, {"pass", r.pass},
         {"samples", r.samples}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

PairFile make_pair_file(const DarbouxPair& pair, const std::string& curve_spec) {
  PairFile p;
  p.family = pair.family;
  p.n = pair.n;
  p.curve = curve_spec;
  p.A = pair.A;
  p.h0 = pair.h0;
  p.s0 = pair.s0;
  p.s1 = pair.s1;
  p.step = pair.step;
  p.grid = pair.grid;
  for (const Vec& u : pair.grid.points()) {
    p.f.push_back(pair.f->evaluate(u));
    p.f_tilde.push_back(pair.f_tilde->evaluate(u));
    p.congruence.push_back(pair.congruence(u));
    p.conformal_factor.push_back(pair.conformal_factor(u));
  }
  return p;
}

json pair_to_json(const PairFile& p) {
  json cong = json::array();
  for (const auto& s : p.congruence) cong.push_back(sphere_to_json(s));
  return json{{"family", to_string(p.family)},
              {"n", p.n},
              {"curve", p.curve},
              {"A", p.A},
              {"h0", {p.h0[0], p.h0[1], p.h0[2]}},
              {"s_range", {p.s0, p.s1}},
              {"step", p.step},
              {"grid", grid_to_json(p.grid)},
              {"f", points_to_json(p.f)},
              {"f_tilde", points_to_json(p.f_tilde)},
              {"conformal_factor", p.conformal_factor},
              {"congruence", cong}};
}

PairFile pair_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidInput, "pair file: expected a JSON object");
  PairFile p;
  const json& fam = field(j, "family");
  if (!fam.is_string()) throw Error(ErrorCode::kInvalidInput, "family must be a string");
  p.family = family_from_string(fam.get<std::string>());
  const json& n = field(j, "n");
  if (!n.is_number_integer()) throw Error(ErrorCode::kInvalidInput, "n must be an integer");
  p.n = n.get<int>();
  const json& curve = field(j, "curve");
  if (!curve.is_string()) throw Error(ErrorCode::kInvalidInput, "curve must be a string");
  p.curve = curve.get<std::string>();
  p.A = number(j, "A");
  const Vec h0 = vec_from_json(field(j, "h0"), "h0");
  if (h0.size() != 3) throw Error(ErrorCode::kInvalidInput, "h0 must have 3 entries");
  p.h0 = h0;
  const Vec sr = vec_from_json(field(j, "s_range"), "s_range");
  if (sr.size() != 2) throw Error(ErrorCode::kInvalidInput, "s_range must have 2 entries");
  p.s0 = sr[0];
  p.s1 = sr[1];
  p.step = number(j, "step");
  p.grid = grid_from_json(field(j, "grid"));
  p.f = points_from_json(j, "f");
  p.f_tilde = points_from_json(j, "f_tilde");
  const Vec cf = vec_from_json(field(j, "conformal_factor"), "conformal_factor");
  p.conformal_factor.assign(cf.data(), cf.data() + cf.size());
  const json& cong = field(j, "congruence");
  if (!cong.is_array()) throw Error(ErrorCode::kInvalidInput, "congruence must be an array");
  for (const auto& s : cong) p.congruence.push_back(sphere_from_json(s));
  const std::size_t N = p.grid.size();
  if (p.f.size() != N || p.f_tilde.size() != N || p.congruence.size() != N || p.conformal_factor.size() != N) {
    throw Error(ErrorCode::kInvalidInput, "pair file: sample arrays do not match the grid size");
  }
  return p;
}

json report_to_json(const std::vector<CheckReport>& checks, bool pass, const StructuredGrid& grid) {
  json a = json::array();
  for (const auto& c : checks) a.push_back(check_to_json(c));
  return json{{"checks", a}, {"pass", pass}, {"grid", grid_to_json(grid)}};
}

json bonnet_report_to_json(const BonnetSuiteReport& r) {
  json first = json::object(), second = json::object();
  for (const auto& [n, v] : r.first_order.entries) first[n] = v;
  for (const auto& [n, v] : r.second_order.entries) second[n] = v;
  json a = json::array();
  for (const auto& c : r.checks) a.push_back(check_to_json(c));
  return json{{"c", r.options.c},
              {"integrability", to_string(r.options.form)},
              {"trials", r.options.trials},
              {"seed", r.options.seed},
              {"constraints", {{"integrability", r.constraints.integrability}, {"gauss", r.constraints.gauss}}},
              {"first_order", first},
              {"second_order", second},
              {"checks", a},
              {"pass", r.pass}};
}

json weyl_report_to_json(const WeylReport& r) {
  json comps = json::object();
  const char* names[] = {"1221", "1212", "3443", "3434", "1331", "1441", "2332", "2442", "1234"};
  for (const char* nm : names) {
    comps[nm] = at(r.weyl, nm[0] - '1', nm[1] - '1', nm[2] - '1', nm[3] - '1');
  }
  json a = json::array();
  for (const auto& c : r.checks) a.push_back(check_to_json(c));
  return json{{"c", r.c}, {"expected", (1.0 + r.c) / 3.0}, {"components", comps}, {"checks", a}, {"pass", r.pass}};
}

}  // namespace dforge
