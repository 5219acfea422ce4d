#include "darwin/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "darwin/errors.hpp"

namespace darwin {

namespace {

using json = nlohmann::json;

constexpr double kProtonMassCgs = 1.67262192369e-24;  // g, CODATA 2018

struct Species {
  double charge;
  double mass;
};

Species lookup_species(std::string_view name, const std::string& where) {
  const PhysicalConstants k = PhysicalConstants::codata2018();
  if (name == "electron") return {-k.e_mag, k.m_e};
  if (name == "positron") return {k.e_mag, k.m_e};
  if (name == "proton") return {k.e_mag, kProtonMassCgs};
  throw ValidationError(where + ": unknown species '" + std::string(name) + "'");
}

// Reads fields out of one JSON object, converting SI values to Gaussian and
// rejecting keys that were never consumed.
class Reader {
 public:
  Reader(const json& obj, std::string path, UnitSystem units)
      : obj_(obj), path_(std::move(path)), units_(units) {
    if (!obj_.is_object()) throw ValidationError(path_ + ": expected an object");
  }

  std::string where(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const std::string& path() const { return path_; }

  bool has(std::string_view key) const { return obj_.contains(key); }

  const json& raw(std::string_view key) {
    seen_.insert(std::string(key));
    return obj_.at(std::string(key));
  }

  double number(std::string_view key, std::optional<QuantityKind> kind) {
    const json& v = raw(key);
    if (!v.is_number()) throw ValidationError(where(key) + ": expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(where(key) + ": must be finite");
    if (kind && units_ == UnitSystem::si) x = to_gaussian(x, *kind);
    return x;
  }

  double number_or(std::string_view key, std::optional<QuantityKind> kind, double fallback) {
    return has(key) ? number(key, kind) : fallback;
  }

  std::uint64_t count(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_number_unsigned()) {
      throw ValidationError(where(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::int64_t integer(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ValidationError(where(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::string text(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ValidationError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  Vec3 vec3(std::string_view key, std::optional<QuantityKind> kind) {
    const json& v = raw(key);
    if (!v.is_array() || v.size() != 3) {
      throw ValidationError(where(key) + ": expected an array of 3 numbers");
    }
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      if (!v[static_cast<std::size_t>(i)].is_number()) {
        throw ValidationError(where(key) + ": expected an array of 3 numbers");
      }
      out[i] = v[static_cast<std::size_t>(i)].get<double>();
      if (kind && units_ == UnitSystem::si) out[i] = to_gaussian(out[i], *kind);
    }
    if (!out.allFinite()) throw ValidationError(where(key) + ": must be finite");
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) throw ValidationError(where(key) + ": unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  UnitSystem units_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& constraint) {
  if (!ok) throw ValidationError(field + ": " + constraint);
}

InteractionParams parse_interaction(Reader& r) {
  InteractionParams p;
  p.softening = r.number_or("softening", QuantityKind::length, 0.0);
  p.c = r.number_or("c", QuantityKind::velocity, p.c);
  p.velocity_cap_fraction = r.number_or("velocity_cap_fraction", std::nullopt, 0.5);
  require(p.softening >= 0.0, r.where("softening"), "must be >= 0");
  require(p.c > 0.0, r.where("c"), "must be > 0");
  require(p.velocity_cap_fraction > 0.0, r.where("velocity_cap_fraction"), "must be > 0");
  r.finish();
  return p;
}

void parse_integrator(Reader& r, Scenario& s) {
  IntegratorConfig& c = s.integrator;
  if (r.has("scheme")) c.scheme = parse_scheme(r.text("scheme"));
  require(r.has("dt"), r.where("dt"), "is required (a number or \"auto\")");
  if (r.raw("dt").is_string()) {
    require(r.text("dt") == "auto", r.where("dt"), "must be a number or \"auto\"");
    s.auto_dt = true;
    c.dt = 0.0;
  } else {
    c.dt = r.number("dt", QuantityKind::time);
    require(c.dt > 0.0, r.where("dt"), "must be > 0");
  }
  s.auto_dt_step_energy_change =
      r.number_or("auto_dt_step_energy_change", std::nullopt, kStepEnergyWarningThreshold);
  require(s.auto_dt_step_energy_change > 0.0, r.where("auto_dt_step_energy_change"),
          "must be > 0");
  require(r.has("n_steps"), r.where("n_steps"), "is required");
  c.n_steps = r.count("n_steps");
  c.fixed_point_tol = r.number_or("fixed_point_tol", std::nullopt, c.fixed_point_tol);
  if (r.has("fixed_point_max_iter")) c.fixed_point_max_iter = r.count("fixed_point_max_iter");
  if (r.has("solver")) c.solver.kind = parse_solver_kind(r.text("solver"));
  c.solver.tol = r.number_or("solver_tol", std::nullopt, c.solver.tol);
  if (r.has("solver_max_iter")) c.solver.max_iter = r.count("solver_max_iter");
  if (r.has("output_stride")) c.output_stride = r.count("output_stride");
  r.finish();
  require(c.fixed_point_tol > 0.0 && c.fixed_point_tol < 1.0, r.where("fixed_point_tol"),
          "must lie in (0, 1)");
  require(c.solver.tol > 0.0 && c.solver.tol < 1.0, r.where("solver_tol"), "must lie in (0, 1)");
  require(c.fixed_point_max_iter >= 1, r.where("fixed_point_max_iter"), "must be >= 1");
  require(c.output_stride >= 1, r.where("output_stride"), "must be >= 1");
}

Particle parse_particle(Reader& r, std::int64_t default_id, const InteractionParams& params) {
  Particle p;
  p.id = r.has("id") ? r.integer("id") : default_id;
  if (r.has("species")) {
    const Species sp = lookup_species(r.text("species"), r.where("species"));
    p.charge = sp.charge;
    p.mass = sp.mass;
  }
  if (r.has("charge")) p.charge = r.number("charge", QuantityKind::charge);
  if (r.has("mass")) p.mass = r.number("mass", QuantityKind::mass);
  require(r.has("position"), r.where("position"), "is required");
  p.position = r.vec3("position", QuantityKind::length);
  if (r.has("velocity")) p.velocity = r.vec3("velocity", QuantityKind::velocity);
  r.finish();
  require(p.mass > 0.0, r.where("mass"), "must be > 0 (give mass or species)");
  require(p.velocity.norm() <= params.velocity_cap_fraction * params.c, r.where("velocity"),
          "|v| exceeds the velocity cap of " + std::to_string(params.velocity_cap_fraction) +
              " c");
  return p;
}

NeutralPlasmaSpec parse_ensemble(Reader& r, const InteractionParams& params) {
  const std::string generator = r.text("generator");
  require(generator == "neutral-plasma", r.where("generator"),
          "unknown generator '" + generator + "'");
  NeutralPlasmaSpec e;
  require(r.has("count"), r.where("count"), "is required");
  e.count = r.count("count");
  if (r.has("species")) {
    const std::string sp = r.text("species");
    const PhysicalConstants k = PhysicalConstants::codata2018();
    if (sp == "electron-positron") {
      e.charge = k.e_mag;
      e.mass = k.m_e;
    } else if (sp == "proton-electron") {
      e.charge = k.e_mag;
      e.mass = kProtonMassCgs;
      e.mass_negative = k.m_e;
    } else {
      throw ValidationError(r.where("species") + ": unknown ensemble species '" + sp + "'");
    }
  }
  if (r.has("charge")) e.charge = r.number("charge", QuantityKind::charge);
  if (r.has("mass")) e.mass = r.number("mass", QuantityKind::mass);
  if (r.has("mass_negative")) e.mass_negative = r.number("mass_negative", QuantityKind::mass);
  require(r.has("box"), r.where("box"), "is required");
  e.box = r.number("box", QuantityKind::length);
  if (r.has("center")) e.center = r.vec3("center", QuantityKind::length);
  const double default_sep =
      e.count > 0 ? 0.25 * e.box / std::cbrt(static_cast<double>(e.count)) : 0.0;
  e.min_separation = r.number_or("min_separation", QuantityKind::length, default_sep);
  require(!(r.has("max_speed") && r.has("max_speed_fraction")), r.where("max_speed"),
          "give either max_speed or max_speed_fraction, not both");
  if (r.has("max_speed_fraction")) {
    e.max_speed = r.number("max_speed_fraction", std::nullopt) * params.c;
  } else {
    e.max_speed = r.number_or("max_speed", QuantityKind::velocity, 0.0);
  }
  r.finish();
  require(e.max_speed <= params.velocity_cap_fraction * params.c, r.where("max_speed"),
          "exceeds the velocity cap");
  try {
    e.validate();
  } catch (const ValidationError& err) {
    throw ValidationError(r.path() + ": " + err.what());
  }
  return e;
}

WireSpec parse_wire(Reader& r) {
  WireSpec w;
  require(r.has("length"), r.where("length"), "is required");
  w.length = r.number("length", QuantityKind::length);
  w.direction = r.has("direction") ? r.vec3("direction", std::nullopt) : Vec3::UnitZ();
  const double norm = w.direction.norm();
  require(norm > 0.0, r.where("direction"), "must be nonzero");
  w.direction /= norm;
  if (r.has("radius")) w.radius = r.number("radius", QuantityKind::length);
  if (r.has("eta")) {
    w.eta = r.number("eta", QuantityKind::inductance_per_length);
    w.eta_source = EtaSource::supplied;
  } else {
    require(w.radius.has_value(), r.where("eta"), "give eta or radius");
    w.eta = thin_wire_eta(w.length, *w.radius);
    w.eta_source = EtaSource::thin_wire_model;
  }
  r.finish();
  w.validate();
  return w;
}

GridSpec parse_grid(Reader& r) {
  GridSpec g;
  const json& dims = r.raw("dims");
  require(dims.is_array() && dims.size() == 3, r.where("dims"), "expected 3 integers");
  std::size_t n[3];
  for (std::size_t i = 0; i < 3; ++i) {
    require(dims[i].is_number_unsigned(), r.where("dims"), "expected 3 non-negative integers");
    n[i] = dims[i].get<std::size_t>();
  }
  g.shape = GridShape{n[0], n[1], n[2], r.number("spacing", QuantityKind::length)};
  if (r.has("smearing")) g.smearing = r.number("smearing", QuantityKind::length);
  r.finish();
  try {
    g.shape.validate();
  } catch (const ValidationError& err) {
    throw ValidationError(r.where("dims") + ": " + err.what());
  }
  require(!g.smearing || *g.smearing > 0.0, r.where("smearing"), "must be > 0");
  return g;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

bool Scenario::uses_random_ensemble() const {
  for (const auto& block : particles) {
    if (std::holds_alternative<NeutralPlasmaSpec>(block)) return true;
  }
  return false;
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    const auto [line, column] = line_column(text, err.byte);
    throw SyntaxError("syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + err.what(),
                      line, column);
  }

  Reader top(doc, "", UnitSystem::gaussian);
  require(top.has("schema_version"), "schema_version", "is required");
  const std::int64_t version = top.integer("schema_version");
  require(version == kScenarioSchemaVersion, "schema_version",
          "unsupported version " + std::to_string(version));
  require(top.has("units"), "units", "is required (\"gaussian\" or \"si\")");
  const std::string unit_name = top.text("units");
  UnitSystem units;
  if (unit_name == "gaussian") {
    units = UnitSystem::gaussian;
  } else if (unit_name == "si") {
    units = UnitSystem::si;
  } else {
    throw ValidationError("units: must be \"gaussian\" or \"si\"");
  }

  Scenario s;
  if (top.has("seed")) s.seed = top.count("seed");

  if (top.has("interaction")) {
    Reader r(top.raw("interaction"), "interaction", units);
    s.interaction = parse_interaction(r);
  }

  require(top.has("integrator"), "integrator", "is required");
  {
    Reader r(top.raw("integrator"), "integrator", units);
    parse_integrator(r, s);
  }

  require(top.has("particles"), "particles", "is required");
  const json& blocks = top.raw("particles");
  require(blocks.is_array() && !blocks.empty(), "particles", "expected a non-empty array");
  std::int64_t next_id = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Reader r(blocks[i], "particles[" + std::to_string(i) + "]", units);
    if (r.has("generator")) {
      NeutralPlasmaSpec e = parse_ensemble(r, s.interaction);
      next_id += static_cast<std::int64_t>(e.count);
      s.particles.emplace_back(e);
    } else {
      Particle p = parse_particle(r, next_id, s.interaction);
      next_id = p.id + 1;
      s.particles.emplace_back(p);
    }
  }
  require(!s.uses_random_ensemble() || s.seed.has_value(), "seed",
          "is required when a particle block uses a random-ensemble generator");

  if (top.has("wire")) {
    Reader r(top.raw("wire"), "wire", units);
    s.wire = parse_wire(r);
  }
  if (top.has("grid")) {
    Reader r(top.raw("grid"), "grid", units);
    s.grid = parse_grid(r);
  }
  top.finish();

  // Ids must be unique across explicit particles and ensembles.
  const SystemState state = initial_state(s);
  validate_state(state, s.interaction);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["schema_version"] = kScenarioSchemaVersion;
  doc["units"] = "gaussian";
  if (s.seed) doc["seed"] = *s.seed;

  doc["interaction"] = {{"softening", s.interaction.softening},
                        {"c", s.interaction.c},
                        {"velocity_cap_fraction", s.interaction.velocity_cap_fraction}};

  const IntegratorConfig& c = s.integrator;
  json integ = {{"scheme", std::string(to_string(c.scheme))},
                {"n_steps", c.n_steps},
                {"auto_dt_step_energy_change", s.auto_dt_step_energy_change},
                {"fixed_point_tol", c.fixed_point_tol},
                {"fixed_point_max_iter", c.fixed_point_max_iter},
                {"solver", std::string(to_string(c.solver.kind))},
                {"solver_tol", c.solver.tol},
                {"solver_max_iter", c.solver.max_iter},
                {"output_stride", c.output_stride}};
  if (s.auto_dt) {
    integ["dt"] = "auto";
  } else {
    integ["dt"] = c.dt;
  }
  doc["integrator"] = integ;

  json blocks = json::array();
  for (const auto& block : s.particles) {
    if (const auto* p = std::get_if<Particle>(&block)) {
      blocks.push_back({{"id", p->id},
                        {"charge", p->charge},
                        {"mass", p->mass},
                        {"position", vec_json(p->position)},
                        {"velocity", vec_json(p->velocity)}});
    } else {
      const auto& e = std::get<NeutralPlasmaSpec>(block);
      json j = {{"generator", "neutral-plasma"},
                {"count", e.count},
                {"charge", e.charge},
                {"mass", e.mass},
                {"box", e.box},
                {"center", vec_json(e.center)},
                {"min_separation", e.min_separation},
                {"max_speed", e.max_speed}};
      if (e.mass_negative > 0.0) j["mass_negative"] = e.mass_negative;
      blocks.push_back(j);
    }
  }
  doc["particles"] = blocks;

  if (s.wire) {
    json w = {{"length", s.wire->length}, {"direction", vec_json(s.wire->direction)}};
    if (s.wire->radius) w["radius"] = *s.wire->radius;
    if (s.wire->eta_source == EtaSource::supplied) w["eta"] = s.wire->eta;
    doc["wire"] = w;
  }
  if (s.grid) {
    json g = {{"dims", {s.grid->shape.nx, s.grid->shape.ny, s.grid->shape.nz}},
              {"spacing", s.grid->shape.spacing}};
    if (s.grid->smearing) g["smearing"] = *s.grid->smearing;
    doc["grid"] = g;
  }
  return doc.dump(2) + "\n";
}

std::string scenario_hash(const Scenario& scenario) {
  const std::string text = serialize_scenario(scenario);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SystemState initial_state(const Scenario& scenario) {
  SystemState state;
  EnsembleRng rng(scenario.seed.value_or(0));
  std::int64_t next_id = 0;
  for (const auto& block : scenario.particles) {
    if (const auto* p = std::get_if<Particle>(&block)) {
      state.particles.push_back(*p);
      next_id = p->id + 1;
    } else {
      const auto& e = std::get<NeutralPlasmaSpec>(block);
      generate_neutral_plasma(e, rng, next_id, state.particles);
      next_id += static_cast<std::int64_t>(e.count);
    }
  }
  return state;
}

}  // namespace darwin
