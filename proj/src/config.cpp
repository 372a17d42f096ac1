#include "roughstart/config.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#define TOML_HEADER_ONLY 1
#include <toml.hpp>

#include "roughstart/fft.hpp"

namespace roughstart {

std::string to_string(Command c) {
  switch (c) {
    case Command::classify: return "classify";
    case Command::sample: return "sample";
    case Command::probe: return "probe";
    case Command::solve: return "solve";
    case Command::blowup: return "blowup";
    case Command::asymptotics: return "asymptotics";
  }
  return "?";
}

Command command_from_string(const std::string& name) {
  for (auto c : {Command::classify, Command::sample, Command::probe, Command::solve, Command::blowup,
                 Command::asymptotics})
    if (to_string(c) == name) return c;
  throw ValidationError("unknown command '" + name + "'");
}

namespace {

void check_keys(const toml::table& t, const std::string& section, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : t) {
    (void)v;
    if (!allowed.count(std::string(k.str())))
      throw ValidationError("[" + section + "]: unknown key '" + std::string(k.str()) + "'");
  }
}

const toml::table* sub_table(const toml::table& root, const char* name) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  if (!n->is_table()) throw ValidationError(std::string("'") + name + "' must be a table");
  return n->as_table();
}

double get_double(const toml::table& t, const char* key, double fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (auto v = n->value<double>()) return *v;
  throw ValidationError(std::string("'") + key + "' must be a number");
}

long long get_int(const toml::table& t, const char* key, long long fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (n->is_integer()) return *n->value<long long>();
  throw ValidationError(std::string("'") + key + "' must be an integer");
}

bool get_bool(const toml::table& t, const char* key, bool fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (auto v = n->value<bool>()) return *v;
  throw ValidationError(std::string("'") + key + "' must be a boolean");
}

std::string get_string(const toml::table& t, const char* key, const std::string& fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (auto v = n->value<std::string>()) return *v;
  throw ValidationError(std::string("'") + key + "' must be a string");
}

/// Integer, "p/q" string, or float (approximated, flagged inexact).
std::optional<Rational> get_rational(const toml::table& t, const char* key, bool* inexact) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (n->is_integer()) return Rational(*n->value<long long>());
  if (n->is_string()) return parse_rational(*n->value<std::string>());
  if (n->is_floating_point()) {
    bool exact = false;
    Rational r = rational_from_double(*n->value<double>(), 1'000'000, &exact);
    if (!exact && inexact) *inexact = true;
    return r;
  }
  throw ValidationError(std::string("'") + key + "' must be an integer, a float or a \"p/q\" string");
}

EquationSection parse_equation(const toml::table& t) {
  check_keys(t, "equation", {"kind", "tau", "a", "b", "d", "degree_m", "mass_conserving", "theta"});
  const std::string kind_name = get_string(t, "kind", "");
  if (kind_name.empty()) throw ValidationError("[equation]: 'kind' is required");
  const EquationKind kind = equation_kind_from_string(kind_name);
  const int d = static_cast<int>(get_int(t, "d", 1));
  bool inexact = false;
  EquationSection sec;
  if (kind == EquationKind::generic) {
    const auto tau = get_rational(t, "tau", &inexact);
    const auto a = get_rational(t, "a", &inexact);
    const auto b = get_rational(t, "b", &inexact);
    if (!tau || !a || !b) throw ValidationError("[equation]: generic kind needs tau, a and b");
    sec.spec = EquationSpec::generic(*tau, *a, *b, d, static_cast<int>(get_int(t, "degree_m", 2)),
                                     get_bool(t, "mass_conserving", true));
  } else {
    for (const char* k : {"tau", "a", "b", "degree_m", "mass_conserving"})
      if (t.get(k))
        throw ValidationError(std::string("[equation]: '") + k + "' cannot be overridden for catalogue kind '" +
                              kind_name + "'");
    sec.spec = EquationSpec::catalogue(kind, d);
  }
  sec.theta = get_rational(t, "theta", &inexact);
  sec.spec.inexact_input = inexact;
  return sec;
}

IcSection parse_ic(const toml::table& t) {
  check_keys(t, "ic", {"type", "theta", "nu", "log_weights", "d", "N", "mass_conserving", "amplitude", "mode",
                       "replicas", "replica"});
  IcSection s;
  s.type = get_string(t, "type", "gaussian");
  if (s.type != "gaussian" && s.type != "sine" && s.type != "cosine")
    throw ValidationError("[ic]: type must be gaussian, sine or cosine");
  s.spec.theta = get_double(t, "theta", s.spec.theta);
  s.spec.nu = get_double(t, "nu", s.spec.nu);
  s.spec.log_weights = get_bool(t, "log_weights", s.spec.log_weights);
  s.spec.d = static_cast<int>(get_int(t, "d", s.spec.d));
  s.spec.N = static_cast<int>(get_int(t, "N", s.spec.N));
  s.spec.mass_conserving = get_bool(t, "mass_conserving", s.spec.mass_conserving);
  s.spec.amplitude = get_double(t, "amplitude", s.spec.amplitude);
  s.mode = static_cast<int>(get_int(t, "mode", s.mode));
  const long long reps = get_int(t, "replicas", 1);
  const long long rep = get_int(t, "replica", 0);
  if (reps < 1 || rep < 0) throw ValidationError("[ic]: replicas must be >= 1 and replica >= 0");
  s.replicas = static_cast<std::size_t>(reps);
  s.replica = static_cast<std::uint64_t>(rep);
  if (s.spec.N < 1) throw ValidationError("[ic]: N must be >= 1");
  if (s.spec.d != 1 && s.spec.d != 2) throw ValidationError("[ic]: d must be 1 or 2");
  return s;
}

PicardConfig parse_solver(const toml::table& t) {
  check_keys(t, "solver", {"formulation", "alpha", "beta", "gamma", "kappa", "nu", "T", "max_iter",
                           "contraction_tol", "t_min", "per_decade", "max_halvings", "data_gate",
                           "gate_resolution"});
  PicardConfig c;
  c.formulation = formulation_from_string(get_string(t, "formulation", "fix1"));
  c.alpha = get_double(t, "alpha", c.alpha);
  c.beta = get_double(t, "beta", c.beta);
  c.gamma = get_double(t, "gamma", c.gamma);
  c.kappa = get_double(t, "kappa", c.kappa);
  c.nu = get_double(t, "nu", c.nu);
  c.T = get_double(t, "T", c.T);
  c.max_iter = static_cast<int>(get_int(t, "max_iter", c.max_iter));
  c.contraction_tol = get_double(t, "contraction_tol", c.contraction_tol);
  c.grid.t_min = get_double(t, "t_min", c.grid.t_min);
  c.grid.per_decade = static_cast<int>(get_int(t, "per_decade", c.grid.per_decade));
  c.max_halvings = static_cast<int>(get_int(t, "max_halvings", c.max_halvings));
  c.data_gate = get_bool(t, "data_gate", c.data_gate);
  c.gate_resolution = get_double(t, "gate_resolution", c.gate_resolution);
  return c;
}

std::vector<double> get_double_array(const toml::table& t, const char* key) {
  std::vector<double> out;
  const toml::node* n = t.get(key);
  if (!n) return out;
  const toml::array* a = n->as_array();
  if (!a) throw ValidationError(std::string("'") + key + "' must be an array");
  for (const auto& e : *a) {
    auto v = e.value<double>();
    if (!v) throw ValidationError(std::string("'") + key + "' must hold numbers");
    out.push_back(*v);
  }
  return out;
}

BlowupSection parse_blowup(const toml::table& t) {
  check_keys(t, "blowup", {"regime", "lambda", "epsilon", "eps_c", "eps_s", "K_max", "M", "epsilon_grid", "probe_N",
                           "probe_M"});
  BlowupSection s;
  s.spec.regime = blowup_regime_from_string(get_string(t, "regime", "subcritical_lemma1"));
  s.spec.lambda = get_double(t, "lambda", s.spec.lambda);
  s.spec.epsilon = get_double(t, "epsilon", s.spec.epsilon);
  s.spec.eps_c = get_double(t, "eps_c", s.spec.eps_c);
  s.spec.eps_s = get_double(t, "eps_s", s.spec.eps_s);
  s.spec.K_max = static_cast<int>(get_int(t, "K_max", s.spec.K_max));
  const long long M = get_int(t, "M", 500);
  if (M < 1) throw ValidationError("[blowup]: M must be positive");
  s.M = static_cast<std::size_t>(M);
  s.epsilon_grid = get_double_array(t, "epsilon_grid");
  if (s.epsilon_grid.empty()) {
    const double e = s.spec.regime == BlowupRegime::subcritical_lemma1 ? s.spec.epsilon : s.spec.eps_c;
    s.epsilon_grid = {e / 8, e / 4, e / 2, e};
  }
  s.probe_N = static_cast<int>(get_int(t, "probe_N", 0));
  s.probe_M = static_cast<std::size_t>(get_int(t, "probe_M", 100));
  s.spec.validate();
  return s;
}

ProbeSection parse_probe(const toml::table& t) {
  check_keys(t, "probe", {"M", "j_lo", "j_hi", "fit_log"});
  ProbeSection p;
  p.M = static_cast<std::size_t>(get_int(t, "M", 100));
  p.options.j_lo = static_cast<int>(get_int(t, "j_lo", p.options.j_lo));
  p.options.j_hi = static_cast<int>(get_int(t, "j_hi", p.options.j_hi));
  p.options.fit_log = get_bool(t, "fit_log", p.options.fit_log);
  return p;
}

AsymptoticsSection parse_asymptotics(const toml::table& t) {
  check_keys(t, "asymptotics", {"triples", "per_decade"});
  AsymptoticsSection s;
  s.per_decade = static_cast<int>(get_int(t, "per_decade", 50));
  const toml::node* n = t.get("triples");
  if (n) {
    const toml::array* a = n->as_array();
    if (!a) throw ValidationError("[asymptotics]: triples must be an array of [nu, p, tau]");
    for (const auto& e : *a) {
      const toml::array* row = e.as_array();
      if (!row || row->size() != 3) throw ValidationError("[asymptotics]: each triple needs 3 numbers");
      std::array<double, 3> tr{};
      for (std::size_t i = 0; i < 3; ++i) {
        auto v = (*row)[i].value<double>();
        if (!v) throw ValidationError("[asymptotics]: triples must hold numbers");
        tr[i] = *v;
      }
      s.triples.push_back(tr);
    }
  }
  if (s.triples.empty()) s.triples = {{{0.0, 1.0, 2.0}}, {{0.5, 1.0, 2.0}}, {{-0.5, 2.0, 4.0}}};
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "invalid TOML: " << e.description() << " at line " << e.source().begin.line;
    throw ValidationError(os.str());
  }
  check_keys(root, "top level", {"command", "output_dir", "seed", "equation", "ic", "solver", "blowup", "probe",
                                 "asymptotics"});
  ExperimentConfig c;
  c.source = text;
  if (const toml::node* n = root.get("command")) {
    auto v = n->value<std::string>();
    if (!v) throw ValidationError("'command' must be a string");
    c.command = command_from_string(*v);
  }
  c.output_dir = get_string(root, "output_dir", c.output_dir);
  if (const toml::node* n = root.get("seed")) {
    auto v = n->value<long long>();
    if (!v || *v < 0) throw ValidationError("'seed' must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto t = sub_table(root, "equation")) c.equation = parse_equation(*t);
  if (auto t = sub_table(root, "ic")) c.ic = parse_ic(*t);
  if (auto t = sub_table(root, "solver")) c.solver = parse_solver(*t);
  if (auto t = sub_table(root, "blowup")) c.blowup = parse_blowup(*t);
  if (auto t = sub_table(root, "probe")) c.probe = parse_probe(*t);
  if (auto t = sub_table(root, "asymptotics")) c.asymptotics = parse_asymptotics(*t);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

EquationSection equation_from_toml_text(const std::string& text) {
  ExperimentConfig c = parse_config(text);
  if (!c.equation) throw ValidationError("missing [equation] section");
  return *c.equation;
}

void require_sections(const ExperimentConfig& c) {
  if (!c.command) throw ValidationError("no command given");
  auto need = [](bool present, const char* name) {
    if (!present) throw ValidationError(std::string("missing [") + name + "] section");
  };
  switch (*c.command) {
    case Command::classify: break;
    case Command::sample:
    case Command::probe:
      need(c.ic.has_value(), "ic");
      if (!c.seed) throw ValidationError("a seed is required for stochastic commands");
      break;
    case Command::solve:
      need(c.equation.has_value(), "equation");
      need(c.solver.has_value(), "solver");
      need(c.ic.has_value(), "ic");
      if (c.ic->type == "gaussian" && !c.seed) throw ValidationError("a seed is required for random initial data");
      break;
    case Command::blowup:
      need(c.blowup.has_value(), "blowup");
      if (!c.seed) throw ValidationError("a seed is required for stochastic commands");
      break;
    case Command::asymptotics: break;
  }
}

namespace {

nlohmann::json rational_json(const Rational& r) { return to_string(r); }

nlohmann::json equation_json(const EquationSpec& s) {
  return {{"kind", to_string(s.kind)},
          {"tau", rational_json(s.tau)},
          {"sigma", rational_json(s.sigma)},
          {"a", rational_json(s.a)},
          {"b", rational_json(s.b)},
          {"d", s.d},
          {"degree_m", s.degree_m},
          {"mass_conserving", s.mass_conserving},
          {"sharp", s.sharp},
          {"alpha_min", rational_json(s.alpha_min)},
          {"theta_default", rational_json(s.theta_default)},
          {"anti_diffusion", s.lower_order.anti_diffusion},
          {"damping", s.lower_order.damping},
          {"inexact_input", s.inexact_input}};
}

nlohmann::json solver_json(const PicardConfig& c) {
  return {{"formulation", to_string(c.formulation)},
          {"alpha", c.alpha},
          {"beta", c.beta},
          {"gamma", c.gamma},
          {"kappa", c.kappa},
          {"nu", c.nu},
          {"T", c.T},
          {"max_iter", c.max_iter},
          {"contraction_tol", c.contraction_tol},
          {"t_min", c.grid.t_min},
          {"per_decade", c.grid.per_decade},
          {"max_halvings", c.max_halvings},
          {"data_gate", c.data_gate},
          {"gate_resolution", c.gate_resolution}};
}

nlohmann::json ic_json(const IcSection& s) {
  return {{"type", s.type},           {"theta", s.spec.theta}, {"nu", s.spec.nu},
          {"log_weights", s.spec.log_weights},
          {"d", s.spec.d},            {"N", s.spec.N},         {"seed", s.spec.seed},
          {"mass_conserving", s.spec.mass_conserving},
          {"amplitude", s.spec.amplitude},
          {"mode", s.mode},           {"replicas", s.replicas}, {"replica", s.replica}};
}

nlohmann::json blowup_json(const BlowupSection& s) {
  return {{"regime", to_string(s.spec.regime)},
          {"lambda", s.spec.lambda},
          {"epsilon", s.spec.epsilon},
          {"eps_c", s.spec.eps_c},
          {"eps_s", s.spec.eps_s},
          {"K_max", s.spec.K_max},
          {"seed", s.spec.seed},
          {"M", s.M},
          {"epsilon_grid", s.epsilon_grid},
          {"probe_N", s.probe_N},
          {"probe_M", s.probe_M}};
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["command"] = c.command ? to_string(*c.command) : "";
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
  if (c.equation) {
    j["equation"] = equation_json(c.equation->spec);
    if (c.equation->theta) j["equation"]["theta"] = to_string(*c.equation->theta);
  }
  if (c.ic) j["ic"] = ic_json(*c.ic);
  if (c.solver) j["solver"] = solver_json(*c.solver);
  if (c.blowup) j["blowup"] = blowup_json(*c.blowup);
  if (c.probe)
    j["probe"] = {{"M", c.probe->M},
                  {"j_lo", c.probe->options.j_lo},
                  {"j_hi", c.probe->options.j_hi},
                  {"fit_log", c.probe->options.fit_log}};
  if (c.asymptotics) j["asymptotics"] = {{"triples", c.asymptotics->triples}, {"per_decade", c.asymptotics->per_decade}};
  return j;
}

nlohmann::json to_json(const CriticalityReport& r) {
  return {{"kind", to_string(r.kind)},
          {"tau", rational_json(r.tau)},
          {"a", rational_json(r.a)},
          {"b", rational_json(r.b)},
          {"d", r.d},
          {"degree_m", r.degree_m},
          {"theta", rational_json(r.theta)},
          {"sigma", rational_json(r.sigma)},
          {"alpha_min", rational_json(r.alpha_min)},
          {"delta", rational_json(r.delta)},
          {"critical_exponent", rational_json(r.critical_exponent)},
          {"chi0", rational_json(r.chi0)},
          {"chi1", rational_json(r.chi1)},
          {"beta0_at_alpha_min", rational_json(r.beta0_at_alpha_min)},
          {"regime", to_string(r.regime)},
          {"r_threshold_fix1", rational_json(r.r_threshold_fix1)},
          {"r_threshold_fix2", rational_json(r.r_threshold_fix2)},
          {"notes", r.notes}};
}

std::vector<GoldenRow> golden_table() {
  struct Narrative {
    EquationKind kind;
    Regime regime;
    const char* flag;
  };
  const Narrative rows[] = {
      {EquationKind::surface_growth, Regime::deterministic_sufficient,
       "narrative states delta > 3/4 while the scaling computation gives delta = 3/4"},
      {EquationKind::kpz, Regime::critical_open, nullptr},
      {EquationKind::ks, Regime::random_ic_helps, nullptr},
      {EquationKind::reaction_diffusion, Regime::random_ic_insufficient, nullptr},
  };
  std::vector<GoldenRow> out;
  for (const auto& n : rows) {
    const EquationSpec s = EquationSpec::catalogue(n.kind);
    const CriticalityReport r = classify(s);
    GoldenRow g{n.kind, s.tau, s.sigma, s.a, s.b, s.alpha_min, r.delta, "C^" + to_string(r.critical_exponent),
                r.r_threshold_fix1, n.regime, r.regime, {}};
    if (n.flag) g.flags.emplace_back(n.flag);
    if (g.regime != g.computed_regime)
      g.flags.push_back("narrative regime " + to_string(g.regime) + " differs from the chi0/tau rule at theta = " +
                        to_string(s.theta_default) + " (" + to_string(g.computed_regime) + ")");
    out.push_back(std::move(g));
  }
  return out;
}

std::string golden_table_text(const std::vector<GoldenRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(20) << "equation" << std::setw(6) << "tau" << std::setw(7) << "sigma" << std::setw(5)
     << "a" << std::setw(5) << "b" << std::setw(11) << "alpha_min" << std::setw(7) << "delta" << std::setw(10)
     << "critical" << std::setw(8) << "r_fix1" << std::setw(26) << "regime" << "computed\n";
  for (const auto& r : rows) {
    os << std::setw(20) << to_string(r.kind) << std::setw(6) << to_string(r.tau) << std::setw(7)
       << to_string(r.sigma) << std::setw(5) << to_string(r.a) << std::setw(5) << to_string(r.b) << std::setw(11)
       << to_string(r.alpha_min) << std::setw(7) << to_string(r.delta) << std::setw(10) << r.critical_space
       << std::setw(8) << to_string(r.r_threshold_fix1) << std::setw(26) << to_string(r.regime)
       << to_string(r.computed_regime) << '\n';
  }
  for (const auto& r : rows)
    for (const auto& f : r.flags) os << "note (" << to_string(r.kind) << "): " << f << '\n';
  return os.str();
}

nlohmann::json golden_table_json(const std::vector<GoldenRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"equation", to_string(r.kind)},
                 {"tau", to_string(r.tau)},
                 {"sigma", to_string(r.sigma)},
                 {"a", to_string(r.a)},
                 {"b", to_string(r.b)},
                 {"alpha_min", to_string(r.alpha_min)},
                 {"delta", to_string(r.delta)},
                 {"critical_space", r.critical_space},
                 {"r_threshold_fix1", to_string(r.r_threshold_fix1)},
                 {"regime", to_string(r.regime)},
                 {"computed_regime", to_string(r.computed_regime)},
                 {"flags", r.flags}});
  return j;
}

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + p.string() + "'");
  f << text;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

SpectralField initial_field(const IcSection& ic) {
  const TorusLattice lat = ic.spec.lattice();
  if (ic.type == "sine") return SpectralField::sine(lat, {ic.mode, 0}, ic.spec.amplitude);
  if (ic.type == "cosine") return SpectralField::cosine(lat, {ic.mode, 0}, 0.5 * ic.spec.amplitude);
  return sample_ic(ic.spec, ic.replica).field;
}

nlohmann::json picard_json(const PicardResult& r, const PicardConfig& c) {
  nlohmann::json j{{"formulation", to_string(r.formulation)},
                   {"params", solver_json(c)},
                   {"converged", r.converged},
                   {"iteration_converged", r.iteration_converged},
                   {"data_gates_ok", r.data_gates_ok},
                   {"T_requested", r.T_requested},
                   {"T_effective", r.T_effective},
                   {"halvings", r.halvings},
                   {"ratios", r.contraction_ratios},
                   {"message", r.message}};
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : r.gates)
    gates.push_back({{"name", g.name},
                     {"ok", g.ok},
                     {"window_ends", g.report.window_ends},
                     {"window_values", g.report.window_values}});
  j["gates"] = gates;
  if (r.terms)
    j["terms"] = {{"double_paraproduct", r.terms->double_paraproduct},
                  {"r_paraproduct", r.terms->r_paraproduct},
                  {"r_term", r.terms->r_term}};
  if (r.fix2_residual) j["fix2_residual"] = *r.fix2_residual;
  return j;
}

int run_classify(const ExperimentConfig& c, const fs::path& dir, std::ostream& out) {
  if (c.equation) {
    const auto& e = *c.equation;
    const CriticalityReport r = e.theta ? classify(e.spec, *e.theta) : classify(e.spec);
    const nlohmann::json j = to_json(r);
    write_file(dir / "classify.json", j.dump(2) + "\n");
    out << j.dump(2) << '\n';
    return 0;
  }
  const auto rows = golden_table();
  const std::string text = golden_table_text(rows);
  write_file(dir / "classify.json", golden_table_json(rows).dump(2) + "\n");
  write_file(dir / "classify.txt", text);
  out << text;
  return 0;
}

int run_sample(const ExperimentConfig& c, const fs::path& dir, std::ostream& out) {
  IcSection ic = *c.ic;
  ic.spec.seed = *c.seed;
  for (std::size_t r = 0; r < ic.replicas; ++r) {
    const auto rep = ic.replica + r;
    const GaussianSample s = sample_ic(ic.spec, rep);
    write_file(dir / ("sample_" + std::to_string(rep) + ".json"), to_json(s.field).dump() + "\n");
  }
  out << "wrote " << ic.replicas << " samples to " << dir.string() << '\n';
  return 0;
}

int run_probe(const ExperimentConfig& c, const fs::path& dir, std::ostream& out) {
  IcSection ic = *c.ic;
  ic.spec.seed = *c.seed;
  const ProbeSection p = c.probe.value_or(ProbeSection{});
  const DyadicPartition partition(ic.spec.lattice());
  const ProbeTable t = block_growth_probe(ic.spec, p.M, partition, p.options);
  write_file(dir / "probe.csv", "# schema " + std::to_string(csv_schema_version) + "\n" + probe_csv(t));
  const nlohmann::json j{{"slope", t.slope},     {"slope_se", t.slope_se}, {"log_exponent", t.log_exponent},
                         {"plain_slope", t.plain_slope}, {"j_lo", t.j_lo}, {"j_hi", t.j_hi}, {"M", p.M}};
  write_file(dir / "probe.json", j.dump(2) + "\n");
  out << "block slope " << t.slope << " +- " << t.slope_se << " (theta = " << ic.spec.theta << ")\n";
  return 0;
}

int run_solve(const ExperimentConfig& c, const fs::path& dir, std::ostream& out) {
  IcSection ic = *c.ic;
  if (c.seed) ic.spec.seed = *c.seed;
  const SpectralField u0 = initial_field(ic);
  const PicardConfig& pc = *c.solver;
  const PicardResult r = solve(c.equation->spec, u0, pc);
  write_file(dir / "solve.json", picard_json(r, pc).dump(2) + "\n");
  std::ostringstream csv;
  csv << "# schema " << csv_schema_version << "\niteration,norm,increment,ratio\n";
  for (std::size_t i = 0; i < r.iterate_norms.size(); ++i) {
    csv << i + 1 << ',' << num(r.iterate_norms[i]) << ',' << num(r.increments[i]) << ',';
    if (i >= 1 && i - 1 < r.contraction_ratios.size()) csv << num(r.contraction_ratios[i - 1]);
    csv << '\n';
  }
  write_file(dir / "iterates.csv", csv.str());
  if (r.u) write_file(dir / "u_T.json", to_json(r.u->final()).dump() + "\n");
  out << r.message << '\n';
  return r.converged ? 0 : 3;
}

int run_blowup(const ExperimentConfig& c, const fs::path& dir, std::ostream& out) {
  BlowupSection b = *c.blowup;
  b.spec.seed = *c.seed;
  const TrichotomyReport rep = trichotomy_mc(b.spec, b.M, b.epsilon_grid);
  std::ostringstream modes;
  modes << "# schema " << csv_schema_version << '\n' << modes_csv(rep);
  write_file(dir / "modes.csv", modes.str());
  nlohmann::json eps = nlohmann::json::array();
  for (const auto& e : rep.epsilon_rows)
    eps.push_back({{"epsilon", e.epsilon},
                   {"p_inf", e.p_inf},
                   {"se", e.se},
                   {"union_bound", e.union_bound},
                   {"tail_bound", e.tail_bound}});
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& k : rep.counts)
    counts.push_back({{"K", k.K}, {"mean_count", k.mean_count}, {"se", k.se}, {"expected", k.expected}});
  nlohmann::json j{{"regime", to_string(b.spec.regime)}, {"M", rep.M},          {"pass", rep.pass},
                   {"verdict", rep.verdict},           {"epsilon_rows", eps}, {"counts", counts},
                   {"median_inf_tau", rep.median_inf_tau}};
  if (b.probe_N > 0) {
    const XiRegularity xr = regularity_of_Xi(b.spec, b.probe_N, b.probe_M);
    j["xi_slope"] = xr.slope;
    j["xi_slope_se"] = xr.slope_se;
  }
  write_file(dir / "trichotomy.json", j.dump(2) + "\n");
  out << rep.verdict << '\n';
  return 0;
}

int run_asymptotics(const ExperimentConfig& c, const fs::path& dir, std::ostream& out) {
  const AsymptoticsSection a = c.asymptotics.value_or(AsymptoticsSection{});
  std::ostringstream csv;
  csv << "# schema " << csv_schema_version << "\nnu,p,tau,compensated_sup,compensated_inf,slope,slope_se,expected\n";
  for (const auto& t : a.triples) {
    const AsymptoticReport r = asymptotic_check(t[0], t[1], t[2], a.per_decade);
    csv << num(t[0]) << ',' << num(t[1]) << ',' << num(t[2]) << ',' << num(r.compensated_sup) << ','
        << num(r.compensated_inf) << ',' << num(r.slope) << ',' << num(r.slope_stderr) << ',' << num(-t[1] / t[2])
        << '\n';
    out << "nu=" << t[0] << " p=" << t[1] << " tau=" << t[2] << ": slope " << r.slope << " (expected "
        << -t[1] / t[2] << "), compensated sup " << r.compensated_sup << '\n';
  }
  write_file(dir / "asymptotics.csv", csv.str());
  return 0;
}

}  // namespace

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    require_sections(config);
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    nlohmann::json manifest{{"config", to_json(config)},
                            {"config_source", config.source},
                            {"csv_schema", csv_schema_version},
                            {"versions",
                             {{"roughstart", library_version},
                              {"fftw", fft::library_version()},
                              {"boost", BOOST_LIB_VERSION},
                              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                            std::to_string(EIGEN_MINOR_VERSION)},
                              {"toml++", std::to_string(TOML_LIB_MAJOR) + "." + std::to_string(TOML_LIB_MINOR) + "." +
                                             std::to_string(TOML_LIB_PATCH)}}}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    switch (*config.command) {
      case Command::classify: return run_classify(config, dir, out);
      case Command::sample: return run_sample(config, dir, out);
      case Command::probe: return run_probe(config, dir, out);
      case Command::solve: return run_solve(config, dir, out);
      case Command::blowup: return run_blowup(config, dir, out);
      case Command::asymptotics: return run_asymptotics(config, dir, out);
    }
    return 2;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    err << "filesystem error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace roughstart
