#include "roughstart/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

#include "roughstart/criticality.hpp"
#include "roughstart/quadrature.hpp"
#include "roughstart/stats.hpp"

namespace roughstart {

std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::fix1: return "fix1";
    case Formulation::fix2: return "fix2";
    case Formulation::second_order: return "second_order";
    case Formulation::classical: return "classical";
  }
  return "?";
}

Formulation formulation_from_string(const std::string& name) {
  for (auto f : {Formulation::fix1, Formulation::fix2, Formulation::second_order, Formulation::classical})
    if (to_string(f) == name) return f;
  throw ValidationError("unknown formulation '" + name + "'");
}

TimeGrid GridSpec::make(double T, int N, double tau) const {
  double t0 = t_min;
  if (t0 <= 0) t0 = std::min(0.01 * std::pow(static_cast<double>(N), -tau), T / 512.0);
  t0 = std::min(t0, T / 512.0);
  return TimeGrid::graded(T, t0, per_decade);
}

namespace {

template <class F>
Trajectory node_map(const Trajectory& a, F f, Exec exec) {
  const std::size_t nt = a.size();
  std::vector<SpectralField> out(nt, SpectralField(a.lattice()));
  const auto n = static_cast<long>(nt);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long li = 0; li < n; ++li) {
    const auto i = static_cast<std::size_t>(li);
    out[i] = f(i);
  }
  return Trajectory(a.grid, std::move(out));
}

void require_same_grid(const Trajectory& a, const Trajectory& b, const char* what) {
  if (!(a.grid == b.grid)) throw ValidationError(std::string(what) + ": grid mismatch");
  if (!(a.lattice() == b.lattice())) throw ValidationError(std::string(what) + ": lattice mismatch");
}

double delta_of(const EquationSpec& spec) { return to_double(classify(spec).delta); }

void require_burgers(const EquationSpec& spec, const char* what) {
  if (spec.kind != EquationKind::burgers || spec.d != 1)
    throw ValidationError(std::string(what) + ": needs the Burgers equation in d = 1");
}

int lattice_N(const SpectralField& f) { return f.lattice().radius(); }

/// Everything a Picard run needs at one horizon.
struct Setup {
  TimeGrid grid;
  StochasticTrajectory objects;
  Trajectory v0;
  std::function<Trajectory(const Trajectory&)> phi;
  WeightedNormParams norm;
};

struct PicardOutcome {
  Trajectory v;
  std::vector<double> norms, increments, ratios;
  bool converged = false;
  std::string message;
};

PicardOutcome iterate(const Setup& s, const PicardConfig& config, const DyadicPartition& partition) {
  PicardOutcome out{s.v0, {}, {}, {}, false, ""};
  const double cap = 1e8;
  double first_norm = weighted_norm(s.v0, s.norm, partition).value;
  double prev_inc = -1.0;
  for (int it = 0; it < config.max_iter; ++it) {
    Trajectory next = s.phi(out.v);
    const double inc = weighted_norm(next - out.v, s.norm, partition).value;
    const double nrm = weighted_norm(next, s.norm, partition).value;
    out.v = std::move(next);
    out.norms.push_back(nrm);
    out.increments.push_back(inc);
    if (!std::isfinite(inc) || !std::isfinite(nrm)) {
      out.message = "non-finite iterate";
      return out;
    }
    const double scale = std::max(1.0, nrm);
    if (prev_inc > 0) out.ratios.push_back(inc / prev_inc);
    if (inc <= config.contraction_tol * scale) {
      out.converged = true;
      out.message = "converged";
      return out;
    }
    if (nrm > cap * std::max(1.0, first_norm)) {
      out.message = "iterates diverge";
      return out;
    }
    if (prev_inc > 0 && inc >= prev_inc) {
      std::ostringstream msg;
      msg << "no contraction at iteration " << it << " (ratio " << inc / prev_inc << ")";
      out.message = msg.str();
      return out;
    }
    prev_inc = inc;
  }
  out.message = "max_iter reached";
  return out;
}

using SetupBuilder = std::function<Setup(double T)>;

PicardResult run(const PicardConfig& config, const DyadicPartition& partition, const SetupBuilder& build,
                 const std::function<void(const Setup&, PicardResult&)>& gates,
                 const std::function<void(const Setup&, PicardResult&)>& finish) {
  PicardResult res;
  res.formulation = config.formulation;
  res.T_requested = config.T;
  double T = config.T;
  std::string last;
  for (int h = 0; h <= config.max_halvings; ++h) {
    const Setup s = build(T);
    if (h == 0 && gates) gates(s, res);
    PicardOutcome o = iterate(s, config, partition);
    res.iterate_norms = std::move(o.norms);
    res.increments = std::move(o.increments);
    res.contraction_ratios = std::move(o.ratios);
    res.halvings = h;
    res.T_effective = T;
    last = o.message;
    if (o.converged) {
      res.iteration_converged = true;
      res.v = std::move(o.v);
      if (finish) finish(s, res);
      break;
    }
    T *= 0.5;
  }
  res.converged = res.iteration_converged && res.data_gates_ok;
  std::ostringstream msg;
  if (res.iteration_converged)
    msg << "Picard iteration converged at T = " << res.T_effective << " after " << res.halvings << " halvings";
  else
    msg << "no contraction after " << config.max_halvings << " halvings (last: " << last << ")";
  for (const auto& g : res.gates)
    if (!g.ok) msg << "; data gate '" << g.name << "' failed (norm does not vanish as T -> 0)";
  res.message = msg.str();
  return res;
}

GateReport gate(const std::string& name, const Trajectory& traj, double alpha, double beta, double T,
                double floor, const DyadicPartition& partition) {
  GateReport g;
  g.name = name;
  VanishingOptions opts;
  opts.t_floor = floor;
  try {
    g.report = vanishing_check(traj, {alpha, beta, T, 0.0, 0.0}, partition, opts);
    g.ok = g.report.vanishes;
  } catch (const NumericalError&) {
    g.ok = false;
  }
  return g;
}

double gate_floor(const EquationSpec& spec, int N, const PicardConfig& config) {
  return config.gate_resolution * std::pow(static_cast<double>(N), -to_double(spec.tau));
}

}  // namespace

void validate_config(const EquationSpec& spec, const PicardConfig& c) {
  spec.validate();
  if (!(c.T > 0)) throw ValidationError("solver: T must be positive");
  if (c.max_iter < 1) throw ValidationError("solver: max_iter must be >= 1");
  if (!(c.contraction_tol > 0)) throw ValidationError("solver: contraction_tol must be positive");
  switch (c.formulation) {
    case Formulation::fix1: {
      const double delta = delta_of(spec);
      if (c.alpha < to_double(spec.alpha_min)) throw ValidationError("fix1: alpha below alpha_min");
      if (!fix1_feasible(c.beta, delta)) throw ValidationError("fix1: need beta < 1/2 and beta <= 1 - delta");
      break;
    }
    case Formulation::fix2: {
      const double delta = delta_of(spec);
      if (c.alpha < to_double(spec.alpha_min)) throw ValidationError("fix2: alpha below alpha_min");
      if (!fix2_feasible(c.beta, c.gamma, delta))
        throw ValidationError(
            "fix2: need beta < 1/2, beta + delta <= 1, gamma + beta < 1 and delta + gamma <= 1");
      break;
    }
    case Formulation::second_order:
      require_burgers(spec, "second_order");
      if (!(c.nu > 0.5 && c.nu <= 1.0)) throw ValidationError("second_order: need nu in (1/2, 1]");
      if (!(c.kappa > 1.0 && c.kappa <= 2.0 * c.nu)) throw ValidationError("second_order: need kappa in (1, 2 nu]");
      if (!(c.beta > 0.25 && c.beta < 0.5)) throw ValidationError("second_order: need beta in (1/4, 1/2)");
      break;
    case Formulation::classical:
      require_burgers(spec, "classical");
      if (!(c.nu > 1.0)) throw ValidationError("classical: need nu > 1");
      if (!(c.kappa > 1.0 && c.kappa <= c.nu)) throw ValidationError("classical: need kappa in (1, nu]");
      if (!(c.beta > 0.25 && c.beta < 0.5)) throw ValidationError("classical: need beta in (1/4, 1/2)");
      break;
  }
}

Trajectory apply_V(const EquationSpec& spec, const Trajectory& u1, const Trajectory& u2, Exec exec) {
  require_same_grid(u1, u2, "apply_V");
  const LinearOperator op(spec, u1.lattice());
  Trajectory g = node_map(u1, [&](std::size_t i) { return nonlinearity(spec, u1.at(i), u2.at(i)); }, exec);
  return duhamel(op, g, exec);
}

Trajectory apply_V_derivative(const EquationSpec& spec, const Trajectory& f, Exec exec) {
  require_burgers(spec, "apply_V_derivative");
  const LinearOperator op(spec, f.lattice());
  Trajectory g = node_map(f, [&](std::size_t i) { return partial(f.at(i), 0); }, exec);
  return duhamel(op, g, exec);
}

PicardResult solve_fix1(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config, Exec exec) {
  PicardConfig c = config;
  c.formulation = Formulation::fix1;
  validate_config(spec, c);
  const DyadicPartition partition(u0.lattice());
  const int N = lattice_N(u0);
  const double tau = to_double(spec.tau);

  auto build = [&](double T) {
    TimeGrid grid = c.grid.make(T, N, tau);
    StochasticTrajectory obj = build_objects(u0, spec, grid);
    Trajectory eta = obj.eta0;
    auto phi = [&spec, eta, exec](const Trajectory& u) { return eta + apply_V(spec, u, u, exec); };
    return Setup{grid, std::move(obj), eta, phi, {c.alpha, c.beta, T, 0.0, 0.0}};
  };
  auto gates = [&](const Setup& s, PicardResult& r) {
    if (!c.data_gate) return;
    GateReport g = gate("eta0 in V^{alpha,beta}", s.objects.eta0, c.alpha, c.beta, s.grid.T(),
                        gate_floor(spec, N, c), partition);
    r.data_gates_ok = g.ok;
    r.gates.push_back(std::move(g));
  };
  auto finish = [](const Setup&, PicardResult& r) { r.u = r.v; };
  return run(c, partition, build, gates, finish);
}

PicardResult solve_fix2(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config, Exec exec) {
  PicardConfig c = config;
  c.formulation = Formulation::fix2;
  validate_config(spec, c);
  const DyadicPartition partition(u0.lattice());
  const int N = lattice_N(u0);
  const double tau = to_double(spec.tau);

  auto build = [&](double T) {
    TimeGrid grid = c.grid.make(T, N, tau);
    StochasticTrajectory obj = build_objects(u0, spec, grid);
    Trajectory eta0 = obj.eta0, eta2 = obj.eta2;
    auto phi = [&spec, eta0, eta2, exec](const Trajectory& v) {
      const LinearOperator op(spec, v.lattice());
      Trajectory g = node_map(
          v,
          [&](std::size_t i) {
            SpectralField s = nonlinearity(spec, v.at(i), v.at(i));
            s += nonlinearity(spec, v.at(i), eta0.at(i));
            s += nonlinearity(spec, eta0.at(i), v.at(i));
            return s;
          },
          exec);
      return duhamel(op, g, exec) + eta2;
    };
    return Setup{grid, std::move(obj), eta2, phi, {c.alpha, c.beta, T, 0.0, 0.0}};
  };
  auto gates = [&](const Setup& s, PicardResult& r) {
    if (!c.data_gate) return;
    const double floor = gate_floor(spec, N, c);
    GateReport g0 = gate("eta0 in V^{alpha,gamma}", s.objects.eta0, c.alpha, c.gamma, s.grid.T(), floor, partition);
    GateReport g2 = gate("eta2 in V^{alpha,beta}", s.objects.eta2, c.alpha, c.beta, s.grid.T(), floor, partition);
    r.data_gates_ok = g0.ok && g2.ok;
    r.gates.push_back(std::move(g0));
    r.gates.push_back(std::move(g2));
  };
  auto finish = [](const Setup& s, PicardResult& r) { r.u = *r.v + s.objects.eta0; };
  return run(c, partition, build, gates, finish);
}

PicardResult solve_fix2(const EquationSpec& spec, const GaussianSample& ic, const PicardConfig& config, Exec exec) {
  return solve_fix2(spec, ic.field, config, exec);
}

Trajectory remainder_R(const EquationSpec& spec, const Trajectory& v, const StochasticTrajectory& objects,
                       const DyadicPartition& partition, Exec exec) {
  require_burgers(spec, "remainder_R");
  require_same_grid(v, objects.eta0, "remainder_R");
  const Trajectory& e0 = objects.eta0;
  Trajectory f = node_map(
      v,
      [&](std::size_t i) {
        SpectralField s = convolve(v.at(i), v.at(i));
        s.axpy(2.0, paraproduct_ge(v.at(i), e0.at(i), partition));
        return s;
      },
      exec);
  return apply_V_derivative(spec, f, exec) + objects.eta2;
}

namespace {

Trajectory lt_eta0(const Trajectory& w, const Trajectory& e0, const DyadicPartition& partition, Exec exec) {
  return node_map(w, [&](std::size_t i) { return paraproduct_lt(w.at(i), e0.at(i), partition); }, exec);
}

struct SecondOrderPieces {
  Trajectory dpp;  // 4 V(V(v < eta0) < eta0)
  Trajectory rpp;  // 2 V(R < eta0)
  Trajectory r;    // R(v)
};

SecondOrderPieces second_order_pieces(const EquationSpec& spec, const Trajectory& v,
                                      const StochasticTrajectory& obj, const DyadicPartition& partition, Exec exec) {
  const Trajectory& e0 = obj.eta0;
  Trajectory inner = apply_V_derivative(spec, lt_eta0(v, e0, partition, exec), exec);
  Trajectory dpp = 4.0 * apply_V_derivative(spec, lt_eta0(inner, e0, partition, exec), exec);
  Trajectory r = remainder_R(spec, v, obj, partition, exec);
  Trajectory rpp = 2.0 * apply_V_derivative(spec, lt_eta0(r, e0, partition, exec), exec);
  return {std::move(dpp), std::move(rpp), std::move(r)};
}

PicardResult solve_burgers_local(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& c,
                                 Exec exec) {
  validate_config(spec, c);
  const DyadicPartition partition(u0.lattice());
  const int N = lattice_N(u0);
  const double tau = to_double(spec.tau);
  const bool second = c.formulation == Formulation::second_order;

  auto build = [&, second](double T) {
    TimeGrid grid = c.grid.make(T, N, tau);
    StochasticTrajectory obj = build_objects(u0, spec, grid);
    Trajectory v0 = obj.eta2;
    auto shared = std::make_shared<StochasticTrajectory>(obj);
    std::function<Trajectory(const Trajectory&)> phi;
    if (second) {
      phi = [&spec, shared, &partition, exec](const Trajectory& v) {
        SecondOrderPieces p = second_order_pieces(spec, v, *shared, partition, exec);
        return p.dpp + p.rpp + p.r;
      };
    } else {
      phi = [&spec, shared, &partition, exec](const Trajectory& v) {
        Trajectory r = remainder_R(spec, v, *shared, partition, exec);
        r.axpy(2.0, apply_V_derivative(spec, lt_eta0(v, shared->eta0, partition, exec), exec));
        return r;
      };
    }
    return Setup{grid, std::move(obj), v0, phi, {0.0, c.beta, T, c.kappa, 0.0}};
  };
  auto finish = [&, second](const Setup& s, PicardResult& r) {
    const Trajectory& v = *r.v;
    r.u = v + s.objects.eta0;
    r.fix2_residual = fix2_residual(spec, v, s.objects, c.beta, partition);
    if (second) {
      SecondOrderPieces p = second_order_pieces(spec, v, s.objects, partition, exec);
      SecondOrderTerms t;
      t.double_paraproduct = weighted_norm(p.dpp, s.norm, partition).value;
      t.r_paraproduct = weighted_norm(p.rpp, s.norm, partition).value;
      t.r_term = weighted_norm(p.r, s.norm, partition).value;
      r.terms = t;
    }
  };
  return run(c, partition, build, nullptr, finish);
}

}  // namespace

PicardResult solve_second_order(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config,
                                Exec exec) {
  PicardConfig c = config;
  c.formulation = Formulation::second_order;
  return solve_burgers_local(spec, u0, c, exec);
}

PicardResult solve_classical(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config,
                             Exec exec) {
  PicardConfig c = config;
  c.formulation = Formulation::classical;
  return solve_burgers_local(spec, u0, c, exec);
}

PicardResult solve(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config, Exec exec) {
  switch (config.formulation) {
    case Formulation::fix1: return solve_fix1(spec, u0, config, exec);
    case Formulation::fix2: return solve_fix2(spec, u0, config, exec);
    case Formulation::second_order: return solve_second_order(spec, u0, config, exec);
    case Formulation::classical: return solve_classical(spec, u0, config, exec);
  }
  throw ValidationError("solve: unknown formulation");
}

double fix2_residual(const EquationSpec& spec, const Trajectory& v, const StochasticTrajectory& objects,
                     double beta, const DyadicPartition& partition) {
  require_same_grid(v, objects.eta0, "fix2_residual");
  Trajectory r = v - objects.eta2;
  r -= apply_V(spec, v, v);
  r -= apply_V(spec, v, objects.eta0);
  r -= apply_V(spec, objects.eta0, v);
  return weighted_norm(r, {0.0, beta, v.grid.T(), 0.0, 0.0}, partition).value;
}

Trajectory etd_reference(const EquationSpec& spec, const SpectralField& u0, double T, double dt, bool nonlinear) {
  if (!(T > 0) || !(dt > 0)) throw ValidationError("etd_reference: need T > 0 and dt > 0");
  const LinearOperator op(spec, u0.lattice());
  const int n = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
  const double h = T / n;
  if (op.spectral_radius() * h > 50.0) throw ValidationError("etd_reference: step too large (|lambda| dt > 50)");
  const auto& lam = op.eigenvalues();
  const std::size_t nk = lam.size();
  std::vector<double> E(nk), P1(nk), P2(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    const double z = h * lam[k];
    E[k] = std::exp(z);
    P1[k] = h * phi1(z);
    P2[k] = h * phi2(z);
  }
  auto N = [&](const SpectralField& u) {
    return nonlinear ? nonlinearity(spec, u, u) : SpectralField(u.lattice(), u.hermitian());
  };
  std::vector<SpectralField> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  SpectralField u = u0;
  out.push_back(u);
  for (int s = 0; s < n; ++s) {
    const SpectralField nu = N(u);
    SpectralField a = u;
    auto ac = a.coeffs();
    const auto uc = u.coeffs();
    const auto nc = nu.coeffs();
    for (std::size_t k = 0; k < nk; ++k) ac[k] = E[k] * uc[k] + P1[k] * nc[k];
    const SpectralField na = N(a);
    SpectralField next = a;
    auto xc = next.coeffs();
    const auto nac = na.coeffs();
    for (std::size_t k = 0; k < nk; ++k) xc[k] += P2[k] * (nac[k] - nc[k]);
    if (u0.hermitian()) next.symmetrize();
    u = std::move(next);
    out.push_back(u);
  }
  return Trajectory(TimeGrid::uniform(T, n), std::move(out));
}

BoundConstant nonlinear_bound(const EquationSpec& spec, const Trajectory& u, double alpha, double beta, double delta,
                              const DyadicPartition& partition) {
  const double T = u.grid.T();
  const WeightedNormParams p{alpha, beta, T, 0.0, 0.0};
  BoundConstant b;
  b.lhs = weighted_norm(apply_V(spec, u, u), p, partition).value;
  const double un = weighted_norm(u, p, partition).value;
  b.rhs = std::pow(T, 1.0 - beta - delta) * un * un;
  b.constant = b.rhs > 0 ? b.lhs / b.rhs : 0.0;
  return b;
}

BoundConstant mixed_bound(const EquationSpec& spec, const Trajectory& u1, const Trajectory& u2, double alpha,
                          double beta, double gamma, double delta, const DyadicPartition& partition) {
  const double T = u1.grid.T();
  BoundConstant b;
  b.lhs = weighted_norm(apply_V(spec, u1, u2), {alpha, beta, T, 0.0, 0.0}, partition).value;
  b.rhs = std::pow(T, 1.0 - delta - gamma) * weighted_norm(u1, {alpha, beta, T, 0.0, 0.0}, partition).value *
          weighted_norm(u2, {alpha, gamma, T, 0.0, 0.0}, partition).value;
  b.constant = b.rhs > 0 ? b.lhs / b.rhs : 0.0;
  return b;
}

double double_paraproduct_prefactor(const EquationSpec& spec, const StochasticTrajectory& objects, double kappa,
                                    double beta, const DyadicPartition& partition, int iterations) {
  require_burgers(spec, "double_paraproduct_prefactor");
  const WeightedNormParams p{0.0, beta, objects.eta0.grid.T(), kappa, 0.0};
  const Trajectory& e0 = objects.eta0;
  Trajectory v = objects.eta2;
  double vn = weighted_norm(v, p, partition).value;
  if (!(vn > 0)) return 0.0;
  double best = 0.0;
  for (int it = 0; it < iterations; ++it) {
    v *= 1.0 / vn;
    Trajectory inner = apply_V_derivative(spec, lt_eta0(v, e0, partition, Exec::parallel));
    Trajectory w = 4.0 * apply_V_derivative(spec, lt_eta0(inner, e0, partition, Exec::parallel));
    const double wn = weighted_norm(w, p, partition).value;
    best = std::max(best, wn);
    if (!(wn > 0)) break;
    v = std::move(w);
    vn = wn;
  }
  return best;
}

PrefactorTrend prefactor_trend(const EquationSpec& spec, const SpectralField& u0, const PicardConfig& config,
                               int count) {
  require_burgers(spec, "prefactor_trend");
  if (count < 3) throw ValidationError("prefactor_trend: need at least 3 horizons");
  const DyadicPartition partition(u0.lattice());
  PrefactorTrend out;
  std::vector<double> x, y;
  double T = config.T;
  for (int i = 0; i < count; ++i, T *= 0.5) {
    const TimeGrid grid = config.grid.make(T, lattice_N(u0), to_double(spec.tau));
    const StochasticTrajectory obj = build_objects(u0, spec, grid);
    const double pf = double_paraproduct_prefactor(spec, obj, config.kappa, config.beta, partition);
    out.T.push_back(T);
    out.prefactor.push_back(pf);
    x.push_back(std::log(tamed_log(T)));
    y.push_back(std::log(pf));
  }
  const auto fit = stats::fit_line(x, y);
  out.exponent = fit.slope;
  out.exponent_se = fit.slope_se;
  return out;
}

}  // namespace roughstart
