/*
 * Copyright 2026 The mswell Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mswell/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseLU>

#include "mswell/errors.hpp"

namespace mswell {

HydroCoefficients eliminate_hydrodynamics(const WellModel& model, int edge, const std::vector<NodeState>& states) {
  const auto& e = model.mesh.edge(edge);
  const FluidModel& fluid = *model.fluid;
  const auto& sp = states[static_cast<std::size_t>(e.parent)];
  const auto& sc = states[static_cast<std::size_t>(e.child)];
  const PrimarySplit split_p = split_primary_secondary(sp, fluid, e.parent);
  const PrimarySplit split_c = split_primary_secondary(sc, fluid, e.child);
  const NodeLocal lp = make_node_local(sp, fluid, split_p, model.mesh.node_volume(e.parent));
  const NodeLocal lc = make_node_local(sc, fluid, split_c, model.mesh.node_volume(e.child));
  const EdgeFlow f =
      evaluate_edge(e, model.mesh.z(e.parent), model.mesh.z(e.child), lp, lc, fluid, model.dfm, model.friction);
  HydroCoefficients h;
  for (Phase a : kPhases) {
    const int k = index(a);
    h.velocity[k] = f.u[k].v;
    for (int j = 0; j < kMaxPrimary; ++j) {
      h.parent[k][j] = f.u[k].d[kParentOffset + j];
      h.child[k][j] = f.u[k].d[kChildOffset + j];
    }
  }
  return h;
}

MonitoringElimination eliminate_monitoring(const WellModel& model, const std::vector<NodeState>& states,
                                           const std::vector<Accumulation>& previous, Constraint active, double dt) {
  const SystemEvaluation ev = assemble_system(model, states, previous, active, dt, false);
  MonitoringElimination m;
  m.q = ev.q_head;
  m.um = ev.head.um.v;
  for (Phase a : kPhases) m.u[index(a)] = ev.head.u[index(a)].v;
  return m;
}

std::vector<Accumulation> accumulations(const WellModel& model, const std::vector<NodeState>& states) {
  std::vector<Accumulation> acc;
  acc.reserve(states.size());
  for (std::size_t v = 0; v < states.size(); ++v)
    acc.push_back(accumulation(states[v], *model.fluid, model.mesh.node_volume(static_cast<int>(v))));
  return acc;
}

std::vector<double> residual_norms(const SystemEvaluation& ev, int components, bool thermal) {
  std::vector<double> norm(static_cast<std::size_t>(components + (thermal ? 1 : 0)), 0.0);
  for (Eigen::Index r = 0; r < ev.residual.size(); ++r) {
    const auto row = static_cast<std::size_t>(r);
    if (ev.row_kind[row] == RowKind::component)
      norm[static_cast<std::size_t>(ev.row_component[row])] += std::abs(ev.residual[r]);
    else if (ev.row_kind[row] == RowKind::energy)
      norm[static_cast<std::size_t>(components)] += std::abs(ev.residual[r]);
  }
  for (std::size_t k = 0; k < norm.size(); ++k) norm[k] /= std::max(ev.balance_scale[k], 1e-300);
  return norm;
}

double gas_volume(const WellModel& model, const std::vector<NodeState>& states) {
  double v = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i)
    v += model.mesh.node_volume(static_cast<int>(i)) * states[i].s[index(Phase::gas)];
  return v;
}

double head_mass_rate(const WellModel& model, const HeadFlow& head) {
  double m = 0.0;
  for (int i = 0; i < model.fluid->components().size(); ++i)
    m += head.molar[static_cast<std::size_t>(i)].v * model.fluid->molar_mass(i);
  return m;
}

namespace {

bool all_finite(const Eigen::VectorXd& x) { return x.allFinite(); }

}  // namespace

NewtonOutcome newton_solve_timestep(const WellModel& model, std::vector<NodeState>& states, Constraint& constraint,
                                    double dt, const TimeStepConfig& steps, const SolverConfig& config) {
  const FluidModel& fluid = *model.fluid;
  const int nc = fluid.components().size();
  const bool thermal = !fluid.isothermal();
  const int root = model.mesh.root();
  const std::vector<Accumulation> previous = accumulations(model, states);

  NewtonOutcome out;
  std::vector<NodeState> work = states;
  Constraint active = constraint;
  bool changed = false;
  double increment = std::numeric_limits<double>::infinity();
  // Backtracking state: the iterate before the last update and that update.
  std::vector<NodeState> before_update;
  Eigen::VectorXd last_dx;
  std::vector<PrimarySplit> last_splits;
  double last_merit = std::numeric_limits<double>::infinity();
  int halvings = 0;
  int last_np = 0;

  try {
    for (int it = 0;; ++it) {
      SystemEvaluation ev = assemble_system(model, work, previous, active, dt);
      if (active == Constraint::pressure && ev.q_head > model.monitor.max_rate) {
        active = Constraint::rate;
        out.active_set_log.push_back("iteration " + std::to_string(it) + ": head switches to rate control");
        changed = true;
        ev = assemble_system(model, work, previous, active, dt);
      } else if (active == Constraint::rate && work[static_cast<std::size_t>(root)].p < model.monitor.min_head_pressure) {
        active = Constraint::pressure;
        out.active_set_log.push_back("iteration " + std::to_string(it) + ": head switches to pressure control");
        changed = true;
        ev = assemble_system(model, work, previous, active, dt);
      }
      if (!all_finite(ev.residual)) {
        out.failure = "non-finite residual";
        return out;
      }
      const auto norms = residual_norms(ev, nc, thermal);
      const bool residual_ok =
          std::all_of(norms.begin(), norms.end(), [&](double r) { return r <= config.residual_tolerance; });
      const double merit = *std::max_element(norms.begin(), norms.end());
      if (!changed && !residual_ok && it >= config.backtrack_after && merit > last_merit &&
          halvings < config.max_backtracks && last_dx.size() > 0) {
        if (it >= steps.max_newton) {
          out.iterations = it;
          out.failure = "Newton iteration cap reached";
          return out;
        }
        // Retry the previous update at half length.
        ++halvings;
        last_dx *= 0.5;
        work = before_update;
        increment = 0.0;
        for (std::size_t v = 0; v < work.size(); ++v) {
          NodeState& s = work[v];
          const NodeState prior = s;
          apply_increment(s, fluid, last_splits[v], last_dx.data() + static_cast<Eigen::Index>(v) * last_np);
          increment = std::max(increment, config.weight_saturation *
                                                  std::abs(s.s[index(Phase::gas)] - prior.s[index(Phase::gas)]) +
                                              config.weight_pressure * std::abs(s.p - prior.p) +
                                              config.weight_temperature * std::abs(s.T - prior.T));
          if (!(s.p > 0.0) || !std::isfinite(s.T)) {
            out.iterations = it + 1;
            out.failure = "node " + std::to_string(v) + " left the admissible state";
            return out;
          }
          flash_update(s, fluid, model.mesh.node_volume(static_cast<int>(v)), config.appearance_saturation);
          if (s.phases != prior.phases) changed = true;
        }
        continue;
      }
      halvings = 0;
      last_merit = merit;
      if (!changed && (residual_ok || increment <= config.increment_tolerance)) {
        out.converged = true;
        out.iterations = it;
        out.constraint = active;
        out.evaluation = std::move(ev);
        states = std::move(work);
        constraint = active;
        return out;
      }
      if (it >= steps.max_newton) {
        out.iterations = it;
        out.failure = "Newton iteration cap reached";
        return out;
      }

      Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
      lu.compute(ev.jacobian);
      if (lu.info() != Eigen::Success) {
        out.iterations = it + 1;
        out.failure = "singular Jacobian";
        return out;
      }
      Eigen::VectorXd dx = lu.solve(-ev.residual);
      if (lu.info() != Eigen::Success || !all_finite(dx)) {
        out.iterations = it + 1;
        out.failure = "linear solve failed";
        return out;
      }

      const int np = ev.unknowns_per_node;
      double theta = 1.0;
      for (std::size_t v = 0; v < work.size(); ++v) {
        const auto& sp = ev.splits[v];
        const Eigen::Index base = static_cast<Eigen::Index>(v) * np;
        const double dp = std::abs(dx[base + sp.index_of(Unknown::pressure)]);
        if (dp > config.max_pressure_change * work[v].p) theta = std::min(theta, config.max_pressure_change * work[v].p / dp);
        const int ks = sp.index_of(Unknown::gas_saturation);
        if (ks >= 0 && std::abs(dx[base + ks]) > config.max_saturation_change)
          theta = std::min(theta, config.max_saturation_change / std::abs(dx[base + ks]));
      }
      dx *= theta;
      before_update = work;
      last_dx = dx;
      last_splits = ev.splits;
      last_np = ev.unknowns_per_node;
      changed = false;
      increment = 0.0;
      for (std::size_t v = 0; v < work.size(); ++v) {
        NodeState& s = work[v];
        const NodeState before = s;
        apply_increment(s, fluid, ev.splits[v], dx.data() + static_cast<Eigen::Index>(v) * np);
        const double w = config.weight_saturation * std::abs(s.s[index(Phase::gas)] - before.s[index(Phase::gas)]) +
                         config.weight_pressure * std::abs(s.p - before.p) +
                         config.weight_temperature * std::abs(s.T - before.T);
        increment = std::max(increment, w);
        if (!(s.p > 0.0) || !std::isfinite(s.T)) {
          out.iterations = it + 1;
          out.failure = "node " + std::to_string(v) + " left the admissible state";
          return out;
        }
        const PhaseSet q =
            flash_update(s, fluid, model.mesh.node_volume(static_cast<int>(v)), config.appearance_saturation);
        if (q != before.phases) {
          changed = true;
          ++out.phase_changes;
          if (q.size() > before.phases.size()) out.phase_appeared = true;
          out.active_set_log.push_back("iteration " + std::to_string(it) + ": node " + std::to_string(v) + " " +
                                       to_string(before.phases) + " -> " + to_string(q));
        }
      }
    }
  } catch (const MonotonicityError&) {
    throw;
  } catch (const DomainError& e) {
    out.failure = e.what();
  } catch (const NumericalError& e) {
    out.failure = e.what();
  }
  return out;
}

TransientResult run_transient(const WellModel& model, std::vector<NodeState> initial, const TimeStepConfig& steps,
                              const SolverConfig& config, const StepCallback& on_step, bool keep_partial) {
  TransientResult res;
  res.leaves = model.mesh.leaves();
  res.final_state = std::move(initial);
  res.constraint = model.monitor.initial;
  const int root = model.mesh.root();

  double t = 0.0;
  double dt = steps.initial_dt;
  int restarts = 0;
  bool appeared_in_failure = false;
  const double end = steps.final_time;
  while (t < end * (1.0 - 1e-12)) {
    const double dt_try = std::min(dt, end - t);
    std::vector<NodeState> trial = res.final_state;
    Constraint c = res.constraint;
    NewtonOutcome o = newton_solve_timestep(model, trial, c, dt_try, steps, config);
    res.report.iterations += o.iterations;
    for (auto& line : o.active_set_log)
      res.report.active_set_log.push_back("t=" + std::to_string(t) + " dt=" + std::to_string(dt_try) + " " + line);
    if (!o.converged) {
      ++res.report.failures;
      ++restarts;
      appeared_in_failure = appeared_in_failure || o.phase_appeared;
      res.report.active_set_log.push_back("t=" + std::to_string(t) + " dt=" + std::to_string(dt_try) +
                                          " step failed: " + o.failure);
      dt = 0.5 * dt_try;
      if (dt < steps.min_dt) {
        std::ostringstream msg;
        msg << "time step fell below " << steps.min_dt << " s at t = " << t << " s (last failure: " << o.failure << ")";
        res.failure = msg.str();
        if (keep_partial) return res;
        throw SolverFailure(res.failure);
      }
      continue;
    }

    t += dt_try;
    res.final_state = std::move(trial);
    res.constraint = c;
    ++res.report.steps;
    res.report.regime_history.push_back(c);

    StepRecord r;
    r.t = t;
    r.dt = dt_try;
    r.iterations = o.iterations;
    r.restarts = restarts;
    r.phase_appeared = o.phase_appeared || appeared_in_failure;
    r.rate_molar = o.evaluation.q_head;
    r.rate_mass = head_mass_rate(model, o.evaluation.head);
    r.head_pressure = res.final_state[static_cast<std::size_t>(root)].p;
    for (int leaf : res.leaves) r.leaf_pressures.push_back(res.final_state[static_cast<std::size_t>(leaf)].p);
    r.gas_volume = gas_volume(model, res.final_state);
    r.constraint = c;
    const auto& ev = o.evaluation;
    for (std::size_t k = 0; k < ev.balance_scale.size(); ++k) {
      const double b = ev.balance_accumulation[k] - ev.balance_sources[k] + ev.balance_outflow[k];
      r.balance_relative.push_back(std::abs(b) / std::max(ev.balance_scale[k], 1e-300));
    }
    res.history.push_back(r);
    if (on_step) on_step(r, res.final_state, ev);

    restarts = 0;
    appeared_in_failure = false;
    dt = std::min(dt_try * steps.growth, steps.max_dt);
  }
  res.time = t;
  res.completed = true;
  return res;
}

}  // namespace mswell
