#pragma once

#include "bidfair/game.hpp"
#include "bidfair/instance.hpp"
#include "bidfair/lp.hpp"
#include "bidfair/shares.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bidfair {

// ---------------------------------------------------------------------------------------
// Inequality system behind the 10/27 bound
// ---------------------------------------------------------------------------------------

/// Variables x1..x4, y, q >= 0 and four constraints, with z substituted.
///
/// 1. x1 + x2 + x3 + x4 + y <= 1 - 1/n
/// 2. -2x1 - 3/2 x2 - 4/3 x3 - 5/4 x4 - 6/5 y + q < 1 - z      (strict)
/// 3. 2x1 <= 1
/// 4. -c(2x1 + 3x2 + 4x3 + 5x4) - 6/5 y - q <= -3c             with c = z - 5/2
///
/// Constraint 2 is strict: a violating run leaves p with value strictly below 1.
struct TheoremSystem {
  static constexpr std::size_t variables = 6;
  static constexpr std::array<const char*, variables> names{"x1", "x2", "x3", "x4", "y", "q"};

  struct Constraint {
    std::array<Rational, variables> coeffs;
    Rational rhs;
    bool strict = false;
  };

  Rational z;
  std::optional<std::uint64_t> n;  ///< nullopt: n = infinity, 1/n = 0
  std::array<Constraint, 4> constraints;

  Rational inverse_n() const { return n ? Rational(1, *n) : Rational(0); }
};

inline TheoremSystem build_theorem_system(const Rational& z, std::optional<std::uint64_t> n) {
  if (z <= Rational(5, 2)) throw std::invalid_argument("theorem system needs z > 5/2");
  if (n && *n == 0) throw std::invalid_argument("theorem system needs n >= 1");
  TheoremSystem s;
  s.z = z;
  s.n = n;
  const Rational c = z - Rational(5, 2);
  s.constraints[0] = {{1, 1, 1, 1, 1, 0}, 1 - s.inverse_n(), false};
  s.constraints[1] = {{-2, Rational(-3, 2), Rational(-4, 3), Rational(-5, 4), Rational(-6, 5), 1}, 1 - z, true};
  s.constraints[2] = {{2, 0, 0, 0, 0, 0}, 1, false};
  s.constraints[3] = {{-2 * c, -3 * c, -4 * c, -5 * c, Rational(-6, 5), -1}, -3 * c, false};
  return s;
}

/// Nonnegative multipliers y with y^T A >= 0 componentwise and either y^T b < 0, or
/// y^T b = 0 with positive weight on a strict row.
struct Certificate {
  std::array<Rational, 4> multipliers;
  std::array<Rational, TheoremSystem::variables> combined;
  Rational combined_rhs;
  bool strict = false;  ///< combined inequality is strict
};

struct FeasibilityResult {
  bool feasible = false;
  std::array<Rational, TheoremSystem::variables> witness;  ///< when feasible
  std::optional<Certificate> certificate;                   ///< when infeasible
};

inline Certificate combine(const TheoremSystem& s, const std::array<Rational, 4>& y) {
  Certificate c;
  c.multipliers = y;
  c.combined_rhs = 0;
  for (auto& x : c.combined) x = 0;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < TheoremSystem::variables; ++j) c.combined[j] += y[r] * s.constraints[r].coeffs[j];
    c.combined_rhs += y[r] * s.constraints[r].rhs;
    if (y[r] > 0 && s.constraints[r].strict) c.strict = true;
  }
  return c;
}

/// Checks a certificate independently of how it was found.
inline bool certifies_infeasibility(const TheoremSystem& s, const Certificate& cert) {
  for (const auto& y : cert.multipliers)
    if (y < 0) return false;
  const Certificate c = combine(s, cert.multipliers);
  for (const auto& a : c.combined)
    if (a < 0) return false;
  return c.combined_rhs < 0 || (c.combined_rhs == 0 && c.strict);
}

namespace detail {

inline std::optional<Certificate> find_certificate(const TheoremSystem& s, bool strict_normalized) {
  lp::Program prog;
  prog.variables = 4;
  for (std::size_t j = 0; j < TheoremSystem::variables; ++j) {
    std::vector<Rational> row(4);
    for (std::size_t r = 0; r < 4; ++r) row[r] = s.constraints[r].coeffs[j];
    prog.add(std::move(row), lp::Sense::greater_equal, 0);
  }
  std::vector<Rational> norm(4);
  for (std::size_t r = 0; r < 4; ++r) norm[r] = !strict_normalized || s.constraints[r].strict ? 1 : 0;
  prog.add(norm, lp::Sense::equal, 1);
  prog.objective.resize(4);
  for (std::size_t r = 0; r < 4; ++r) prog.objective[r] = -s.constraints[r].rhs;
  const auto res = lp::solve(prog);
  if (res.status != lp::Status::optimal) return std::nullopt;
  Certificate c = combine(s, {res.x[0], res.x[1], res.x[2], res.x[3]});
  if (!certifies_infeasibility(s, c)) return std::nullopt;
  return c;
}

}  // namespace detail

/// Exact feasibility of the system. Strict rows are handled by maximizing a slack t that
/// every strict row must leave; the system is feasible iff the optimum is positive.
inline FeasibilityResult check_feasible(const TheoremSystem& s) {
  lp::Program prog;
  prog.variables = TheoremSystem::variables + 1;
  for (const auto& c : s.constraints) {
    std::vector<Rational> row(c.coeffs.begin(), c.coeffs.end());
    row.emplace_back(c.strict ? 1 : 0);
    prog.add(std::move(row), lp::Sense::less_equal, c.rhs);
  }
  std::vector<Rational> cap(prog.variables);
  cap.back() = 1;
  prog.add(cap, lp::Sense::less_equal, 1);
  prog.objective = cap;
  const auto res = lp::solve(prog);

  FeasibilityResult out;
  bool any_strict = false;
  for (const auto& c : s.constraints) any_strict = any_strict || c.strict;
  out.feasible = res.status == lp::Status::optimal && (!any_strict || res.objective > 0);
  if (out.feasible) {
    for (std::size_t j = 0; j < TheoremSystem::variables; ++j) out.witness[j] = res.x[j];
    return out;
  }
  out.certificate = detail::find_certificate(s, true);
  if (!out.certificate) out.certificate = detail::find_certificate(s, false);
  if (!out.certificate) throw std::logic_error("check_feasible: infeasible system without a certificate");
  return out;
}

// ---------------------------------------------------------------------------------------
// Transcript diagnostics for the proportional strategy
// ---------------------------------------------------------------------------------------

struct LowerBoundDiagnostics {
  std::size_t start = 0;  ///< rounds completed when the tracked segment begins
  std::size_t f = 0;      ///< rounds completed when all others are inactive or no items remain
  ItemSet C;              ///< p's bundle after round f
  ItemSet O;              ///< items others took in rounds start+1..f
  ItemSet rest;           ///< items unallocated after round f
  Rational L0;
  Rational Lf;
  Rational vC;
  Rational sum_O;         ///< sum over e in O of v(e | C)
};

/// L0, Lf and friends for agent p from round `start` on, using valuation v (the truncated
/// valuation p bids with) and an APS witness `lambda` for entitlement b at level z.
inline LowerBoundDiagnostics lower_bound_diagnostics(const Instance& inst, const Transcript& t, AgentIndex p,
                                                     const Valuation& v, const FractionalPartition& lambda,
                                                     const Rational& b, const Rational& z,
                                                     std::size_t start = 0) {
  if (!verify_fractional_partition(lambda, v, b, z))
    throw std::invalid_argument("lower_bound_diagnostics: lambda is not a valid witness");
  LowerBoundDiagnostics d;
  d.start = start;
  GameState state = state_after(inst, t, start);
  const ItemSet c_start = state.bundles[p];
  auto others_done = [&](const GameState& st) {
    if (st.remaining.empty()) return true;
    for (AgentIndex i = 0; i < st.active.size(); ++i)
      if (i != p && st.active[i]) return false;
    return true;
  };
  d.f = start;
  while (!others_done(state) && d.f < t.rounds.size()) {
    ++d.f;
    state = state_after(inst, t, d.f);
  }
  d.C = state.bundles[p];
  d.O = ItemSet(inst.ground_size());
  for (std::size_t r = start; r < d.f; ++r)
    if (t.rounds[r].winner != p)
      for (ItemId e : t.rounds[r].items) d.O.insert(e);
  d.rest = state.remaining;
  (void)c_start;

  d.vC = v.value(d.C);
  d.L0 = 0;
  d.Lf = 0;
  for (const auto& entry : lambda.entries) {
    d.L0 += entry.weight * v.value(entry.bundle);
    d.Lf += entry.weight * (v.value((entry.bundle - d.O) | d.C) - d.vC);
  }
  d.sum_O = 0;
  d.O.for_each([&](ItemId e) { d.sum_O += v.value(d.C.with(e)) - d.vC; });
  return d;
}

/// One failed structural check: which claim, and where.
struct ClaimFailure {
  std::string claim;
  std::string detail;
};

struct ProportionalRunCheck {
  std::optional<std::size_t> phase_start;  ///< rounds completed when no large item remained
  Rational gamma = 1;
  std::optional<LowerBoundDiagnostics> diagnostics;
  std::vector<ClaimFailure> failures;
  std::vector<std::size_t> budget_limited_rounds;  ///< phase-one rounds where the budget capped the bid
};

/// Recomputes, from the transcript alone, every structural statement about an agent p that
/// played proportional(rho) with share value `share` (its exact APS):
///  - phase-one bids weakly decrease;
///  - each phase-one bid equals the uncapped formula unless p already holds rho * share;
///  - v(C + rest) >= v(C) + Lf;  final value >= min(Lf + v(C), 2 rho share);
///  - L0 <= Lf + v(C) + b * sum_O;  v(C) >= rho share or sum_O <= 2 rho (1 - b) share / b;
///  - after a large-item phase, p's APS in the residual instance is still `share`.
/// All quantities live in the residual frame when a large-item phase occurred.
inline ProportionalRunCheck check_proportional_run(const Instance& inst, const Transcript& t, AgentIndex p,
                                                   const Rational& rho, const Rational& share,
                                                   const SizeGuard& guard = {}) {
  ProportionalRunCheck out;
  if (share <= 0) return out;
  const ValuationPtr vt = truncate_valuation(inst.agent(p).valuation, share);
  const Rational b = inst.agent(p).entitlement.value();
  auto fail = [&](std::string claim, std::string detail) {
    out.failures.push_back({std::move(claim), std::move(detail)});
  };

  // Locate the end of the large-item phase.
  const Rational threshold = 2 * rho * share;
  std::size_t s = 0;
  for (;; ++s) {
    const GameState st = state_after(inst, t, s);
    if (!st.active[p] || st.remaining.empty()) return out;  // p done before phase one
    bool large = false;
    st.remaining.for_each([&](ItemId e) { large = large || vt->value(ItemSet(inst.ground_size(), {e})) > threshold; });
    if (!large) break;
    if (s == t.rounds.size()) return out;
    if (t.rounds[s].winner == p) return out;  // won a large item: value > 2 rho share already
  }
  out.phase_start = s;
  const GameState at_s = state_after(inst, t, s);
  out.gamma = at_s.active_budget();

  // Phase-one bids.
  std::optional<Rational> previous;
  for (std::size_t r = s; r < t.rounds.size(); ++r) {
    const GameState st = state_after(inst, t, r);
    if (!st.active[p]) break;
    const Rational& bid = *t.rounds[r].bids[p];
    Rational best = 0;
    const Rational base = vt->value(st.bundles[p]);
    st.remaining.for_each([&](ItemId e) { best = max(best, vt->value(st.bundles[p].with(e)) - base); });
    const Rational formula = b * best / (2 * rho * share);
    const std::string where = "round " + std::to_string(r + 1);
    if (previous && bid > *previous) fail("bids_weakly_decrease", where);
    previous = bid;
    if (bid != formula) {
      if (bid == st.budgets[p] && formula > bid) out.budget_limited_rounds.push_back(r + 1);
      if (base < rho * share) fail("bid_formula_dichotomy", where);
    }
  }

  // Residual frame.
  ResidualInstance res = s == 0 ? ResidualInstance{inst, 1, {}} : residual_instance(inst, at_s, {{p, share}});
  AgentIndex rp = p;
  if (s != 0)
    for (AgentIndex i = 0; i < res.origin.size(); ++i)
      if (res.origin[i] == p) rp = i;
  const Rational b_hat = res.instance.agent(rp).entitlement.value();
  const ApsResult aps = aps_exact(*vt, b_hat, res.instance.items(), guard);
  if (s != 0 && aps.value != share)
    fail("residual_aps_preserved", "residual APS " + format_rational(aps.value) + " != " + format_rational(share));
  if (aps.value < share) return out;  // the witness cannot certify level `share`

  const auto d = lower_bound_diagnostics(inst, t, p, *vt, aps.witness, b_hat, share, s);
  out.diagnostics = d;
  const Rational final_value = vt->value(t.allocation.bundles[p]);
  if (vt->value(d.C | d.rest) < d.vC + d.Lf) fail("remaining_value_bound", "v(C + rest) < v(C) + Lf");
  if (final_value < min(d.Lf + d.vC, 2 * rho * share)) fail("final_value_bound", "final < min(Lf + v(C), 2 rho share)");
  if (d.L0 > d.Lf + d.vC + b_hat * d.sum_O) fail("l0_decomposition", "L0 > Lf + v(C) + b sum_O");
  if (d.vC < rho * share && d.sum_O > 2 * rho * (1 - b_hat) * share / b_hat)
    fail("others_payment_bound", "sum_O exceeds 2 rho (1 - b) share / b");
  return out;
}

// ---------------------------------------------------------------------------------------
// Guarantee report
// ---------------------------------------------------------------------------------------

struct GuaranteeEntry {
  std::string agent;
  Rational share;
  Rational value;
  std::optional<Rational> ratio;  ///< value / share, absent for a zero share
  Rational target;
  bool pass = false;
};

struct GuaranteeReport {
  std::vector<GuaranteeEntry> entries;
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

/// pass iff value >= target * share. Agents missing from `shares` are not reported.
inline GuaranteeReport guarantee_report(const Instance& inst, const Allocation& a,
                                        const std::vector<std::optional<Rational>>& shares,
                                        const std::vector<Rational>& targets) {
  if (shares.size() != inst.agent_count() || targets.size() != inst.agent_count() ||
      a.bundles.size() != inst.agent_count())
    throw std::invalid_argument("guarantee_report: one share, target and bundle per agent required");
  GuaranteeReport rep;
  for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
    if (!shares[i]) continue;
    GuaranteeEntry e;
    e.agent = inst.agent(i).id;
    e.share = *shares[i];
    e.value = inst.agent(i).valuation->value(a.bundles[i]);
    if (e.share > 0) e.ratio = e.value / e.share;
    e.target = targets[i];
    e.pass = e.value >= e.target * e.share;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace bidfair
