// Copyright 2026 The qbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbound/channel_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "qbound/error.hpp"
#include "qbound/line_search.hpp"

namespace qbound {

namespace {

using sdp::AffineExpr;
using sdp::EpigraphMode;
using sdp::Problem;
using sdp::Solution;
using sdp::SolveStatus;
using sdp::Variable;

constexpr double kInf = std::numeric_limits<double>::infinity();

AffineExpr ScalarTimesIdentity(const AffineExpr& s, Eigen::Index n) {
  return s.MapLinear([n](const ComplexMatrix& m) {
    return ComplexMatrix(m(0, 0) * ComplexMatrix::Identity(n, n));
  });
}

void RequireSolved(const Solution& sol, const std::string& what) {
  if (sol.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kSolverFailure, what + ": solver status " +
                                               std::string(sdp::StatusName(sol.status)) + " (" +
                                               sol.message + ")");
  }
}

// Shared model: optimization variable X (W or H), epigraph scalars lambda and mu.
struct Model {
  Problem problem;
  Variable x;
  Variable lambda;
  Variable mu;
  bool has_mu = false;
};

// min alpha*lambda + beta*mu with lambda >= 2||I - Re M_W||, mu >= ||I - M_W||^2.
// sql: drop mu and impose M_W = I.
Model BuresModel(const ChannelPair& pair, double alpha, double beta, bool sql) {
  Model m;
  const auto de = pair.d_env();
  const auto da = static_cast<Eigen::Index>(pair.d_in());
  m.x = m.problem.AddComplex("W", de, de);
  m.lambda = m.problem.AddScalar("lambda");
  const ComplexMatrix& v1 = pair.v1().v;
  const ComplexMatrix& v2 = pair.v2().v;
  const ComplexMatrix id_b = Identity(pair.d_out());
  const AffineExpr w = m.problem.Expr(m.x);
  sdp::AddContraction(m.problem, w, "contraction");
  const AffineExpr mw = w.MapLinear(
      [&](const ComplexMatrix& x) { return ComplexMatrix(v1.adjoint() * Kron(x, id_b) * v2); });
  const AffineExpr id(ComplexMatrix::Identity(da, da));
  sdp::AddHermitianNormBound(m.problem, m.lambda, (id - mw.HermitianPart()).Scaled(2.0), "a_term");
  AffineExpr objective = m.problem.Expr(m.lambda).Scaled(alpha);
  if (sql) {
    m.problem.AddEquality(mw - id, "M_W=I");
  } else if (beta > 0.0) {
    m.mu = m.problem.AddScalar("mu");
    m.has_mu = true;
    sdp::AddNormEpigraph(m.problem, m.mu, id - mw, EpigraphMode::kSquared, "b_term");
    objective += m.problem.Expr(m.mu).Scaled(beta);
  }
  m.problem.Minimize(objective);
  return m;
}

// min alpha*lambda + beta*mu with lambda >= ||M_H||^2, mu >= ||V^dag M_H||^2.
// sql: drop mu and impose V^dag M_H = 0.
Model FisherModel(const FamilyIsometry& fi, double alpha, double beta, bool sql) {
  Model m;
  const auto de = fi.iso.d_env;
  m.x = m.problem.AddHermitian("H", de);
  m.lambda = m.problem.AddScalar("lambda");
  const ComplexMatrix& v = fi.iso.v;
  const ComplexMatrix id_b = Identity(fi.iso.d_out);
  const AffineExpr h = m.problem.Expr(m.x);
  const AffineExpr mh =
      AffineExpr(fi.dv) + h.MapLinear([&](const ComplexMatrix& x) {
        return ComplexMatrix(Complex(0, -1) * Kron(x, id_b) * v);
      });
  sdp::AddNormEpigraph(m.problem, m.lambda, mh, EpigraphMode::kSquared, "a_term");
  const AffineExpr vm = mh.LeftMultiply(v.adjoint());
  AffineExpr objective = m.problem.Expr(m.lambda).Scaled(alpha);
  if (sql) {
    m.problem.AddEquality(vm, "V^dag M_H=0");
  } else if (beta > 0.0) {
    m.mu = m.problem.AddScalar("mu");
    m.has_mu = true;
    sdp::AddNormEpigraph(m.problem, m.mu, vm, EpigraphMode::kSquared, "b_term");
    objective += m.problem.Expr(m.mu).Scaled(beta);
  }
  m.problem.Minimize(objective);
  return m;
}

struct TermSolve {
  ComplexMatrix x;
  double lambda = 0.0;
  double mu = 0.0;
  double objective = 0.0;
  SolveStatus status = SolveStatus::kOptimal;
};

TermSolve RunModel(const Model& m, const sdp::SolverOptions& opts, const std::string& what,
                   bool allow_infeasible) {
  const Solution sol = sdp::Solve(m.problem, opts);
  TermSolve out;
  out.status = sol.status;
  if (allow_infeasible && sol.status == SolveStatus::kInfeasible) return out;
  RequireSolved(sol, what);
  out.x = sol.Value(m.x);
  out.lambda = sol.ScalarValue(m.lambda);
  out.mu = m.has_mu ? sol.ScalarValue(m.mu) : 0.0;
  out.objective = sol.objective_value;
  return out;
}

struct Terms {
  double a = 0.0;
  double b = 0.0;
};

double AdaptiveExpression(const Terms& t, std::size_t n) {
  return static_cast<double>(n) * (t.a + static_cast<double>(n - 1) * std::sqrt(t.a * t.b));
}

double ParallelExpression(const Terms& t, std::size_t n) {
  return static_cast<double>(n) * (t.a + static_cast<double>(n - 1) * t.b);
}

// Generic nu-split adaptive search shared by the Bures and Fisher bounds.
// `solve(alpha, beta)` solves the weighted model; `eval` maps its witness to (a, b).
// `scale` converts quarter-Fisher units (4 for Fisher, 1 for Bures).
BoundReport AdaptiveSearch(std::size_t n, const BoundOptions& opts,
                           const std::function<TermSolve(double, double)>& solve,
                           const std::function<Terms(const ComplexMatrix&)>& eval,
                           const std::optional<BoundReport>& sql, const std::string& witness_key,
                           double scale, const std::string& tag) {
  const double nm1 = static_cast<double>(n - 1);
  BoundReport best;
  best.theorem_tag = tag;
  best.value = kInf;
  best.solver_objective = kInf;
  int solves = 0;
  auto consider = [&](const ComplexMatrix& x, const Terms& t, double obj, double nu) {
    const double v = scale * AdaptiveExpression(t, n);
    if (v < best.value) {
      best.value = v;
      best.witness = {{witness_key, x}};
      best.scalars = {{"a", t.a}, {"b", t.b}, {"nu", nu}};
      best.solver_objective = obj;
    }
  };
  auto f = [&](double nu) {
    const double alpha = 1.0 + 0.5 * nm1 * nu;
    const double beta = 0.5 * nm1 / nu;
    const TermSolve ts = solve(alpha, beta);
    ++solves;
    const double obj = scale * static_cast<double>(n) * ts.objective;
    consider(ts.x, eval(ts.x), obj, nu);
    return obj;
  };
  const LineSearchResult ls = LineSearch1d(f, opts.nu_grid_points, opts.nu_min, 1.0);
  best.scalars["nu_search"] = ls.nu;
  if (sql && sql->solver_status == SolveStatus::kOptimal) {
    const auto& x = sql->witness.at(witness_key);
    consider(x, eval(x), scale * static_cast<double>(n) * sql->solver_objective, 0.0);
  }
  best.sdp_solves = solves;
  best.solver_status = SolveStatus::kOptimal;
  return best;
}

}  // namespace

ChannelPair::ChannelPair(IsometricExtension v1, IsometricExtension v2)
    : v1_(std::move(v1)), v2_(std::move(v2)) {
  if (v1_.d_in != v2_.d_in || v1_.d_out != v2_.d_out || v1_.d_env != v2_.d_env ||
      v1_.v.rows() != v2_.v.rows() || v1_.v.cols() != v2_.v.cols()) {
    throw Error(ErrorCode::kShapeError, "channel pair dimensions are not aligned");
  }
  if (v1_.d_env != v1_.d_in * v1_.d_out) {
    throw Error(ErrorCode::kKrausCountMismatch, "environment dimension must be d_in*d_out");
  }
  for (const auto* iso : {&v1_, &v2_}) {
    const ComplexMatrix g = iso->v.adjoint() * iso->v;
    if ((g - Identity(iso->d_in)).cwiseAbs().maxCoeff() > 1e-8) {
      throw Error(ErrorCode::kNotCPTP, "extension is not an isometry");
    }
  }
}

ChannelPair ChannelPair::FromChannels(const KrausChannel& a, const KrausChannel& b) {
  if (a.d_in() != b.d_in() || a.d_out() != b.d_out()) {
    throw Error(ErrorCode::kShapeError, "channels in a pair must share input/output dimensions");
  }
  return ChannelPair(MakeIsometricExtension(CanonicalKraus(ChoiOfChannel(a))),
                     MakeIsometricExtension(CanonicalKraus(ChoiOfChannel(b))));
}

double BoundReport::WitnessNorm() const {
  for (const char* key : {"W", "H"}) {
    auto it = witness.find(key);
    if (it != witness.end()) return SpectralNorm(it->second);
  }
  return 0.0;
}

double BoundReport::Scalar(const std::string& key) const {
  auto it = scalars.find(key);
  if (it == scalars.end()) throw Error(ErrorCode::kInvalidInput, "report has no scalar " + key);
  return it->second;
}

ComplexMatrix OverlapOperator(const ChannelPair& pair, const ComplexMatrix& w) {
  const auto de = static_cast<Eigen::Index>(pair.d_env());
  if (w.rows() != de || w.cols() != de) throw Error(ErrorCode::kShapeError, "W must be d_env x d_env");
  return pair.v1().v.adjoint() * Kron(w, Identity(pair.d_out())) * pair.v2().v;
}

ComplexMatrix ProjectToContraction(const ComplexMatrix& w) {
  const double norm = SpectralNorm(w);
  return norm > 1.0 ? ComplexMatrix(w / norm) : w;
}

ContractionTerms EvaluateContraction(const ChannelPair& pair, const ComplexMatrix& w) {
  const ComplexMatrix m = OverlapOperator(pair, w);
  const ComplexMatrix id = Identity(pair.d_in());
  const ComplexMatrix re = HermitianPart(m);
  ContractionTerms t;
  t.a = 2.0 * SpectralNorm(id - re);
  const double nb = SpectralNorm(id - m);
  t.b = nb * nb;
  t.min_re_eig = MinEigenvalue(re);
  return t;
}

ComplexMatrix FisherResidualOperator(const FamilyIsometry& fi, const ComplexMatrix& h) {
  const auto de = static_cast<Eigen::Index>(fi.iso.d_env);
  if (h.rows() != de || h.cols() != de) throw Error(ErrorCode::kShapeError, "H must be d_env x d_env");
  return fi.dv - Complex(0, 1) * Kron(HermitianPart(h), Identity(fi.iso.d_out)) * fi.iso.v;
}

FisherTerms EvaluateFisher(const FamilyIsometry& fi, const ComplexMatrix& h) {
  const ComplexMatrix m = FisherResidualOperator(fi, h);
  const double na = SpectralNorm(m);
  const double nb = SpectralNorm(fi.iso.v.adjoint() * m);
  return {na * na, nb * nb};
}

BoundReport RootFidelityChannels(const ChannelPair& pair, const BoundOptions& opts) {
  Problem p;
  const Variable w = p.AddComplex("W", pair.d_env(), pair.d_env());
  const Variable lam = p.AddScalar("lambda");
  const ComplexMatrix& v1 = pair.v1().v;
  const ComplexMatrix& v2 = pair.v2().v;
  const ComplexMatrix id_b = Identity(pair.d_out());
  sdp::AddContraction(p, p.Expr(w), "contraction");
  const AffineExpr mw = p.Expr(w).MapLinear(
      [&](const ComplexMatrix& x) { return ComplexMatrix(v1.adjoint() * Kron(x, id_b) * v2); });
  p.AddPsd(mw.HermitianPart() - ScalarTimesIdentity(p.Expr(lam), static_cast<Eigen::Index>(pair.d_in())),
           "Re M_W >= lambda I");
  p.AddPsd(p.Expr(lam), "lambda >= 0");
  p.Maximize(p.Expr(lam));
  const Solution sol = sdp::Solve(p, opts.solver);
  RequireSolved(sol, "root fidelity");
  const ComplexMatrix wit = ProjectToContraction(sol.Value(w));
  const ContractionTerms t = EvaluateContraction(pair, wit);
  BoundReport r;
  r.value = std::clamp(t.min_re_eig, 0.0, 1.0);
  r.witness = {{"W", wit}};
  r.scalars = {{"lambda", sol.ScalarValue(lam)}};
  r.theorem_tag = "root_fidelity_sdp";
  r.solver_status = sol.status;
  r.solver_objective = sol.objective_value;
  r.sdp_solves = 1;
  return r;
}

BoundReport BuresSqChannels(const ChannelPair& pair, const BoundOptions& opts) {
  BoundReport r = ParallelBuresBound(pair, 1, opts);
  r.theorem_tag = "bures_sq_sdp";
  return r;
}

BoundReport ParallelBuresBound(const ChannelPair& pair, std::size_t n, const BoundOptions& opts) {
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "n must be at least 1");
  const Model m = BuresModel(pair, 1.0, static_cast<double>(n - 1), false);
  const TermSolve ts = RunModel(m, opts.solver, "parallel Bures bound", false);
  const ComplexMatrix wit = ProjectToContraction(ts.x);
  const ContractionTerms t = EvaluateContraction(pair, wit);
  BoundReport r;
  r.value = ParallelExpression({t.a, t.b}, n);
  r.witness = {{"W", wit}};
  r.scalars = {{"lambda", ts.lambda}, {"mu", ts.mu}, {"a", t.a}, {"b", t.b}};
  r.theorem_tag = "parallel_bures_bound";
  r.solver_objective = static_cast<double>(n) * ts.objective;
  r.sdp_solves = 1;
  return r;
}

BoundReport BuresSqlDenominator(const ChannelPair& pair, const BoundOptions& opts) {
  const Model m = BuresModel(pair, 1.0, 0.0, true);
  const TermSolve ts = RunModel(m, opts.solver, "Bures SQL denominator", true);
  BoundReport r;
  r.theorem_tag = "bures_sql_denominator";
  r.sdp_solves = 1;
  r.solver_status = ts.status;
  if (ts.status == SolveStatus::kInfeasible) {
    r.value = kInf;
    r.solver_objective = kInf;
    return r;
  }
  const ComplexMatrix wit = ProjectToContraction(ts.x);
  const ContractionTerms t = EvaluateContraction(pair, wit);
  r.value = t.a;
  r.witness = {{"W", wit}};
  r.scalars = {{"lambda", ts.lambda}, {"a", t.a}, {"b", t.b}};
  r.solver_objective = ts.objective;
  return r;
}

BoundReport AdaptiveBuresBound(const ChannelPair& pair, std::size_t n, const BoundOptions& opts,
                               const std::optional<BoundReport>& sql) {
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "n must be at least 1");
  if (n == 1) {
    BoundReport r = BuresSqChannels(pair, opts);
    r.theorem_tag = "adaptive_bures_bound";
    r.scalars["nu"] = 1.0;
    return r;
  }
  const std::optional<BoundReport> sql_report = sql ? sql : std::optional(BuresSqlDenominator(pair, opts));
  auto solve = [&](double alpha, double beta) {
    const Model m = BuresModel(pair, alpha, beta, false);
    TermSolve ts = RunModel(m, opts.solver, "adaptive Bures bound", false);
    ts.x = ProjectToContraction(ts.x);
    return ts;
  };
  auto eval = [&](const ComplexMatrix& w) {
    const ContractionTerms t = EvaluateContraction(pair, w);
    return Terms{t.a, t.b};
  };
  BoundReport r = AdaptiveSearch(n, opts, solve, eval, sql_report, "W", 1.0, "adaptive_bures_bound");
  if (!sql) r.sdp_solves += sql_report->sdp_solves;
  return r;
}

BoundReport SldFisherChannel(const ChannelFamily& fam, double theta, const BoundOptions& opts) {
  BoundReport r = ParallelFisherBound(fam, theta, 1, opts);
  r.theorem_tag = "sld_fisher_channel_sdp";
  return r;
}

BoundReport ParallelFisherBound(const ChannelFamily& fam, double theta, std::size_t n,
                                const BoundOptions& opts) {
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "n must be at least 1");
  const FamilyIsometry fi = FamilyIsometryAndDerivative(fam, theta);
  const Model m = FisherModel(fi, 1.0, static_cast<double>(n - 1), false);
  const TermSolve ts = RunModel(m, opts.solver, "parallel Fisher bound", false);
  const ComplexMatrix h = HermitianPart(ts.x);
  const FisherTerms t = EvaluateFisher(fi, h);
  BoundReport r;
  r.value = 4.0 * ParallelExpression({t.a, t.b}, n);
  r.witness = {{"H", h}};
  r.scalars = {{"lambda", ts.lambda}, {"mu", ts.mu}, {"a", t.a}, {"b", t.b}};
  r.theorem_tag = "parallel_fisher_bound";
  r.solver_objective = 4.0 * static_cast<double>(n) * ts.objective;
  r.sdp_solves = 1;
  return r;
}

BoundReport WeightedFisherTerms(const ChannelFamily& fam, double theta, double alpha, double beta,
                                const BoundOptions& opts) {
  if (!(alpha >= 0.0 && beta > 0.0)) throw Error(ErrorCode::kInvalidInput, "weights must satisfy alpha >= 0, beta > 0");
  const FamilyIsometry fi = FamilyIsometryAndDerivative(fam, theta);
  const Model m = FisherModel(fi, alpha, beta, false);
  const TermSolve ts = RunModel(m, opts.solver, "weighted Fisher terms", false);
  const ComplexMatrix h = HermitianPart(ts.x);
  const FisherTerms t = EvaluateFisher(fi, h);
  BoundReport r;
  r.value = alpha * t.a + beta * t.b;
  r.witness = {{"H", h}};
  r.scalars = {{"lambda", ts.lambda}, {"mu", ts.mu}, {"a", t.a}, {"b", t.b}};
  r.theorem_tag = "weighted_fisher_terms";
  r.solver_objective = ts.objective;
  r.sdp_solves = 1;
  return r;
}

BoundReport FisherSqlDenominator(const ChannelFamily& fam, double theta, const BoundOptions& opts) {
  const FamilyIsometry fi = FamilyIsometryAndDerivative(fam, theta);
  const Model m = FisherModel(fi, 1.0, 0.0, true);
  const TermSolve ts = RunModel(m, opts.solver, "Fisher SQL denominator", true);
  BoundReport r;
  r.theorem_tag = "fisher_sql_denominator";
  r.sdp_solves = 1;
  r.solver_status = ts.status;
  if (ts.status == SolveStatus::kInfeasible) {
    r.value = kInf;
    r.solver_objective = kInf;
    return r;
  }
  const ComplexMatrix h = HermitianPart(ts.x);
  const FisherTerms t = EvaluateFisher(fi, h);
  r.value = t.a;
  r.witness = {{"H", h}};
  r.scalars = {{"lambda", ts.lambda}, {"a", t.a}, {"b", t.b}};
  r.solver_objective = ts.objective;
  return r;
}

BoundReport AdaptiveFisherBound(const ChannelFamily& fam, double theta, std::size_t n,
                                const BoundOptions& opts, const std::optional<BoundReport>& sql) {
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "n must be at least 1");
  if (n == 1) {
    BoundReport r = SldFisherChannel(fam, theta, opts);
    r.theorem_tag = "adaptive_fisher_bound";
    r.scalars["nu"] = 1.0;
    return r;
  }
  const FamilyIsometry fi = FamilyIsometryAndDerivative(fam, theta);
  const std::optional<BoundReport> sql_report =
      sql ? sql : std::optional(FisherSqlDenominator(fam, theta, opts));
  auto solve = [&](double alpha, double beta) {
    const Model m = FisherModel(fi, alpha, beta, false);
    TermSolve ts = RunModel(m, opts.solver, "adaptive Fisher bound", false);
    ts.x = HermitianPart(ts.x);
    return ts;
  };
  auto eval = [&](const ComplexMatrix& h) {
    const FisherTerms t = EvaluateFisher(fi, h);
    return Terms{t.a, t.b};
  };
  BoundReport r = AdaptiveSearch(n, opts, solve, eval, sql_report, "H", 4.0, "adaptive_fisher_bound");
  if (!sql) r.sdp_solves += sql_report->sdp_solves;
  return r;
}

}  // namespace qbound
