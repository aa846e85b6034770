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

#include "qbound/sdp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <utility>

#include "qbound/error.hpp"

namespace qbound::sdp {

using Index = Eigen::Index;

std::string_view StatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// AffineExpr

AffineExpr::AffineExpr(Index rows, Index cols) : constant_(ComplexMatrix::Zero(rows, cols)) {}

AffineExpr::AffineExpr(const ComplexMatrix& constant) : constant_(constant) {}

void AffineExpr::AddTerm(std::size_t coord, const ComplexMatrix& coeff) {
  if (coeff.rows() != rows() || coeff.cols() != cols()) {
    throw Error(ErrorCode::kShapeError, "affine term shape mismatch");
  }
  auto it = terms_.find(coord);
  if (it == terms_.end()) {
    terms_.emplace(coord, coeff);
  } else {
    it->second += coeff;
  }
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& other) {
  if (other.rows() != rows() || other.cols() != cols()) {
    throw Error(ErrorCode::kShapeError, "affine sum shape mismatch");
  }
  constant_ += other.constant_;
  for (const auto& [k, a] : other.terms_) AddTerm(k, a);
  return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& other) { return *this += -other; }

AffineExpr AffineExpr::operator+(const AffineExpr& other) const {
  AffineExpr out = *this;
  out += other;
  return out;
}

AffineExpr AffineExpr::operator-(const AffineExpr& other) const {
  AffineExpr out = *this;
  out -= other;
  return out;
}

AffineExpr AffineExpr::operator-() const { return Scaled(-1.0); }

AffineExpr AffineExpr::Scaled(Complex s) const {
  return MapLinear([s](const ComplexMatrix& m) { return ComplexMatrix(s * m); });
}

AffineExpr AffineExpr::LeftMultiply(const ComplexMatrix& a) const {
  if (a.cols() != rows()) throw Error(ErrorCode::kShapeError, "left multiply shape mismatch");
  return MapLinear([&a](const ComplexMatrix& m) { return ComplexMatrix(a * m); });
}

AffineExpr AffineExpr::RightMultiply(const ComplexMatrix& a) const {
  if (a.rows() != cols()) throw Error(ErrorCode::kShapeError, "right multiply shape mismatch");
  return MapLinear([&a](const ComplexMatrix& m) { return ComplexMatrix(m * a); });
}

AffineExpr AffineExpr::Adjoint() const {
  return MapLinear([](const ComplexMatrix& m) { return ComplexMatrix(m.adjoint()); });
}

AffineExpr AffineExpr::HermitianPart() const {
  if (rows() != cols()) throw Error(ErrorCode::kShapeError, "Hermitian part of non-square");
  return MapLinear([](const ComplexMatrix& m) { return ComplexMatrix(0.5 * (m + m.adjoint())); });
}

AffineExpr AffineExpr::MapLinear(const std::function<ComplexMatrix(const ComplexMatrix&)>& f) const {
  AffineExpr out(f(constant_));
  for (const auto& [k, a] : terms_) out.terms_.emplace(k, f(a));
  return out;
}

ComplexMatrix AffineExpr::Evaluate(const RealVector& x) const {
  ComplexMatrix out = constant_;
  for (const auto& [k, a] : terms_) {
    if (static_cast<Index>(k) >= x.size()) throw Error(ErrorCode::kShapeError, "x too short");
    out += x(static_cast<Index>(k)) * a;
  }
  return out;
}

AffineExpr AffineExpr::Block(const AffineExpr& a, const AffineExpr& b, const AffineExpr& c,
                             const AffineExpr& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() ||
      b.cols() != d.cols()) {
    throw Error(ErrorCode::kShapeError, "block expression shape mismatch");
  }
  const Index r0 = a.rows();
  const Index c0 = a.cols();
  const Index rows = a.rows() + c.rows();
  const Index cols = a.cols() + b.cols();
  AffineExpr out(rows, cols);
  auto place = [&](const AffineExpr& part, Index r, Index col) {
    out.constant_.block(r, col, part.rows(), part.cols()) = part.constant_;
    for (const auto& [k, m] : part.terms_) {
      auto it = out.terms_.find(k);
      if (it == out.terms_.end()) {
        it = out.terms_.emplace(k, ComplexMatrix::Zero(rows, cols)).first;
      }
      it->second.block(r, col, part.rows(), part.cols()) += m;
    }
  };
  place(a, 0, 0);
  place(b, 0, c0);
  place(c, r0, 0);
  place(d, r0, c0);
  return out;
}

// ---------------------------------------------------------------------------
// Problem

Variable Problem::AddVariable(std::string name, VarKind kind, std::size_t rows, std::size_t cols,
                              std::size_t count) {
  for (const auto& v : variables_) {
    if (v.name == name) throw Error(ErrorCode::kInvalidInput, "duplicate variable " + name);
  }
  Variable v{std::move(name), kind, rows, cols, num_coords_, count};
  num_coords_ += count;
  variables_.push_back(v);
  return v;
}

Variable Problem::AddScalar(std::string name) {
  return AddVariable(std::move(name), VarKind::kRealScalar, 1, 1, 1);
}

Variable Problem::AddHermitian(std::string name, std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::kShapeError, "zero-dimensional variable");
  return AddVariable(std::move(name), VarKind::kHermitian, dim, dim, dim * dim);
}

Variable Problem::AddComplex(std::string name, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw Error(ErrorCode::kShapeError, "zero-dimensional variable");
  return AddVariable(std::move(name), VarKind::kGeneralComplex, rows, cols, 2 * rows * cols);
}

AffineExpr Problem::Expr(const Variable& v) const {
  const auto r = static_cast<Index>(v.rows);
  const auto c = static_cast<Index>(v.cols);
  AffineExpr e(r, c);
  std::size_t k = v.offset;
  switch (v.kind) {
    case VarKind::kRealScalar:
      e.AddTerm(k, ComplexMatrix::Ones(1, 1));
      break;
    case VarKind::kHermitian:
      // Diagonal entries, then (re, im) of each strictly upper entry.
      for (Index i = 0; i < r; ++i) {
        ComplexMatrix m = ComplexMatrix::Zero(r, r);
        m(i, i) = 1.0;
        e.AddTerm(k++, m);
      }
      for (Index i = 0; i < r; ++i) {
        for (Index j = i + 1; j < r; ++j) {
          ComplexMatrix re = ComplexMatrix::Zero(r, r);
          re(i, j) = 1.0;
          re(j, i) = 1.0;
          e.AddTerm(k++, re);
          ComplexMatrix im = ComplexMatrix::Zero(r, r);
          im(i, j) = Complex(0, 1);
          im(j, i) = Complex(0, -1);
          e.AddTerm(k++, im);
        }
      }
      break;
    case VarKind::kGeneralComplex:
      for (Index i = 0; i < r; ++i) {
        for (Index j = 0; j < c; ++j) {
          ComplexMatrix re = ComplexMatrix::Zero(r, c);
          re(i, j) = 1.0;
          e.AddTerm(k++, re);
          ComplexMatrix im = ComplexMatrix::Zero(r, c);
          im(i, j) = Complex(0, 1);
          e.AddTerm(k++, im);
        }
      }
      break;
  }
  return e;
}

void Problem::AddPsd(const AffineExpr& expr, std::string label) {
  if (expr.rows() != expr.cols() || expr.rows() == 0) {
    throw Error(ErrorCode::kShapeError, "PSD constraint '" + label + "' must be square");
  }
  psd_.push_back({expr.HermitianPart(), std::move(label)});
}

void Problem::AddEquality(const AffineExpr& expr, std::string label) {
  if (expr.rows() == 0 || expr.cols() == 0) {
    throw Error(ErrorCode::kShapeError, "empty equality constraint '" + label + "'");
  }
  eq_.push_back({expr, std::move(label)});
}

void Problem::Minimize(const AffineExpr& scalar) {
  if (scalar.rows() != 1 || scalar.cols() != 1) {
    throw Error(ErrorCode::kShapeError, "objective must be 1x1");
  }
  objective_ = scalar;
  maximize_ = false;
}

void Problem::Maximize(const AffineExpr& scalar) {
  Minimize(scalar);
  maximize_ = true;
}

RealVector Problem::ObjectiveVector() const {
  RealVector c = RealVector::Zero(static_cast<Index>(num_coords_));
  for (const auto& [k, a] : objective_.terms()) c(static_cast<Index>(k)) += a(0, 0).real();
  return c;
}

// ---------------------------------------------------------------------------
// Helpers

RealMatrix EmbedHermitianReal(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || !IsHermitian(h)) {
    throw Error(ErrorCode::kNotHermitian, "embedding needs a Hermitian matrix");
  }
  const Index n = h.rows();
  RealMatrix out(2 * n, 2 * n);
  const RealMatrix re = h.real();
  const RealMatrix im = h.imag();
  out.topLeftCorner(n, n) = re;
  out.topRightCorner(n, n) = -im;
  out.bottomLeftCorner(n, n) = im;
  out.bottomRightCorner(n, n) = re;
  return 0.5 * (out + out.transpose());
}

AffineExpr NormEpigraphBlock(const AffineExpr& lambda, const AffineExpr& a, EpigraphMode mode) {
  if (lambda.rows() != 1 || lambda.cols() != 1) {
    throw Error(ErrorCode::kShapeError, "epigraph variable must be a scalar");
  }
  const Index r = a.rows();
  const Index c = a.cols();
  auto scaled_identity = [](const AffineExpr& s, Index n) {
    return s.MapLinear([n](const ComplexMatrix& m) {
      return ComplexMatrix(m(0, 0) * ComplexMatrix::Identity(n, n));
    });
  };
  const AffineExpr top = scaled_identity(lambda, r);
  const AffineExpr bottom = mode == EpigraphMode::kSquared
                                ? AffineExpr(ComplexMatrix::Identity(c, c))
                                : scaled_identity(lambda, c);
  return AffineExpr::Block(top, a, a.Adjoint(), bottom);
}

void AddNormEpigraph(Problem& p, const Variable& lambda, const AffineExpr& a, EpigraphMode mode,
                     const std::string& label) {
  if (lambda.kind != VarKind::kRealScalar) {
    throw Error(ErrorCode::kShapeError, "epigraph variable must be a real scalar");
  }
  p.AddPsd(NormEpigraphBlock(p.Expr(lambda), a, mode), label);
}

void AddHermitianNormBound(Problem& p, const Variable& lambda, const AffineExpr& b,
                           const std::string& label) {
  if (b.rows() != b.cols()) throw Error(ErrorCode::kShapeError, "bound needs a square matrix");
  const Index n = b.rows();
  const AffineExpr lam = p.Expr(lambda).MapLinear([n](const ComplexMatrix& m) {
    return ComplexMatrix(m(0, 0) * ComplexMatrix::Identity(n, n));
  });
  p.AddPsd(lam - b, label + ":upper");
  p.AddPsd(lam + b, label + ":lower");
}

void AddContraction(Problem& p, const AffineExpr& w, const std::string& label) {
  const AffineExpr id_r(ComplexMatrix::Identity(w.rows(), w.rows()));
  const AffineExpr id_c(ComplexMatrix::Identity(w.cols(), w.cols()));
  p.AddPsd(AffineExpr::Block(id_r, w, w.Adjoint(), id_c), label);
}

namespace {

const char* KindName(VarKind k) {
  switch (k) {
    case VarKind::kRealScalar: return "real_scalar";
    case VarKind::kHermitian: return "hermitian";
    case VarKind::kGeneralComplex: return "general_complex";
  }
  return "?";
}

void DumpMatrix(std::ostream& out, const std::string& tag, const ComplexMatrix& m) {
  out << ' ' << tag << '[';
  bool first = true;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == Complex(0, 0)) continue;
      if (!first) out << ' ';
      first = false;
      out << i << ',' << j << ',' << m(i, j).real() << ',' << m(i, j).imag();
    }
  }
  out << ']';
}

void DumpExpr(std::ostream& out, const AffineExpr& e) {
  DumpMatrix(out, "C", e.constant());
  for (const auto& [k, a] : e.terms()) DumpMatrix(out, "x" + std::to_string(k), a);
}

}  // namespace

void WriteDump(const Problem& p, std::ostream& out) {
  out << std::setprecision(17);
  out << "qbound-sdp 1 coords " << p.num_coords() << '\n';
  out << "objective " << (p.maximize() ? "max" : "min") << " const " << p.objective_constant();
  const RealVector c = p.ObjectiveVector();
  for (Index i = 0; i < c.size(); ++i) {
    if (c(i) != 0.0) out << ' ' << i << ':' << c(i);
  }
  out << '\n';
  for (const auto& v : p.variables()) {
    out << "var " << v.name << ' ' << KindName(v.kind) << ' ' << v.rows << ' ' << v.cols
        << " offset " << v.offset << " count " << v.count << '\n';
  }
  for (const auto& b : p.psd_constraints()) {
    out << "psd " << b.label << " dim " << b.expr.rows();
    DumpExpr(out, b.expr);
    out << '\n';
  }
  for (const auto& e : p.equalities()) {
    out << "eq " << e.label << " shape " << e.expr.rows() << 'x' << e.expr.cols();
    DumpExpr(out, e.expr);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Interior-point solver on the LMI form  min c^T z  s.t.  G0 + sum_j z_j G_j >= 0.

namespace {

// Near convergence, the run stops after this many iterations without halving the best merit.
constexpr int kMaxNoProgress = 8;
constexpr double kStallRegion = 1e-6;

struct Entry {
  int r;
  int c;
  double v;
};

struct BlockTerm {
  int block;
  std::vector<Entry> entries;
};

struct Lmi {
  std::vector<int> dims;
  std::vector<RealMatrix> g0;
  std::vector<std::vector<BlockTerm>> g;  // per variable
  RealVector c;

  Index num_vars() const { return static_cast<Index>(g.size()); }
};

std::vector<Entry> UpperEntries(const RealMatrix& m, double drop) {
  std::vector<Entry> out;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      if (std::abs(m(i, j)) > drop) out.push_back({static_cast<int>(i), static_cast<int>(j), m(i, j)});
    }
  }
  return out;
}

void AddEntries(RealMatrix& m, const std::vector<Entry>& entries, double scale) {
  for (const auto& e : entries) {
    m(e.r, e.c) += scale * e.v;
    if (e.r != e.c) m(e.c, e.r) += scale * e.v;
  }
}

// Tr[G X] for symmetric G given by upper entries and arbitrary X.
double TraceWith(const std::vector<Entry>& entries, const RealMatrix& x) {
  double s = 0.0;
  for (const auto& e : entries) {
    s += e.r == e.c ? e.v * x(e.r, e.r) : e.v * (x(e.r, e.c) + x(e.c, e.r));
  }
  return s;
}

double FrobeniusOfEntries(const std::vector<Entry>& entries) {
  double s = 0.0;
  for (const auto& e : entries) s += (e.r == e.c ? 1.0 : 2.0) * e.v * e.v;
  return std::sqrt(s);
}

std::vector<RealMatrix> Assemble(const Lmi& lmi, const RealVector& z) {
  std::vector<RealMatrix> out = lmi.g0;
  for (Index j = 0; j < lmi.num_vars(); ++j) {
    if (z(j) == 0.0) continue;
    for (const auto& t : lmi.g[static_cast<std::size_t>(j)]) AddEntries(out[t.block], t.entries, z(j));
  }
  return out;
}

// Largest alpha with X + alpha D >= 0 (infinity if unbounded).
double MaxStep(const RealMatrix& x, const RealMatrix& d) {
  Eigen::LLT<RealMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const RealMatrix l = llt.matrixL();
  RealMatrix m = llt.matrixL().solve(d);
  m = llt.matrixL().solve(m.transpose()).transpose();
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct IpmResult {
  bool converged = false;
  bool unbounded = false;
  RealVector z;
  double pobj = 0.0;
  double dobj = 0.0;
  double pinf = 0.0;
  double dinf = 0.0;
  double relgap = 0.0;
  int iterations = 0;
};

class Ipm {
 public:
  Ipm(const Lmi& lmi, double tol, int max_iter) : lmi_(lmi), tol_(tol), max_iter_(max_iter) {
    const std::size_t nb = lmi_.dims.size();
    block_vars_.resize(nb);
    for (Index j = 0; j < lmi_.num_vars(); ++j) {
      for (std::size_t t = 0; t < lmi_.g[static_cast<std::size_t>(j)].size(); ++t) {
        block_vars_[lmi_.g[static_cast<std::size_t>(j)][t].block].push_back({j, t});
      }
    }
    total_dim_ = 0;
    for (int d : lmi_.dims) total_dim_ += d;
    g0_norm_ = 0.0;
    for (const auto& m : lmi_.g0) g0_norm_ += m.squaredNorm();
    g0_norm_ = std::sqrt(g0_norm_);
    c_norm_ = lmi_.c.norm();
  }

  IpmResult Run() {
    const Index m = lmi_.num_vars();
    const std::size_t nb = lmi_.dims.size();
    RealVector z = RealVector::Zero(m);
    std::vector<RealMatrix> s(nb), zz(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      const int n = lmi_.dims[b];
      double max_g = 0.0;
      double max_ratio = 0.0;
      for (const auto& [j, t] : block_vars_[b]) {
        const double fn = FrobeniusOfEntries(lmi_.g[static_cast<std::size_t>(j)][t].entries);
        max_g = std::max(max_g, fn);
        max_ratio = std::max(max_ratio, (1.0 + std::abs(lmi_.c(j))) / (1.0 + fn));
      }
      const double rn = std::sqrt(static_cast<double>(n));
      const double xi_s = std::max({10.0, rn, max_g, lmi_.g0[b].norm()});
      const double xi_z = std::max({10.0, rn, rn * max_ratio});
      s[b] = xi_s * RealMatrix::Identity(n, n);
      zz[b] = xi_z * RealMatrix::Identity(n, n);
    }

    IpmResult best;
    double best_merit = std::numeric_limits<double>::infinity();
    int stall = 0;
    int since_best = 0;
    for (int iter = 0; iter <= max_iter_; ++iter) {
      const std::vector<RealMatrix> f = Assemble(lmi_, z);
      std::vector<RealMatrix> rp(nb);
      double rp_norm2 = 0.0;
      double gap = 0.0;
      double dobj = 0.0;
      for (std::size_t b = 0; b < nb; ++b) {
        rp[b] = f[b] - s[b];
        rp_norm2 += rp[b].squaredNorm();
        gap += (zz[b].cwiseProduct(s[b])).sum();
        dobj -= (lmi_.g0[b].cwiseProduct(zz[b])).sum();
      }
      RealVector rd(m);
      for (Index j = 0; j < m; ++j) {
        double t = 0.0;
        for (const auto& bt : lmi_.g[static_cast<std::size_t>(j)]) t += TraceWith(bt.entries, zz[bt.block]);
        rd(j) = lmi_.c(j) - t;
      }
      const double pobj = lmi_.c.dot(z);
      IpmResult cur;
      cur.z = z;
      cur.pobj = pobj;
      cur.dobj = dobj;
      cur.pinf = std::sqrt(rp_norm2) / (1.0 + g0_norm_);
      cur.dinf = rd.norm() / (1.0 + c_norm_);
      cur.relgap = std::max(std::abs(gap), std::abs(pobj - dobj)) /
                   (1.0 + std::abs(pobj) + std::abs(dobj));
      cur.iterations = iter;
      const double merit = std::max({cur.pinf, cur.dinf, cur.relgap});
      if (merit < 0.5 * best_merit || best_merit > kStallRegion) {
        since_best = 0;
      } else if (++since_best >= kMaxNoProgress) {
        break;
      }
      if (merit < best_merit) {
        best_merit = merit;
        best = cur;
      }
      if (cur.pinf <= tol_ && cur.dinf <= tol_ && cur.relgap <= tol_) {
        cur.converged = true;
        return cur;
      }
      if (cur.pinf <= 1e-6 && pobj < -1e9 * (1.0 + c_norm_)) {
        cur.unbounded = true;
        return cur;
      }
      if (!std::isfinite(merit)) break;
      if (iter == max_iter_) break;

      const double mu = gap / total_dim_;
      std::vector<RealMatrix> sinv(nb);
      bool ok = true;
      for (std::size_t b = 0; b < nb; ++b) {
        Eigen::LLT<RealMatrix> llt(s[b]);
        if (llt.info() != Eigen::Success) {
          ok = false;
          break;
        }
        sinv[b] = llt.solve(RealMatrix::Identity(lmi_.dims[b], lmi_.dims[b]));
        sinv[b] = 0.5 * (sinv[b] + sinv[b].transpose());
      }
      if (!ok) break;

      RealMatrix h = SchurMatrix(zz, sinv);
      Eigen::LLT<RealMatrix> hfac(h);
      if (hfac.info() != Eigen::Success) {
        const double reg = 1e-14 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
        h.diagonal().array() += reg;
        hfac.compute(h);
        if (hfac.info() != Eigen::Success) break;
      }

      // Predictor (sigma = 0), then Mehrotra corrector.
      std::vector<RealMatrix> ds, dz;
      RealVector dx;
      Direction(hfac, zz, s, sinv, rp, rd, 0.0, nullptr, nullptr, dx, ds, dz);
      double ap = 1.0, ad = 1.0;
      for (std::size_t b = 0; b < nb; ++b) {
        ap = std::min(ap, MaxStep(s[b], ds[b]));
        ad = std::min(ad, MaxStep(zz[b], dz[b]));
      }
      double gap_aff = 0.0;
      for (std::size_t b = 0; b < nb; ++b) {
        gap_aff += ((zz[b] + ad * dz[b]).cwiseProduct(s[b] + ap * ds[b])).sum();
      }
      double sigma = std::pow(std::max(gap_aff, 0.0) / std::max(gap, 1e-300), 3);
      sigma = std::clamp(sigma, 0.0, 1.0);
      const std::vector<RealMatrix> ds_a = ds, dz_a = dz;
      Direction(hfac, zz, s, sinv, rp, rd, sigma * mu, &ds_a, &dz_a, dx, ds, dz);

      ap = 1.0;
      ad = 1.0;
      for (std::size_t b = 0; b < nb; ++b) {
        ap = std::min(ap, 0.98 * MaxStep(s[b], ds[b]));
        ad = std::min(ad, 0.98 * MaxStep(zz[b], dz[b]));
      }
      if (ap < 1e-12 && ad < 1e-12) {
        if (++stall >= 3) break;
      } else {
        stall = 0;
      }
      z += ap * dx;
      for (std::size_t b = 0; b < nb; ++b) {
        s[b] += ap * ds[b];
        s[b] = 0.5 * (s[b] + s[b].transpose());
        zz[b] += ad * dz[b];
        zz[b] = 0.5 * (zz[b] + zz[b].transpose());
      }
    }
    return best;
  }

 private:
  RealMatrix SchurMatrix(const std::vector<RealMatrix>& zz, const std::vector<RealMatrix>& sinv) const {
    const Index m = lmi_.num_vars();
    RealMatrix h = RealMatrix::Zero(m, m);
    for (std::size_t b = 0; b < lmi_.dims.size(); ++b) {
      const int n = lmi_.dims[b];
      const RealMatrix& z = zz[b];
      const RealMatrix& si = sinv[b];
      const auto& vars = block_vars_[b];
      for (std::size_t jj = 0; jj < vars.size(); ++jj) {
        const auto [j, tj] = vars[jj];
        const auto& ej = lmi_.g[static_cast<std::size_t>(j)][tj].entries;
        RealMatrix p;
        if (static_cast<int>(ej.size()) * 2 < n) {
          p = RealMatrix::Zero(n, n);
          for (const auto& e : ej) {
            p.noalias() += e.v * z.col(e.r) * si.row(e.c);
            if (e.r != e.c) p.noalias() += e.v * z.col(e.c) * si.row(e.r);
          }
        } else {
          RealMatrix gj = RealMatrix::Zero(n, n);
          AddEntries(gj, ej, 1.0);
          p.noalias() = z * gj * si;
        }
        for (std::size_t ii = 0; ii <= jj; ++ii) {
          const auto [i, ti] = vars[ii];
          const double v = TraceWith(lmi_.g[static_cast<std::size_t>(i)][ti].entries, p);
          h(i, j) += v;
          if (i != j) h(j, i) += v;
        }
      }
    }
    return 0.5 * (h + h.transpose());
  }

  void Direction(const Eigen::LLT<RealMatrix>& hfac, const std::vector<RealMatrix>& zz,
                 const std::vector<RealMatrix>& s, const std::vector<RealMatrix>& sinv,
                 const std::vector<RealMatrix>& rp, const RealVector& rd, double target,
                 const std::vector<RealMatrix>* ds_a, const std::vector<RealMatrix>* dz_a,
                 RealVector& dx, std::vector<RealMatrix>& ds, std::vector<RealMatrix>& dz) const {
    const std::size_t nb = lmi_.dims.size();
    const Index m = lmi_.num_vars();
    // Rc = target I - Z S [- dZa dSa];  M = (Rc - Z Rp) S^{-1}.
    std::vector<RealMatrix> mm(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      RealMatrix rc = -zz[b] * s[b];
      rc.diagonal().array() += target;
      if (ds_a != nullptr) rc -= (*dz_a)[b] * (*ds_a)[b];
      mm[b] = (rc - zz[b] * rp[b]) * sinv[b];
    }
    RealVector rhs(m);
    for (Index j = 0; j < m; ++j) {
      double t = 0.0;
      for (const auto& bt : lmi_.g[static_cast<std::size_t>(j)]) t += TraceWith(bt.entries, mm[bt.block]);
      rhs(j) = t - rd(j);
    }
    dx = hfac.solve(rhs);
    ds.assign(nb, RealMatrix());
    dz.assign(nb, RealMatrix());
    for (std::size_t b = 0; b < nb; ++b) ds[b] = rp[b];
    for (Index j = 0; j < m; ++j) {
      if (dx(j) == 0.0) continue;
      for (const auto& bt : lmi_.g[static_cast<std::size_t>(j)]) AddEntries(ds[bt.block], bt.entries, dx(j));
    }
    for (std::size_t b = 0; b < nb; ++b) {
      RealMatrix rc = -zz[b] * s[b];
      rc.diagonal().array() += target;
      if (ds_a != nullptr) rc -= (*dz_a)[b] * (*ds_a)[b];
      const RealMatrix d = (rc - zz[b] * ds[b]) * sinv[b];
      dz[b] = 0.5 * (d + d.transpose());
    }
  }

  const Lmi& lmi_;
  double tol_;
  int max_iter_;
  std::vector<std::vector<std::pair<Index, std::size_t>>> block_vars_;
  double total_dim_ = 1.0;
  double g0_norm_ = 0.0;
  double c_norm_ = 0.0;
};

struct RealBlock {
  int dim = 0;
  RealMatrix f0;
  std::map<std::size_t, RealMatrix> f;  // original coordinate -> coefficient
};

RealBlock ToRealBlock(const AffineExpr& e) {
  double imag = e.constant().imag().cwiseAbs().maxCoeff();
  for (const auto& [k, a] : e.terms()) imag = std::max(imag, a.imag().cwiseAbs().maxCoeff());
  RealBlock rb;
  if (imag == 0.0) {
    rb.dim = static_cast<int>(e.rows());
    rb.f0 = e.constant().real();
    for (const auto& [k, a] : e.terms()) rb.f.emplace(k, a.real());
  } else {
    rb.dim = static_cast<int>(2 * e.rows());
    rb.f0 = EmbedHermitianReal(e.constant());
    for (const auto& [k, a] : e.terms()) rb.f.emplace(k, EmbedHermitianReal(a));
  }
  return rb;
}

std::atomic<unsigned long long> g_dump_counter{0};

void MaybeDump(const Problem& p, const SolverOptions& options) {
  if (options.dump_dir.empty()) return;
  std::filesystem::create_directories(options.dump_dir);
  const auto id = g_dump_counter.fetch_add(1);
  const std::filesystem::path path = std::filesystem::path(options.dump_dir) /
                                     (options.dump_tag + "_" + std::to_string(id) + ".txt");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write SDP dump to " + path.string());
  WriteDump(p, out);
}

}  // namespace

const ComplexMatrix& Solution::Value(const Variable& v) const {
  auto it = values.find(v.name);
  if (it == values.end()) throw Error(ErrorCode::kInvalidInput, "no value for variable " + v.name);
  return it->second;
}

double Solution::ScalarValue(const Variable& v) const { return Value(v)(0, 0).real(); }

Solution Solve(const Problem& problem, const SolverOptions& options) {
  MaybeDump(problem, options);
  const Index m = static_cast<Index>(problem.num_coords());
  std::size_t total_dim = 0;
  for (const auto& b : problem.psd_constraints()) total_dim += static_cast<std::size_t>(b.expr.rows());
  if (total_dim > options.max_total_psd_dim) {
    throw Error(ErrorCode::kTooLarge, "total PSD dimension " + std::to_string(total_dim) +
                                          " exceeds cap " + std::to_string(options.max_total_psd_dim));
  }
  RealVector c = problem.ObjectiveVector();
  const double sense = problem.maximize() ? -1.0 : 1.0;
  c *= sense;

  Solution sol;
  auto finish_values = [&](const RealVector& x) {
    sol.x = x;
    for (const auto& v : problem.variables()) sol.values[v.name] = problem.Expr(v).Evaluate(x);
  };

  // Equalities become real rows A x = b.
  std::vector<std::pair<RealVector, double>> rows;
  double b_scale = 0.0;
  for (const auto& eq : problem.equalities()) {
    const AffineExpr& e = eq.expr;
    for (Index i = 0; i < e.rows(); ++i) {
      for (Index j = 0; j < e.cols(); ++j) {
        for (int part = 0; part < 2; ++part) {
          RealVector a = RealVector::Zero(m);
          bool any = false;
          for (const auto& [k, coef] : e.terms()) {
            const double v = part == 0 ? coef(i, j).real() : coef(i, j).imag();
            if (v != 0.0) {
              a(static_cast<Index>(k)) = v;
              any = true;
            }
          }
          const double rhs = -(part == 0 ? e.constant()(i, j).real() : e.constant()(i, j).imag());
          b_scale = std::max(b_scale, std::abs(rhs));
          if (!any) {
            if (std::abs(rhs) > 1e-12) {
              sol.status = SolveStatus::kInfeasible;
              sol.message = "equality '" + eq.label + "' has no free coordinates";
              return sol;
            }
            continue;
          }
          rows.emplace_back(std::move(a), rhs);
        }
      }
    }
  }

  // Parameterize x = x0 + N z.
  RealVector x0 = RealVector::Zero(m);
  RealMatrix null_basis;
  bool identity_basis = rows.empty();
  if (!rows.empty()) {
    const Index p = static_cast<Index>(rows.size());
    RealMatrix a(p, m);
    RealVector b(p);
    for (Index r = 0; r < p; ++r) {
      a.row(r) = rows[static_cast<std::size_t>(r)].first.transpose();
      b(r) = rows[static_cast<std::size_t>(r)].second;
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(a);
    qr.setThreshold(1e-10);
    const Index rank = qr.rank();
    const auto perm = qr.colsPermutation().indices();
    std::vector<Index> basic, free;
    for (Index k = 0; k < m; ++k) (k < rank ? basic : free).push_back(perm(k));
    RealMatrix ab(p, rank), af(p, static_cast<Index>(free.size()));
    for (Index k = 0; k < rank; ++k) ab.col(k) = a.col(basic[static_cast<std::size_t>(k)]);
    for (Index k = 0; k < static_cast<Index>(free.size()); ++k) af.col(k) = a.col(free[static_cast<std::size_t>(k)]);
    Eigen::ColPivHouseholderQR<RealMatrix> qb(ab);
    const RealVector xb = qb.solve(b);
    for (Index k = 0; k < rank; ++k) x0(basic[static_cast<std::size_t>(k)]) = xb(k);
    const double resid = (a * x0 - b).norm();
    if (resid > 1e-9 * (1.0 + b.norm())) {
      sol.status = SolveStatus::kInfeasible;
      sol.message = "equality constraints are inconsistent (residual " + std::to_string(resid) + ")";
      finish_values(x0);
      sol.primal_residual = resid;
      return sol;
    }
    RealMatrix t = free.empty() ? RealMatrix(rank, 0) : RealMatrix(qb.solve(af));
    null_basis = RealMatrix::Zero(m, static_cast<Index>(free.size()));
    for (Index k = 0; k < static_cast<Index>(free.size()); ++k) {
      null_basis(free[static_cast<std::size_t>(k)], k) = 1.0;
      for (Index r = 0; r < rank; ++r) {
        const double v = -t(r, k);
        if (std::abs(v) > 1e-14) null_basis(basic[static_cast<std::size_t>(r)], k) = v;
      }
    }
  }

  // Real blocks over the original coordinates.
  std::vector<RealBlock> blocks;
  for (const auto& b : problem.psd_constraints()) blocks.push_back(ToRealBlock(b.expr));

  Lmi lmi;
  const Index nz = identity_basis ? m : null_basis.cols();
  lmi.g.resize(static_cast<std::size_t>(nz));
  lmi.c = identity_basis ? c : RealVector(null_basis.transpose() * c);
  const double obj_offset = c.dot(x0);
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const RealBlock& rb = blocks[bi];
    lmi.dims.push_back(rb.dim);
    RealMatrix g0 = rb.f0;
    for (const auto& [k, fk] : rb.f) {
      if (x0(static_cast<Index>(k)) != 0.0) g0 += x0(static_cast<Index>(k)) * fk;
    }
    lmi.g0.push_back(g0);
    double scale = 0.0;
    for (const auto& [k, fk] : rb.f) scale = std::max(scale, fk.cwiseAbs().maxCoeff());
    const double drop = 1e-15 * std::max(1.0, scale);
    if (identity_basis) {
      for (const auto& [k, fk] : rb.f) {
        auto entries = UpperEntries(fk, drop);
        if (!entries.empty()) lmi.g[k].push_back({static_cast<int>(bi), std::move(entries)});
      }
    } else {
      for (Index j = 0; j < nz; ++j) {
        RealMatrix acc;
        for (const auto& [k, fk] : rb.f) {
          const double w = null_basis(static_cast<Index>(k), j);
          if (w == 0.0) continue;
          if (acc.size() == 0) acc = RealMatrix::Zero(rb.dim, rb.dim);
          acc += w * fk;
        }
        if (acc.size() == 0) continue;
        auto entries = UpperEntries(acc, drop);
        if (!entries.empty()) lmi.g[static_cast<std::size_t>(j)].push_back({static_cast<int>(bi), std::move(entries)});
      }
    }
  }

  // Variables that appear in no block: unbounded if they carry cost, else fixed at zero.
  std::vector<Index> active;
  for (Index j = 0; j < nz; ++j) {
    if (!lmi.g[static_cast<std::size_t>(j)].empty()) {
      active.push_back(j);
    } else if (std::abs(lmi.c(j)) > 1e-12 * (1.0 + c.norm())) {
      sol.status = SolveStatus::kUnbounded;
      sol.message = "a coordinate with nonzero cost is unconstrained";
      return sol;
    }
  }
  Lmi reduced;
  reduced.dims = lmi.dims;
  reduced.g0 = lmi.g0;
  reduced.c.resize(static_cast<Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) {
    reduced.g.push_back(std::move(lmi.g[static_cast<std::size_t>(active[k])]));
    reduced.c(static_cast<Index>(k)) = lmi.c(active[k]);
  }

  auto to_x = [&](const RealVector& zr) {
    RealVector zfull = RealVector::Zero(nz);
    for (std::size_t k = 0; k < active.size(); ++k) zfull(active[k]) = zr(static_cast<Index>(k));
    return identity_basis ? RealVector(zfull) : RealVector(x0 + null_basis * zfull);
  };

  if (reduced.dims.empty()) {
    sol.status = SolveStatus::kOptimal;
    finish_values(x0);
    sol.objective_value = sense * obj_offset + problem.objective_constant();
    sol.dual_objective = sol.objective_value;
    return sol;
  }

  // All coordinates fixed: only feasibility of G0 remains.
  if (active.empty()) {
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto& g0 : reduced.g0) {
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(g0, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, es.eigenvalues()(0));
    }
    finish_values(x0);
    sol.primal_residual = std::max(0.0, -min_eig);
    sol.status = min_eig >= -1e-9 ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    sol.objective_value = sense * obj_offset + problem.objective_constant();
    sol.dual_objective = sol.objective_value;
    return sol;
  }

  Ipm ipm(reduced, options.tol, options.max_iterations);
  IpmResult r = ipm.Run();
  sol.iterations = r.iterations;
  const RealVector x = to_x(r.z);
  finish_values(x);
  sol.objective_value = sense * (r.pobj + obj_offset) + problem.objective_constant();
  sol.dual_objective = sense * (r.dobj + obj_offset) + problem.objective_constant();
  sol.primal_residual = r.pinf;
  sol.dual_residual = r.dinf;
  sol.gap = r.relgap;
  if (r.unbounded) {
    sol.status = SolveStatus::kUnbounded;
    sol.message = "primal objective diverges";
    return sol;
  }
  const double accept = std::max(options.tol, 1e-7);
  if (r.converged || (r.pinf <= accept && r.dinf <= accept && r.relgap <= accept)) {
    sol.status = SolveStatus::kOptimal;
    return sol;
  }
  // Stalled with feasible iterates: keep the point when the gap is still small.
  if (r.pinf <= accept && r.dinf <= accept && r.relgap <= kStalledGapAccept) {
    sol.status = SolveStatus::kOptimal;
    char buf[96];
    std::snprintf(buf, sizeof buf, "stalled at relative gap %.2e", r.relgap);
    sol.message = buf;
    return sol;
  }

  // Phase 1: min t s.t. G(z) + t I >= 0, t >= -1.
  Lmi ph;
  ph.dims = reduced.dims;
  ph.dims.push_back(1);
  ph.g0 = reduced.g0;
  ph.g0.push_back(RealMatrix::Ones(1, 1));
  ph.g = reduced.g;
  std::vector<BlockTerm> tterm;
  for (std::size_t b = 0; b < reduced.dims.size(); ++b) {
    std::vector<Entry> diag;
    for (int i = 0; i < reduced.dims[b]; ++i) diag.push_back({i, i, 1.0});
    tterm.push_back({static_cast<int>(b), std::move(diag)});
  }
  tterm.push_back({static_cast<int>(reduced.dims.size()), {{0, 0, 1.0}}});
  ph.g.push_back(std::move(tterm));
  ph.c = RealVector::Zero(reduced.num_vars() + 1);
  ph.c(reduced.num_vars()) = 1.0;
  Ipm phase1(ph, 1e-9, options.max_iterations);
  const IpmResult p1 = phase1.Run();
  const double tstar = p1.z(reduced.num_vars());
  if ((p1.converged || p1.pinf < 1e-7) && tstar > 1e-6) {
    sol.status = SolveStatus::kInfeasible;
    sol.message = "phase-1 margin " + std::to_string(tstar);
  } else {
    sol.status = SolveStatus::kNumericalFailure;
    char buf[160];
    std::snprintf(buf, sizeof buf, "no convergence after %d iterations (pinf %.2e, dinf %.2e, gap %.2e)",
                  r.iterations, r.pinf, r.dinf, r.relgap);
    sol.message = buf;
  }
  return sol;
}

}  // namespace qbound::sdp
