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

#ifndef QBOUND_SDP_HPP_
#define QBOUND_SDP_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qbound/matrix.hpp"

namespace qbound::sdp {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };
std::string_view StatusName(SolveStatus status);

enum class VarKind { kRealScalar, kHermitian, kGeneralComplex };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kRealScalar;
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::size_t offset = 0;  // first real coordinate
  std::size_t count = 1;   // number of real coordinates
};

// Complex matrix that is affine in the real coordinates x:
//   E(x) = C + sum_k x_k A_k.
class AffineExpr {
 public:
  AffineExpr() = default;
  AffineExpr(Eigen::Index rows, Eigen::Index cols);
  explicit AffineExpr(const ComplexMatrix& constant);

  Eigen::Index rows() const { return constant_.rows(); }
  Eigen::Index cols() const { return constant_.cols(); }
  const ComplexMatrix& constant() const { return constant_; }
  const std::map<std::size_t, ComplexMatrix>& terms() const { return terms_; }

  void AddTerm(std::size_t coord, const ComplexMatrix& coeff);

  AffineExpr& operator+=(const AffineExpr& other);
  AffineExpr& operator-=(const AffineExpr& other);
  AffineExpr operator+(const AffineExpr& other) const;
  AffineExpr operator-(const AffineExpr& other) const;
  AffineExpr operator-() const;
  AffineExpr Scaled(Complex s) const;
  AffineExpr LeftMultiply(const ComplexMatrix& a) const;   // a * E
  AffineExpr RightMultiply(const ComplexMatrix& a) const;  // E * a
  AffineExpr Adjoint() const;
  // (E + E^dag) / 2.
  AffineExpr HermitianPart() const;
  // Applies a linear map f to the constant and to every coefficient.
  AffineExpr MapLinear(const std::function<ComplexMatrix(const ComplexMatrix&)>& f) const;
  ComplexMatrix Evaluate(const RealVector& x) const;

  static AffineExpr Block(const AffineExpr& a, const AffineExpr& b, const AffineExpr& c,
                          const AffineExpr& d);

 private:
  ComplexMatrix constant_;
  std::map<std::size_t, ComplexMatrix> terms_;
};

struct LabeledExpr {
  AffineExpr expr;
  std::string label;
};

class Problem {
 public:
  Variable AddScalar(std::string name);
  Variable AddHermitian(std::string name, std::size_t dim);
  Variable AddComplex(std::string name, std::size_t rows, std::size_t cols);

  // Matrix-valued expression of a variable (1x1 for scalars).
  AffineExpr Expr(const Variable& v) const;

  // Constraint expr >= 0; the expression is replaced by its Hermitian part.
  void AddPsd(const AffineExpr& expr, std::string label);
  void AddEquality(const AffineExpr& expr, std::string label);

  // Objective is the real part of a 1x1 expression.
  void Minimize(const AffineExpr& scalar);
  void Maximize(const AffineExpr& scalar);

  std::size_t num_coords() const { return num_coords_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<LabeledExpr>& psd_constraints() const { return psd_; }
  const std::vector<LabeledExpr>& equalities() const { return eq_; }
  bool maximize() const { return maximize_; }
  // Dense objective coefficients over real coordinates, plus constant.
  RealVector ObjectiveVector() const;
  double objective_constant() const { return objective_.constant().size() ? objective_.constant()(0, 0).real() : 0.0; }

 private:
  Variable AddVariable(std::string name, VarKind kind, std::size_t rows, std::size_t cols,
                       std::size_t count);

  std::size_t num_coords_ = 0;
  std::vector<Variable> variables_;
  std::vector<LabeledExpr> psd_;
  std::vector<LabeledExpr> eq_;
  AffineExpr objective_ = AffineExpr(1, 1);
  bool maximize_ = false;
};

// Relative gap accepted when the iteration stalls with feasible iterates.
inline constexpr double kStalledGapAccept = 1e-6;

struct SolverOptions {
  double tol = 1e-10;
  int max_iterations = 100;
  std::size_t max_total_psd_dim = 512;  // complex dimension cap
  std::string dump_dir;                 // when non-empty, every problem is dumped here
  std::string dump_tag = "sdp";
};

struct Solution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double objective_value = 0.0;
  double dual_objective = 0.0;
  std::map<std::string, ComplexMatrix> values;
  RealVector x;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::string message;

  const ComplexMatrix& Value(const Variable& v) const;
  double ScalarValue(const Variable& v) const;
};

Solution Solve(const Problem& problem, const SolverOptions& options = {});

// [[Re h, -Im h], [Im h, Re h]].
RealMatrix EmbedHermitianReal(const ComplexMatrix& h);

enum class EpigraphMode { kSquared, kNorm };

// [[lambda I, A], [A^dag, I]] (squared) or [[lambda I, A], [A^dag, lambda I]] (norm).
AffineExpr NormEpigraphBlock(const AffineExpr& lambda, const AffineExpr& a, EpigraphMode mode);
void AddNormEpigraph(Problem& p, const Variable& lambda, const AffineExpr& a, EpigraphMode mode,
                     const std::string& label);
// -lambda I <= B <= lambda I for Hermitian B.
void AddHermitianNormBound(Problem& p, const Variable& lambda, const AffineExpr& b,
                           const std::string& label);
// [[I, W], [W^dag, I]] >= 0.
void AddContraction(Problem& p, const AffineExpr& w, const std::string& label);

// Text dump, one line per objective / variable / constraint block.
void WriteDump(const Problem& p, std::ostream& out);

}  // namespace qbound::sdp

#endif  // QBOUND_SDP_HPP_
