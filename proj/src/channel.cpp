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

#include "qbound/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qbound/error.hpp"

namespace qbound {

namespace {

using Index = Eigen::Index;

Index Ix(std::size_t n) { return static_cast<Index>(n); }

ComplexMatrix Diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

ComplexMatrix Lowering() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

void RequireParamCount(std::string_view name, std::span<const double> params, std::size_t n) {
  if (params.size() != n) {
    throw Error(ErrorCode::kInvalidParam, std::string(name) + " expects " + std::to_string(n) +
                                              " parameter(s), got " +
                                              std::to_string(params.size()));
  }
  for (double p : params) {
    if (!std::isfinite(p)) {
      throw Error(ErrorCode::kInvalidParam, std::string(name) + " parameter is not finite");
    }
  }
}

void RequireRange(std::string_view name, double value, double lo, double hi) {
  if (!(value >= lo && value <= hi)) {
    throw Error(ErrorCode::kInvalidParam, std::string(name) + " parameter " +
                                              std::to_string(value) + " outside [" +
                                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

std::vector<ComplexMatrix> DepolarizingKraus(double p) {
  const double a = std::sqrt(1.0 - 0.75 * p);
  const double b = std::sqrt(0.25 * p);
  return {a * pauli::I(), b * pauli::X(), b * pauli::Y(), b * pauli::Z()};
}

std::vector<ComplexMatrix> DephasingKraus(double q) {
  return {std::sqrt(1.0 - q) * pauli::I(), std::sqrt(q) * pauli::Z()};
}

std::vector<ComplexMatrix> AmplitudeDampingKraus(double g) {
  return {Diag2(1.0, std::sqrt(1.0 - g)), std::sqrt(g) * Lowering()};
}

}  // namespace

ComplexMatrix RzMatrix(double theta) {
  return Diag2(std::polar(1.0, -theta / 2), std::polar(1.0, theta / 2));
}

KrausChannel::KrausChannel(std::size_t d_in, std::size_t d_out, std::vector<ComplexMatrix> kraus)
    : d_in_(d_in), d_out_(d_out), kraus_(std::move(kraus)) {
  if (d_in_ == 0 || d_out_ == 0) throw Error(ErrorCode::kShapeError, "zero channel dimension");
  if (kraus_.empty()) throw Error(ErrorCode::kInvalidInput, "empty Kraus list");
  ComplexMatrix sum = ComplexMatrix::Zero(Ix(d_in_), Ix(d_in_));
  for (const auto& k : kraus_) {
    if (k.rows() != Ix(d_out_) || k.cols() != Ix(d_in_)) {
      throw Error(ErrorCode::kShapeError, "Kraus operator has shape " + std::to_string(k.rows()) +
                                              "x" + std::to_string(k.cols()) + ", expected " +
                                              std::to_string(d_out_) + "x" +
                                              std::to_string(d_in_));
    }
    RequireFinite(k, "Kraus operator");
    sum += k.adjoint() * k;
  }
  const double dev = (sum - ComplexMatrix::Identity(Ix(d_in_), Ix(d_in_))).cwiseAbs().maxCoeff();
  if (dev > kCptpTol) {
    throw Error(ErrorCode::kNotCPTP, "sum K^dag K deviates from identity by " + std::to_string(dev));
  }
}

ComplexMatrix KrausChannel::Apply(const ComplexMatrix& rho) const {
  if (rho.rows() != Ix(d_in_) || rho.cols() != Ix(d_in_)) {
    throw Error(ErrorCode::kShapeError, "input state dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(Ix(d_out_), Ix(d_out_));
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

ComplexMatrix KrausChannel::ApplyWithReference(const ComplexMatrix& rho, std::size_t d_ref) const {
  if (rho.rows() != Ix(d_ref * d_in_) || rho.cols() != rho.rows()) {
    throw Error(ErrorCode::kShapeError, "input state dimension mismatch");
  }
  const ComplexMatrix id_ref = Identity(d_ref);
  ComplexMatrix out = ComplexMatrix::Zero(Ix(d_ref * d_out_), Ix(d_ref * d_out_));
  for (const auto& k : kraus_) {
    const ComplexMatrix big = Kron(id_ref, k);
    out += big * rho * big.adjoint();
  }
  return out;
}

KrausChannel KrausChannel::Padded(std::size_t count) const {
  if (count < kraus_.size()) {
    throw Error(ErrorCode::kKrausCountMismatch, "cannot pad " + std::to_string(kraus_.size()) +
                                                    " Kraus operators down to " +
                                                    std::to_string(count));
  }
  std::vector<ComplexMatrix> k = kraus_;
  k.resize(count, ComplexMatrix::Zero(Ix(d_out_), Ix(d_in_)));
  return KrausChannel(d_in_, d_out_, std::move(k));
}

KrausChannel KrausChannel::Tensor(const KrausChannel& other) const {
  std::vector<ComplexMatrix> k;
  k.reserve(kraus_.size() * other.kraus_.size());
  for (const auto& a : kraus_) {
    for (const auto& b : other.kraus_) k.push_back(Kron(a, b));
  }
  return KrausChannel(d_in_ * other.d_in_, d_out_ * other.d_out_, std::move(k));
}

KrausChannel KrausChannel::Then(const KrausChannel& post) const {
  if (post.d_in_ != d_out_) throw Error(ErrorCode::kShapeError, "composition dimension mismatch");
  std::vector<ComplexMatrix> k;
  for (const auto& a : post.kraus_) {
    for (const auto& b : kraus_) k.push_back(a * b);
  }
  return KrausChannel(d_in_, post.d_out_, std::move(k));
}

void ChoiOperator::Validate() const {
  const Index n = Ix(d_in * d_out);
  if (matrix.rows() != n || matrix.cols() != n) {
    throw Error(ErrorCode::kShapeError, "Choi operator dimension mismatch");
  }
  RequireFinite(matrix, "Choi operator");
  if (!IsHermitian(matrix, 1e-8)) throw Error(ErrorCode::kNotHermitian, "Choi not Hermitian");
  if (MinEigenvalue(matrix) < -1e-8) throw Error(ErrorCode::kNotPSD, "Choi operator not PSD");
  const ComplexMatrix tr_out = PartialTraceSecond(matrix, d_in, d_out);
  if ((tr_out - Identity(d_in)).cwiseAbs().maxCoeff() > kCptpTol) {
    throw Error(ErrorCode::kNotCPTP, "partial trace of Choi operator is not the identity");
  }
}

ChoiOperator ChoiOfChannel(const KrausChannel& ch) {
  const Index n = Ix(ch.d_in() * ch.d_out());
  ChoiOperator choi{ComplexMatrix::Zero(n, n), ch.d_in(), ch.d_out()};
  for (const auto& k : ch.kraus()) {
    // Column-major vectorization: index i*d_out + b holds K(b, i).
    const ComplexVector v = k.reshaped();
    choi.matrix += v * v.adjoint();
  }
  return choi;
}

KrausChannel CanonicalKraus(const ChoiOperator& choi) {
  const Index d_in = Ix(choi.d_in);
  const Index d_out = Ix(choi.d_out);
  if (choi.matrix.rows() != d_in * d_out) {
    throw Error(ErrorCode::kShapeError, "Choi operator dimension mismatch");
  }
  const HermitianEig eig = EigHermitian(choi.matrix);
  const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  if (eig.eigenvalues(0) < -1e-8 * scale) {
    throw Error(ErrorCode::kNotPSD, "Choi operator has eigenvalue " +
                                        std::to_string(eig.eigenvalues(0)));
  }
  std::vector<ComplexMatrix> kraus;
  const Index n = d_in * d_out;
  kraus.reserve(static_cast<std::size_t>(n));
  for (Index j = n - 1; j >= 0; --j) {
    const double lambda = eig.eigenvalues(j);
    if (lambda < 1e-12) {
      kraus.push_back(ComplexMatrix::Zero(d_out, d_in));
      continue;
    }
    const ComplexVector col = std::sqrt(lambda) * eig.eigenvectors.col(j);
    kraus.push_back(col.reshaped(d_out, d_in));
  }
  return KrausChannel(choi.d_in, choi.d_out, std::move(kraus));
}

IsometricExtension MakeIsometricExtension(const KrausChannel& ch) {
  const std::size_t d_env = ch.d_in() * ch.d_out();
  if (ch.size() != d_env) {
    throw Error(ErrorCode::kKrausCountMismatch,
                "isometric extension needs exactly d_in*d_out = " + std::to_string(d_env) +
                    " Kraus operators, got " + std::to_string(ch.size()));
  }
  const Index d_out = Ix(ch.d_out());
  ComplexMatrix v(Ix(d_env) * d_out, Ix(ch.d_in()));
  for (std::size_t e = 0; e < d_env; ++e) v.middleRows(Ix(e) * d_out, d_out) = ch.kraus()[e];
  return {std::move(v), d_env, ch.d_in(), ch.d_out()};
}

ChannelFamily::ChannelFamily(std::string name, std::size_t d_in, std::size_t d_out,
                             double theta_lo, double theta_hi, KrausFn kraus, KrausFn dkraus)
    : name_(std::move(name)),
      d_in_(d_in),
      d_out_(d_out),
      theta_lo_(theta_lo),
      theta_hi_(theta_hi),
      kraus_(std::move(kraus)),
      dkraus_(std::move(dkraus)) {
  if (!(theta_lo_ < theta_hi_) || !std::isfinite(theta_lo_) || !std::isfinite(theta_hi_)) {
    throw Error(ErrorCode::kInvalidParam, "family domain must be a finite open interval");
  }
  kraus_count_ = kraus_(0.5 * (theta_lo_ + theta_hi_)).size();
}

void ChannelFamily::RequireInDomain(double theta) const {
  if (!Contains(theta)) {
    throw Error(ErrorCode::kOutOfDomain, "theta = " + std::to_string(theta) + " outside (" +
                                             std::to_string(theta_lo_) + ", " +
                                             std::to_string(theta_hi_) + ") for family " + name_);
  }
}

KrausChannel ChannelFamily::KrausAt(double theta) const {
  RequireInDomain(theta);
  auto k = kraus_(theta);
  if (k.size() != kraus_count_) {
    throw Error(ErrorCode::kKrausCountMismatch, "family Kraus count changed with theta");
  }
  return KrausChannel(d_in_, d_out_, std::move(k));
}

std::vector<ComplexMatrix> ChannelFamily::DKrausAt(double theta) const {
  RequireInDomain(theta);
  auto dk = dkraus_(theta);
  if (dk.size() != kraus_count_) {
    throw Error(ErrorCode::kKrausCountMismatch, "derivative Kraus count differs from Kraus count");
  }
  for (const auto& m : dk) {
    if (m.rows() != Ix(d_out_) || m.cols() != Ix(d_in_)) {
      throw Error(ErrorCode::kShapeError, "derivative Kraus operator has wrong shape");
    }
  }
  return dk;
}

ChannelFamily ChannelFamily::WithDomain(double lo, double hi) const {
  return ChannelFamily(name_, d_in_, d_out_, lo, hi, kraus_, dkraus_);
}

FamilyIsometry FamilyIsometryAndDerivative(const ChannelFamily& fam, double theta) {
  const std::size_t d_env = fam.d_in() * fam.d_out();
  const KrausChannel ch = fam.KrausAt(theta);
  std::vector<ComplexMatrix> dk = fam.DKrausAt(theta);
  if (ch.size() > d_env) {
    throw Error(ErrorCode::kKrausCountMismatch,
                "family has " + std::to_string(ch.size()) + " Kraus operators, more than d_in*d_out");
  }
  const Index d_out = Ix(fam.d_out());
  dk.resize(d_env, ComplexMatrix::Zero(d_out, Ix(fam.d_in())));
  IsometricExtension iso = MakeIsometricExtension(ch.Padded(d_env));
  ComplexMatrix dv(iso.v.rows(), iso.v.cols());
  for (std::size_t e = 0; e < d_env; ++e) dv.middleRows(Ix(e) * d_out, d_out) = dk[e];
  return {std::move(iso), std::move(dv)};
}

KrausChannel BuiltinChannel(std::string_view name, std::span<const double> params) {
  if (name == "identity") {
    std::size_t d = 2;
    if (!params.empty()) {
      RequireParamCount(name, params, 1);
      if (params[0] < 1 || params[0] != std::floor(params[0])) {
        throw Error(ErrorCode::kInvalidParam, "identity dimension must be a positive integer");
      }
      d = static_cast<std::size_t>(params[0]);
    }
    return KrausChannel(d, d, {Identity(d)});
  }
  if (name == "depolarizing") {
    RequireParamCount(name, params, 1);
    RequireRange(name, params[0], 0.0, 4.0 / 3.0);
    return KrausChannel(2, 2, DepolarizingKraus(params[0]));
  }
  if (name == "dephasing") {
    RequireParamCount(name, params, 1);
    RequireRange(name, params[0], 0.0, 1.0);
    return KrausChannel(2, 2, DephasingKraus(params[0]));
  }
  if (name == "amplitude_damping") {
    RequireParamCount(name, params, 1);
    RequireRange(name, params[0], 0.0, 1.0);
    return KrausChannel(2, 2, AmplitudeDampingKraus(params[0]));
  }
  if (name == "unitary_rz" || name == "rz") {
    RequireParamCount(name, params, 1);
    return KrausChannel(2, 2, {RzMatrix(params[0])});
  }
  if (name == "unitary_given") {
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(params.size() / 2.0)));
    if (d == 0 || 2 * d * d != params.size()) {
      throw Error(ErrorCode::kInvalidParam,
                  "unitary_given expects 2*d*d numbers (row-major re/im pairs)");
    }
    ComplexMatrix u(Ix(d), Ix(d));
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        const std::size_t k = 2 * (r * d + c);
        u(Ix(r), Ix(c)) = Complex(params[k], params[k + 1]);
      }
    }
    try {
      return KrausChannel(d, d, {u});
    } catch (const Error&) {
      throw Error(ErrorCode::kInvalidParam, "unitary_given matrix is not unitary");
    }
  }
  throw Error(ErrorCode::kUnknownChannel, "unknown channel '" + std::string(name) + "'");
}

ChannelFamily BuiltinFamily(std::string_view name, std::span<const double> params) {
  if (!params.empty() && name != "constant") {
    throw Error(ErrorCode::kInvalidParam, "family '" + std::string(name) + "' takes no parameters");
  }
  if (name == "rz") {
    return ChannelFamily(
        "rz", 2, 2, -std::numbers::pi, std::numbers::pi,
        [](double t) { return std::vector<ComplexMatrix>{RzMatrix(t)}; },
        [](double t) {
          return std::vector<ComplexMatrix>{Complex(0, -0.5) * pauli::Z() * RzMatrix(t)};
        });
  }
  if (name == "dephasing") {
    return ChannelFamily(
        "dephasing", 2, 2, 0.0, 1.0, [](double t) { return DephasingKraus(t); },
        [](double t) {
          return std::vector<ComplexMatrix>{(-0.5 / std::sqrt(1.0 - t)) * pauli::I(),
                                            (0.5 / std::sqrt(t)) * pauli::Z()};
        });
  }
  if (name == "amplitude_damping") {
    return ChannelFamily(
        "amplitude_damping", 2, 2, 0.0, 1.0, [](double g) { return AmplitudeDampingKraus(g); },
        [](double g) {
          return std::vector<ComplexMatrix>{Diag2(0.0, -0.5 / std::sqrt(1.0 - g)),
                                            (0.5 / std::sqrt(g)) * Lowering()};
        });
  }
  if (name == "depolarizing") {
    return ChannelFamily(
        "depolarizing", 2, 2, 0.0, 4.0 / 3.0, [](double p) { return DepolarizingKraus(p); },
        [](double p) {
          const double da = -0.375 / std::sqrt(1.0 - 0.75 * p);
          const double db = 0.125 / std::sqrt(0.25 * p);
          return std::vector<ComplexMatrix>{da * pauli::I(), db * pauli::X(), db * pauli::Y(),
                                            db * pauli::Z()};
        });
  }
  if (name == "constant") {
    if (params.empty()) return ConstantFamily(BuiltinChannel("identity"));
    RequireParamCount(name, params, 1);
    RequireRange(name, params[0], 0.0, 1.0);
    return ConstantFamily(BuiltinChannel("dephasing", params));
  }
  throw Error(ErrorCode::kUnknownChannel, "unknown family '" + std::string(name) + "'");
}

ChannelFamily ConstantFamily(const KrausChannel& ch, double lo, double hi) {
  const std::vector<ComplexMatrix> k = ch.kraus();
  const std::vector<ComplexMatrix> zeros(
      k.size(), ComplexMatrix::Zero(Ix(ch.d_out()), Ix(ch.d_in())));
  return ChannelFamily(
      "constant", ch.d_in(), ch.d_out(), lo, hi, [k](double) { return k; },
      [zeros](double) { return zeros; });
}

ChannelFamily ComposeFamily(const ChannelFamily& fam, const KrausChannel& pre,
                            const KrausChannel& post) {
  if (pre.d_out() != fam.d_in() || post.d_in() != fam.d_out()) {
    throw Error(ErrorCode::kShapeError, "composition dimension mismatch");
  }
  auto combine = [pre, post](const std::vector<ComplexMatrix>& mid) {
    std::vector<ComplexMatrix> out;
    out.reserve(post.size() * mid.size() * pre.size());
    for (const auto& a : post.kraus()) {
      for (const auto& m : mid) {
        for (const auto& b : pre.kraus()) out.push_back(a * m * b);
      }
    }
    return out;
  };
  // Copies keep the composed family independent of the argument's lifetime.
  const ChannelFamily base = fam;
  return ChannelFamily(
      fam.name() + "_composed", pre.d_in(), post.d_out(), fam.theta_lo(), fam.theta_hi(),
      [base, combine](double t) { return combine(base.KrausAt(t).kraus()); },
      [base, combine](double t) { return combine(base.DKrausAt(t)); });
}

}  // namespace qbound
