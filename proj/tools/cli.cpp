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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qbound/channel_spec.hpp"
#include "qbound/discrimination.hpp"
#include "qbound/error.hpp"
#include "qbound/estimation.hpp"
#include "qbound/oracle.hpp"
#include "qbound/random.hpp"

namespace qbound::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 7;

struct Config {
  std::string a, b, family;
  double theta = 0.0;
  std::size_t n = 1;
  std::string n_range;
  double p = 0.5;
  double eps = 0.0;
  double delta = 0.0;
  std::string grid;
  std::string mode = "both";
  std::string route = "both";
  std::string pairing = "economical";
  std::string format = "table";
  std::uint64_t seed = kDefaultSeed;
  double tol = 0.0;
  std::string dump_sdp;
  std::string suite = "all";
};

std::string Fmt(double v, int digits = 17) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string BoundText(const Row& r, int digits) { return r.bound_text.empty() ? Fmt(r.bound, digits) : r.bound_text; }

BoundOptions MakeOptions(const Config& c) {
  BoundOptions o;
  if (c.tol > 0.0) o.solver.tol = c.tol;
  o.solver.dump_dir = c.dump_sdp;
  return o;
}

std::vector<std::size_t> NValues(const Config& c) {
  if (c.n_range.empty()) {
    if (c.n < 1) throw Error(ErrorCode::kInvalidInput, "--n must be at least 1");
    return {c.n};
  }
  const auto colon = c.n_range.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::kInvalidInput, "--n-range must look like lo:hi");
  std::size_t lo = 0, hi = 0;
  try {
    lo = std::stoul(c.n_range.substr(0, colon));
    hi = std::stoul(c.n_range.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidInput, "--n-range must look like lo:hi with integers");
  }
  if (lo < 1 || hi < lo) throw Error(ErrorCode::kInvalidInput, "--n-range needs 1 <= lo <= hi");
  std::vector<std::size_t> out;
  for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

std::vector<AccessMode> Modes(const std::string& m) {
  if (m == "both") return {AccessMode::kParallel, AccessMode::kAdaptive};
  return {ParseAccessMode(m)};
}

// "N" for a uniform interior grid, or "lo:hi:N" inclusive.
std::vector<double> ParseGrid(const std::string& spec, const ChannelFamily& fam) {
  if (spec.empty()) return UniformGrid(fam);
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  try {
    if (parts.size() == 1) return UniformGrid(fam, std::stoul(parts[0]));
    if (parts.size() == 3) {
      const double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
      const std::size_t k = std::stoul(parts[2]);
      if (k == 0) throw Error(ErrorCode::kInvalidInput, "grid needs at least one point");
      std::vector<double> g;
      for (std::size_t i = 0; i < k; ++i) g.push_back(k == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1));
      return g;
    }
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::kInvalidInput, "--grid must be N or lo:hi:N");
}

std::string PairName(const Config& c) { return c.a + " | " + c.b; }

Row ReportRow(const std::string& instance, const std::string& n, const BoundReport& r, const std::string& method) {
  Row row;
  row.instance = instance;
  row.n = n;
  row.bound = r.value;
  row.method = method;
  row.status = std::string(sdp::StatusName(r.solver_status));
  row.witness_norm = r.WitnessNorm();
  row.theorem_tag = r.theorem_tag;
  return row;
}

Row QueryRow(const std::string& instance, const QueryBoundResult& q) {
  Row row;
  row.instance = instance;
  row.n = q.diagnostics.n_max ? std::to_string(*q.diagnostics.n_max) : "inf";
  row.bound = q.lower_bound.AsDouble();
  row.bound_text = q.lower_bound.ToString();
  row.method = std::string(QueryMethodName(q.method)) + ":" + std::string(AccessModeName(q.mode));
  row.status = q.diagnostics.note.empty() ? "ok" : q.diagnostics.note;
  row.theorem_tag = q.theorem_tag;
  return row;
}

std::vector<Row> CmdFidelity(const Config& c) {
  const BoundOptions o = MakeOptions(c);
  const ChannelPair pair = ChannelPair::FromChannels(ParseChannelSpec(c.a), ParseChannelSpec(c.b));
  return {ReportRow(PairName(c), "1", RootFidelityChannels(pair, o), "sdp")};
}

std::vector<Row> CmdBures(const Config& c) {
  const BoundOptions o = MakeOptions(c);
  const ChannelPair pair = ChannelPair::FromChannels(ParseChannelSpec(c.a), ParseChannelSpec(c.b));
  std::vector<Row> rows{ReportRow(PairName(c), "1", BuresSqChannels(pair, o), "sdp")};
  std::optional<BoundReport> sql;
  for (std::size_t n : NValues(c)) {
    for (AccessMode m : Modes(c.mode)) {
      if (m == AccessMode::kParallel) {
        rows.push_back(ReportRow(PairName(c), std::to_string(n), ParallelBuresBound(pair, n, o), "sdp:parallel"));
      } else {
        if (n > 1 && !sql) sql = BuresSqlDenominator(pair, o);
        rows.push_back(ReportRow(PairName(c), std::to_string(n), AdaptiveBuresBound(pair, n, o, sql), "sdp+nu:adaptive"));
      }
    }
  }
  return rows;
}

std::vector<Row> CmdFisher(const Config& c) {
  const BoundOptions o = MakeOptions(c);
  const ChannelFamily fam = ParseFamilySpec(c.family);
  const std::string inst = c.family + " @ " + Fmt(c.theta, 10);
  std::vector<Row> rows{ReportRow(inst, "1", SldFisherChannel(fam, c.theta, o), "sdp")};
  std::optional<BoundReport> sql;
  for (std::size_t n : NValues(c)) {
    for (AccessMode m : Modes(c.mode)) {
      if (m == AccessMode::kParallel) {
        rows.push_back(ReportRow(inst, std::to_string(n), ParallelFisherBound(fam, c.theta, n, o), "sdp:parallel"));
      } else {
        if (n > 1 && !sql) sql = FisherSqlDenominator(fam, c.theta, o);
        rows.push_back(ReportRow(inst, std::to_string(n), AdaptiveFisherBound(fam, c.theta, n, o, sql), "sdp+nu:adaptive"));
      }
    }
  }
  return rows;
}

std::vector<Row> CmdDiscBound(const Config& c) {
  const BoundOptions o = MakeOptions(c);
  const ChannelPair pair = ChannelPair::FromChannels(ParseChannelSpec(c.a), ParseChannelSpec(c.b));
  DiscriminationInstance{pair, c.p, 0.0}.Validate();
  std::vector<Row> rows;
  for (std::size_t n : NValues(c)) {
    for (AccessMode m : Modes(c.mode)) {
      const BoundReport b = m == AccessMode::kParallel ? ParallelBuresBound(pair, n, o) : AdaptiveBuresBound(pair, n, o);
      Row row = ReportRow(PairName(c), std::to_string(n), b, "error_prob_floor:" + std::string(AccessModeName(m)));
      row.bound = ErrorProbFloorFromBound(b.value, c.p);
      row.theorem_tag = "error_prob_floor<-" + b.theorem_tag;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<Row> CmdDiscQuery(const Config& c) {
  const BoundOptions o = MakeOptions(c);
  const DiscriminationInstance inst{ChannelPair::FromChannels(ParseChannelSpec(c.a), ParseChannelSpec(c.b)), c.p, c.eps};
  inst.Validate();
  std::vector<Row> rows;
  if (const auto t = TrivialCaseCheck(inst, o)) {
    Row row;
    row.instance = PairName(c);
    row.n = "1";
    row.bound = 1.0;
    row.bound_text = t->ToString();
    row.method = "trivial_case";
    row.theorem_tag = "trivial_case_check";
    return {row};
  }
  for (AccessMode m : Modes(c.mode)) {
    rows.push_back(QueryRow(PairName(c), QueryLowerBound(inst, m, o)));
    rows.push_back(QueryRow(PairName(c), QueryLowerClosedForm(inst, m, o)));
  }
  return rows;
}

EstimationInstance MakeEstimation(const Config& c, const ChannelFamily& fam) {
  return EstimationInstance{fam, c.delta, c.eps, ParseGrid(c.grid, fam)};
}

Pairing ParsePairing(const std::string& s) {
  if (s == "economical") return Pairing::kEconomical;
  if (s == "all") return Pairing::kAllGridPairs;
  throw Error(ErrorCode::kInvalidInput, "--pairing must be economical or all");
}

Row FloorRow(const std::string& inst, std::size_t n, const EstimationFloor& f, AccessMode m) {
  Row row;
  row.instance = inst + " [" + Fmt(f.theta, 8) + ", " + Fmt(f.theta_prime, 8) + "]";
  row.n = std::to_string(n);
  row.bound = f.value;
  row.method = f.label + ":" + std::string(AccessModeName(m));
  row.status = "ok";
  row.theorem_tag = f.label == "asymptotic" ? "fisher_minimax_floor" : "minimax_error_floor";
  return row;
}

std::vector<Row> CmdEstBound(const Config& c) {
  const BoundOptions o = MakeOptions(c);
  const ChannelFamily fam = ParseFamilySpec(c.family);
  Config cc = c;
  if (cc.eps == 0.0) cc.eps = 0.5;  // eps plays no role in the floor
  const EstimationInstance inst = MakeEstimation(cc, fam);
  const Pairing pairing = ParsePairing(c.pairing);
  if (c.route != "both" && c.route != "reduction" && c.route != "fisher") {
    throw Error(ErrorCode::kInvalidInput, "--route must be reduction, fisher or both");
  }
  std::vector<Row> rows;
  for (std::size_t n : NValues(c)) {
    for (AccessMode m : Modes(c.mode)) {
      if (c.route != "fisher") rows.push_back(FloorRow(c.family, n, MinimaxErrorFloor(inst, n, m, pairing, o), m));
      if (c.route != "reduction") rows.push_back(FloorRow(c.family, n, FisherMinimaxFloor(inst, n, m, o), m));
    }
  }
  return rows;
}

std::vector<Row> CmdEstQuery(const Config& c) {
  const BoundOptions o = MakeOptions(c);
  const ChannelFamily fam = ParseFamilySpec(c.family);
  const EstimationInstance inst = MakeEstimation(c, fam);
  const Pairing pairing = ParsePairing(c.pairing);
  std::vector<Row> rows;
  for (AccessMode m : Modes(c.mode)) {
    const EstimationQueryResult r = EstQueryLower(inst, m, pairing, o);
    Row row = QueryRow(c.family + " [" + Fmt(r.theta, 8) + ", " + Fmt(r.theta_prime, 8) + "]", r.result);
    row.n = std::to_string(r.pairs_evaluated);
    rows.push_back(row);
  }
  return rows;
}

std::vector<Row> CmdClassify(const Config& c) {
  const BoundOptions o = MakeOptions(c);
  const ChannelFamily fam = ParseFamilySpec(c.family);
  const ScalingClassification s = ClassifyScaling(fam, ParseGrid(c.grid, fam), o);
  std::vector<Row> rows;
  for (const auto& pt : s.points) {
    Row row;
    row.instance = c.family + " @ " + Fmt(pt.theta, 10);
    row.n = "-";
    row.bound = pt.sql_value;
    row.method = "sql_denominator";
    row.status = pt.skipped ? "skipped: " + pt.warning : (pt.sql_feasible ? "feasible" : "infeasible");
    row.theorem_tag = "fisher_sql_denominator";
    rows.push_back(row);
  }
  Row summary;
  summary.instance = c.family;
  summary.n = "-";
  summary.bound = s.sql_denominator;
  summary.method = std::string(ScalingKindName(s.kind));
  summary.status = s.degenerate ? "degenerate (grid-approximate)" : "grid-approximate";
  summary.witness_norm = s.heis_coefficient;
  summary.theorem_tag = "classify_scaling";
  rows.push_back(summary);
  return rows;
}

// Oracle/bound consistency checks; `bound` holds the margin (>= 0 passes).
std::vector<Row> CmdVerify(const Config& c, bool& all_ok) {
  if (c.suite != "all" && c.suite != "quick") throw Error(ErrorCode::kInvalidInput, "--suite must be all or quick");
  const bool full = c.suite == "all";
  const BoundOptions o = MakeOptions(c);
  random::Rng rng(c.seed);
  std::vector<Row> rows;
  auto check = [&](const std::string& name, double margin, const std::string& tag) {
    Row row;
    row.instance = name;
    row.n = "-";
    row.bound = margin;
    row.method = "verify";
    row.status = margin >= 0.0 ? "pass" : "FAIL";
    row.theorem_tag = tag;
    all_ok = all_ok && margin >= 0.0;
    rows.push_back(row);
  };
  oracle::ProbeOptions po;
  po.samples = full ? 4000 : 1000;
  po.seed = c.seed;
  const KrausChannel id = BuiltinChannel("identity");
  for (double th : {M_PI / 4, M_PI / 2, 3 * M_PI / 4}) {
    const std::vector<double> prm{th};
    const KrausChannel rz = BuiltinChannel("rz", prm);
    const double sdp = RootFidelityChannels(ChannelPair::FromChannels(id, rz), o).value;
    const double probe = oracle::ProbeRootFidelityMin(id, rz, po).value;
    check("root fidelity vs probe, I|rz:" + Fmt(th, 6), 1e-4 - std::abs(sdp - probe), "root_fidelity_sdp");
  }
  const int pairs = full ? 5 : 2;
  std::vector<KrausChannel> as, bs;
  for (int k = 0; k < pairs; ++k) {
    as.push_back(random::RandomChannel(2, 2, 2, rng));
    bs.push_back(random::RandomChannel(2, 2, 2, rng));
  }
  for (int k = 0; k < pairs; ++k) {
    const ChannelPair pair = ChannelPair::FromChannels(as[k], bs[k]);
    const double f = RootFidelityChannels(pair, o).value;
    const double d = BuresSqChannels(pair, o).value;
    check("bures = 2(1 - sqrt F), random pair " + std::to_string(k), 1e-6 - std::abs(d - 2 * (1 - f)), "bures_sq_sdp");
    if (!full) continue;
    for (std::size_t n = 1; n <= 4; ++n) {
      const double par = ParallelBuresBound(pair, n, o).value;
      const double ad = AdaptiveBuresBound(pair, n, o).value;
      check("parallel <= adaptive, random pair " + std::to_string(k) + ", n=" + std::to_string(n), ad - par + 1e-6,
            "adaptive_bures_bound");
    }
    for (std::size_t n = 1; n <= 2; ++n) {
      const double pe = oracle::DiamondNormExact(0.5, as[k], 0.5, bs[k], n, o.solver).p_error;
      const double fl = ErrorProbFloor(pair, n, 0.5, AccessMode::kParallel, o);
      check("floor <= exact p_e, random pair " + std::to_string(k) + ", n=" + std::to_string(n), pe - fl + 1e-6,
            "error_prob_floor");
    }
  }
  if (full) {
    const std::vector<std::pair<std::string, double>> fams{{"dephasing", 0.25}, {"amplitude_damping", 0.1}, {"rz", 0.3}};
    for (const auto& [name, th] : fams) {
      const ChannelFamily fam = BuiltinFamily(name);
      const double sdp = SldFisherChannel(fam, th, o).value;
      const double probe = oracle::ProbeFisherMax(fam, th, po).value;
      check("probe Fisher <= SDP Fisher, " + name, sdp + 1e-6 - probe, "sld_fisher_channel_sdp");
    }
  }
  for (const auto& [name, th] : std::vector<std::pair<std::string, double>>{
           {"rz", 0.3}, {"dephasing", 0.5}, {"amplitude_damping", 0.1}, {"depolarizing", 0.2}}) {
    check("finite-difference Kraus derivative, " + name, 1e-6 - oracle::FiniteDiffKraus(BuiltinFamily(name), th, 1e-5),
          "finite_diff_kraus");
  }
  {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int mismatches = 0;
    for (int k = 0; k < 200; ++k) {
      const double a = u(rng) + 1e-3, b = a * u(rng), cc = 20.0 * u(rng);
      for (AccessMode m : {AccessMode::kParallel, AccessMode::kAdaptive}) {
        const auto scan = LinearScanFirst(1, 1000000, [&](std::size_t n) { return QuadraticPredicate(a, b, cc, n, m); });
        if (scan.n != QuadraticMinN(a, b, cc, m)) ++mismatches;
      }
    }
    check("quadratic lemma = integer scan (200 triples)", mismatches == 0 ? 0.0 : -static_cast<double>(mismatches), "quadratic_min_n");
  }
  if (full) {
    const std::vector<double> prm{M_PI / 4};
    const DiscriminationInstance inst{ChannelPair::FromChannels(id, BuiltinChannel("rz", prm)), 0.5, 0.05};
    const QueryBoundResult bsr = BinarySearchParallel(inst, o);
    const auto nmax = *bsr.diagnostics.n_max;
    const auto lin = LinearScanFirst(1, nmax, [&](std::size_t n) {
      return ParallelBuresBound(inst.pair, n, o).value + kCeilingNudge >= inst.Threshold();
    });
    check("binary search = linear scan, I|rz:pi/4", lin.n == bsr.lower_bound.count() ? 0.0 : -1.0, "binary_search_parallel");
  }
  return rows;
}

}  // namespace

void WriteTable(const std::vector<Row>& rows, std::ostream& out) {
  const std::vector<std::string> head{"instance", "n", "bound", "method", "status", "witness_norm", "theorem_tag"};
  std::vector<std::vector<std::string>> cells{head};
  for (const auto& r : rows) {
    cells.push_back({r.instance, r.n, BoundText(r, 10), r.method, r.status, Fmt(r.witness_norm, 6), r.theorem_tag});
  }
  std::vector<std::size_t> w(head.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) w[i] = std::max(w[i], line[i].size());
  }
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      out << std::left << std::setw(static_cast<int>(w[i])) << line[i] << (i + 1 < line.size() ? "  " : "\n");
    }
  }
}

namespace {
std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}
}  // namespace

void WriteCsv(const std::vector<Row>& rows, std::ostream& out) {
  out << "instance,n,bound,method,status,witness_norm,theorem_tag\n";
  for (const auto& r : rows) {
    out << CsvField(r.instance) << ',' << CsvField(r.n) << ',' << CsvField(BoundText(r, 17)) << ','
        << CsvField(r.method) << ',' << CsvField(r.status) << ',' << Fmt(r.witness_norm) << ','
        << CsvField(r.theorem_tag) << '\n';
  }
}

void WriteJson(const std::string& command, const std::vector<Row>& rows, std::ostream& out) {
  nlohmann::json j;
  j["command"] = command;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o;
    o["instance"] = r.instance;
    o["n"] = r.n;
    if (!r.bound_text.empty()) {
      o["bound"] = r.bound_text;
    } else if (std::isfinite(r.bound)) {
      o["bound"] = r.bound;
    } else {
      o["bound"] = Fmt(r.bound);
    }
    o["method"] = r.method;
    o["status"] = r.status;
    o["witness_norm"] = r.witness_norm;
    o["theorem_tag"] = r.theorem_tag;
    j["rows"].push_back(o);
  }
  out << j.dump(2) << '\n';
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  c.seed = random::SeedFromEnv(kDefaultSeed);
  CLI::App app{"qbound: channel fidelity, Bures and Fisher SDPs with discrimination and estimation bounds", "qbound"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand help for all subcommands");

  auto add_pair = [&](CLI::App* s) {
    s->add_option("--a", c.a, "First channel (inline kind:params, JSON text or JSON file)")->required();
    s->add_option("--b", c.b, "Second channel")->required();
  };
  auto add_common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    s->add_option("--tol", c.tol, "Solver tolerance override")->check(CLI::PositiveNumber);
    s->add_option("--dump-sdp", c.dump_sdp, "Directory for solver problem dumps");
    s->add_option("--seed", c.seed, "Random seed (default from QBOUND_SEED, else 7)");
  };
  auto add_n = [&](CLI::App* s) {
    s->add_option("--n", c.n, "Number of channel uses")->check(CLI::PositiveNumber);
    s->add_option("--n-range", c.n_range, "Range lo:hi of channel uses");
  };
  auto add_mode = [&](CLI::App* s) {
    s->add_option("--mode", c.mode, "Access model")->check(CLI::IsMember({"parallel", "adaptive", "both"}));
  };
  auto add_family = [&](CLI::App* s) {
    s->add_option("--family", c.family, "Channel family (inline kind:params, JSON text or JSON file)")->required();
  };
  auto add_est = [&](CLI::App* s, bool need_eps) {
    add_family(s);
    s->add_option("--delta", c.delta, "Window half-width")->required();
    auto* e = s->add_option("--eps", c.eps, "Error threshold");
    if (need_eps) e->required();
    s->add_option("--grid", c.grid, "Theta grid: N interior points or lo:hi:N");
    s->add_option("--pairing", c.pairing, "Pair selection")->check(CLI::IsMember({"economical", "all"}));
    add_mode(s);
  };

  auto* fid = app.add_subcommand("fidelity", "Root fidelity of two channels");
  add_pair(fid);
  add_common(fid);
  auto* bur = app.add_subcommand("bures", "Squared Bures distance and n-use Bures bounds");
  add_pair(bur);
  add_n(bur);
  add_mode(bur);
  add_common(bur);
  auto* fis = app.add_subcommand("fisher", "SLD Fisher information of a channel family and n-use bounds");
  add_family(fis);
  fis->add_option("--theta", c.theta, "Parameter value (radians for rotations)")->required();
  add_n(fis);
  add_mode(fis);
  add_common(fis);
  auto* db = app.add_subcommand("disc-bound", "Error-probability floor for binary channel discrimination");
  add_pair(db);
  db->add_option("--p", c.p, "Prior of the first channel");
  add_n(db);
  add_mode(db);
  add_common(db);
  auto* dq = app.add_subcommand("disc-query", "Query-complexity lower bounds for binary channel discrimination");
  add_pair(dq);
  dq->add_option("--p", c.p, "Prior of the first channel");
  dq->add_option("--eps", c.eps, "Error threshold")->required();
  add_mode(dq);
  add_common(dq);
  auto* eb = app.add_subcommand("est-bound", "Minimax error floor for channel estimation");
  add_est(eb, false);
  eb->add_option("--route", c.route, "reduction, fisher or both")->check(CLI::IsMember({"reduction", "fisher", "both"}));
  add_n(eb);
  add_common(eb);
  auto* eq = app.add_subcommand("est-query", "Query-complexity lower bound for channel estimation");
  add_est(eq, true);
  add_common(eq);
  auto* cl = app.add_subcommand("classify", "SQL / Heisenberg scaling classification of a family");
  add_family(cl);
  cl->add_option("--grid", c.grid, "Theta grid: N interior points or lo:hi:N");
  add_common(cl);
  auto* ve = app.add_subcommand("verify", "Oracle/bound consistency suite");
  ve->add_option("--suite", c.suite, "all or quick")->check(CLI::IsMember({"all", "quick"}));
  add_common(ve);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "qbound: " << e.what() << " (see --help)\n";
    return kExitInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::vector<Row> rows;
  bool verify_ok = true;
  try {
    if (command == "fidelity") rows = CmdFidelity(c);
    else if (command == "bures") rows = CmdBures(c);
    else if (command == "fisher") rows = CmdFisher(c);
    else if (command == "disc-bound") rows = CmdDiscBound(c);
    else if (command == "disc-query") rows = CmdDiscQuery(c);
    else if (command == "est-bound") rows = CmdEstBound(c);
    else if (command == "est-query") rows = CmdEstQuery(c);
    else if (command == "classify") rows = CmdClassify(c);
    else rows = CmdVerify(c, verify_ok);
  } catch (const Error& e) {
    err << "qbound: " << e.what() << '\n';
    return e.code() == ErrorCode::kSolverFailure ? kExitSolverFailure : kExitInputError;
  }

  if (c.format == "csv") WriteCsv(rows, out);
  else if (c.format == "json") WriteJson(command, rows, out);
  else WriteTable(rows, out);
  return verify_ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace qbound::cli
