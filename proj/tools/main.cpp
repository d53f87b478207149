#include "acceptance_suite.hpp"
#include "json_io.hpp"

#include "cmono/convolutions.hpp"
#include "cmono/cumulants.hpp"
#include "cmono/error.hpp"
#include "cmono/limits.hpp"
#include "cmono/measures.hpp"
#include "cmono/mixed_moments.hpp"
#include "cmono/semigroups.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace cmono;
using io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

struct Options {
  std::string output;
  int order = 8;

  std::string flavor = "cmonotone";
  std::string mu, nu, mu2, nu2;
  std::string op = "mono";
  std::string transform = "identity";

  std::string word, tables;

  std::string a1, a2;
  double t = 1.0, s = -1.0;
  bool check_law = false;
  double tol = 1e-8;

  std::string mode = "clt";
  int N = 512;
  std::string lambda = "1", rho;
  std::optional<double> limit_tol;

  std::string law;
  std::string grid = "-3:3:400";
};

const std::string kBernoulli = R"({"type":"atomic","atoms":[["-1","1/2"],["1","1/2"]]})";

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) fail(ErrorCode::InvalidSpec, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

MeasureSpec spec_of(const std::string& text) { return io::measure_spec(io::load(text)); }

MomentSeq moments(const std::string& text, int K) { return moments_of(spec_of(text), K); }

std::optional<AtomicMeasure> atomic(const MeasureSpec& s) {
  if (const auto* a = std::get_if<AtomicMeasure>(&s)) return *a;
  return std::nullopt;
}

// Atomic spec when every recovered atom is exact, moments otherwise.
Json measure_or_moments(const RationalMap& H, int K) {
  RecoveredMeasure rec = measure_from_h(H);
  if (rec.exact) return io::measure_json(rec.to_atomic());
  return io::moments_json(moments_of_h(H, K));
}

Json double_array(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

// ---------------------------------------------------------------------------

int cmd_cumulants(const Options& o, std::ostream& out) {
  Flavor f = parse_flavor(o.flavor);
  MomentSeq mu = moments(o.mu, o.order);
  std::vector<Rational> r;
  switch (f) {
    case Flavor::Monotone: r = monotone_cumulants(mu).r; break;
    case Flavor::Boolean: r = boolean_cumulants(mu).r; break;
    case Flavor::Free: r = free_cumulants(mu).r; break;
    case Flavor::CMonotonePair:
    case Flavor::CFreePair: {
      if (o.nu.empty()) fail(ErrorCode::InvalidSpec, "pair flavors need --nu");
      MomentSeq nu = moments(o.nu, o.order);
      r = f == Flavor::CMonotonePair ? cmonotone_cumulants(mu, nu).r : free_and_cfree_cumulants(mu, nu).pair;
      break;
    }
  }
  out << io::dump(io::from_rationals(r));
  return kExitOk;
}

int cmd_convolve(const Options& o, std::ostream& out) {
  if (o.mu.empty() || o.nu.empty()) fail(ErrorCode::InvalidSpec, "convolve needs --mu and --nu");
  const int K = o.order;
  MeasureSpec smu = spec_of(o.mu), snu = spec_of(o.nu);
  auto amu = atomic(smu), anu = atomic(snu);

  if (o.op == "mono" || o.op == "bool" || o.op == "ortho") {
    if (amu && anu) {
      RationalMap Hmu = h_of_atomic(*amu), Hnu = h_of_atomic(*anu);
      RationalMap H = o.op == "mono" ? monotone_convolve(Hmu, Hnu)
                      : o.op == "bool" ? boolean_convolve(Hmu, Hnu)
                                       : orthogonal_convolve(Hmu, Hnu);
      out << io::dump(measure_or_moments(H, K));
    } else {
      MomentSeq mu = moments_of(smu, K), nu = moments_of(snu, K);
      MomentSeq m = o.op == "mono" ? monotone_convolve(mu, nu) : o.op == "bool" ? boolean_convolve(mu, nu) : orthogonal_convolve(mu, nu);
      out << io::dump(io::moments_json(m));
    }
    return kExitOk;
  }

  if (o.op == "cmono" || o.op == "cfree") {
    // (mu, nu) with (mu2, nu2); the second pair defaults to the first
    MeasureSpec smu2 = o.mu2.empty() ? smu : spec_of(o.mu2), snu2 = o.nu2.empty() ? snu : spec_of(o.nu2);
    auto amu2 = atomic(smu2), anu2 = atomic(snu2);
    if (o.op == "cmono" && amu && anu && amu2 && anu2) {
      HPair h = cmonotone_convolve(HPair{h_of_atomic(*amu), h_of_atomic(*anu)}, HPair{h_of_atomic(*amu2), h_of_atomic(*anu2)});
      out << io::dump(Json{{"first", measure_or_moments(h.first, K)}, {"second", measure_or_moments(h.second, K)}});
      return kExitOk;
    }
    MomentPair p1{moments_of(smu, K), moments_of(snu, K)}, p2{moments_of(smu2, K), moments_of(snu2, K)};
    MomentPair p = o.op == "cmono" ? cmonotone_convolve(p1, p2) : cfree_convolve(p1, p2);
    out << io::dump(Json{{"first", io::moments_json(p.first)}, {"second", io::moments_json(p.second)}});
    return kExitOk;
  }

  if (o.op == "deformed") {
    Transform T = parse_transform(o.transform);
    bool rational = !std::holds_alternative<xform::XiT>(T) && !std::holds_alternative<xform::XiGeneral>(T);
    if (amu && anu && rational) {
      out << io::dump(measure_or_moments(deformed_convolve(T, h_of_atomic(*amu), h_of_atomic(*anu)), K));
    } else {
      out << io::dump(io::moments_json(deformed_convolve(T, moments_of(smu, K), moments_of(snu, K))));
    }
    return kExitOk;
  }
  fail(ErrorCode::InvalidSpec, "unknown --op '" + o.op + "'");
}

int cmd_mixedmoment(const Options& o, std::ostream& out) {
  if (o.tables.empty()) fail(ErrorCode::InvalidSpec, "mixedmoment needs --tables");
  PairValue v = eval_pair(Word::parse(o.word), io::tables(io::load(o.tables)));
  out << io::dump(Json{{"phi", io::from_rational(v.phi)}, {"psi", io::from_rational(v.psi)}});
  return kExitOk;
}

int cmd_semigroup(const Options& o, std::ostream& out) {
  PickField A1 = io::field(io::load(o.a1)), A2 = io::field(io::load(o.a2));
  auto grid = default_flow_grid();
  if (o.check_law) {
    double s = o.s >= 0 ? o.s : o.t / 2;
    LawResidual r = verify_semigroup_law(A1, A2, s, o.t, grid);
    r.threshold = o.tol;
    out << io::dump(Json{{"s", r.s},
                         {"t", r.t},
                         {"F_residual", r.F_residual},
                         {"H_residual", r.H_residual},
                         {"threshold", r.threshold},
                         {"passed", r.passed()}});
    return r.passed() ? kExitOk : kExitNumeric;
  }
  FlowState flow = integrate_flow(A1, A2, o.t, grid);
  Json j{{"t", o.t}, {"min_F_lift", flow.min_F_lift}, {"min_H_lift", flow.min_H_lift}};
  if (A1.imag_drift == 0 && A2.imag_drift == 0) {
    FittedMoments fm = fit_flow_moments(A1, A2, o.t, o.order);
    j["moments"] = Json{{"first", double_array(fm.first)}, {"second", double_array(fm.second)}};
    j["cumulants"] = Json{{"first", io::from_rationals(field_to_cumulants(A1, o.order))},
                          {"second", io::from_rationals(field_to_cumulants(A2, o.order))}};
  }
  out << io::dump(j);
  return kExitOk;
}

int cmd_idcheck(const Options& o, std::ostream& out) {
  if (o.order % 2 != 0) fail(ErrorCode::InvalidSpec, "--order is 2K and must be even");
  MomentSeq mu = moments(o.mu, o.order), nu = moments(o.nu.empty() ? o.mu : o.nu, o.order);
  DivisibilityVerdict v = is_infinitely_divisible(mu, nu, o.order / 2);
  out << io::dump(Json{{"divisible", v.divisible},
                       {"min_eig", v.min_eig()},
                       {"tracks_agree", v.tracks_agree},
                       {"label", v.label()}});
  return v.tracks_agree ? kExitOk : kExitNumeric;
}

Json iterate_json(const IterateResult& run, const std::optional<LimitLaw>& law, int K, double& worst) {
  Json j{{"N", run.N}};
  if (run.exact) j["moments"] = io::from_rationals(run.exact->values());
  else j["moments"] = double_array(run.moments);
  if (law) {
    MomentSeq ref = limit_law_moments(*law, K);
    std::vector<double> err;
    for (int n = 1; n <= K; ++n) {
      double e = run.exact ? std::abs(to_double(run.exact->values()[static_cast<std::size_t>(n - 1)] - ref(n)))
                           : std::abs(run.moments[static_cast<std::size_t>(n - 1)] - to_double(ref(n)));
      err.push_back(e);
      worst = std::max(worst, e);
    }
    j["law"] = law->str();
    j["reference"] = io::from_rationals(ref.values());
    j["abs_errors"] = double_array(err);
  } else {
    j["law"] = nullptr;
    j["reference"] = nullptr;
    j["abs_errors"] = nullptr;
  }
  return j;
}

int cmd_limit(const Options& o, std::ostream& out) {
  const int K = o.order;
  double worst = 0;
  Json j;
  bool pair = o.transform == "pair";
  if (o.mode == "clt") {
    std::string mu_text = o.mu.empty() ? kBernoulli : o.mu;
    if (pair) {
      MomentPair p{moments(mu_text, K), moments(o.nu.empty() ? mu_text : o.nu, K)};
      PairIterateResult r = clt_iterate_pair(p, o.N, K);
      j = iterate_json(r.first, clt_limit_law(p), K, worst);
      j["second"] = iterate_json(r.second, LimitLaw::kesten(p.second(2), p.second(2)), K, worst);
    } else {
      Transform T = parse_transform(o.transform);
      j = iterate_json(clt_iterate(moments(mu_text, K), T, o.N, K), clt_limit_law(T), K, worst);
    }
  } else if (o.mode == "poisson") {
    Rational lambda = parse_rational(o.lambda);
    if (pair) {
      Rational rho = o.rho.empty() ? lambda : parse_rational(o.rho);
      PairIterateResult r = poisson_iterate_pair(lambda, rho, o.N, K);
      j = iterate_json(r.first, LimitLaw::cmonotone_poisson(lambda, rho), K, worst);
      j["second"] = iterate_json(r.second, LimitLaw::cmonotone_poisson(rho, rho), K, worst);
    } else {
      Transform T = parse_transform(o.transform);
      j = iterate_json(poisson_iterate(lambda, T, o.N, K), poisson_limit_law(T, lambda), K, worst);
    }
  } else {
    fail(ErrorCode::InvalidSpec, "--mode is clt or poisson");
  }
  out << io::dump(j);
  return o.limit_tol && worst > *o.limit_tol ? kExitNumeric : kExitOk;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) fail(ErrorCode::InvalidSpec, "--grid is a:b:n");
  double a = 0, b = 0;
  int n = 0;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidSpec, "--grid is a:b:n");
  }
  if (n < 1 || !(a <= b)) fail(ErrorCode::InvalidSpec, "--grid needs a <= b and n >= 1");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return g;
}

// shortest decimal that reads back to the same double
std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int cmd_density(const Options& o, std::ostream& out) {
  LimitLaw law = LimitLaw::parse(o.law);
  DensityReport rep = limit_law_density(law, parse_grid(o.grid));
  out << "# law " << law.str() << "\n";
  for (const auto& a : rep.atoms) out << "# atom " << shortest(a.x) << " " << shortest(a.w) << "\n";
  out << "# ac_mass " << shortest(rep.ac_mass) << "\n# total_mass " << shortest(rep.total_mass()) << "\n";
  out << "x,density,spread,converged\n";
  for (const auto& p : rep.table)
    out << shortest(p.x) << "," << shortest(p.density) << "," << shortest(p.spread) << "," << (p.converged ? 1 : 0)
        << "\n";
  return std::abs(rep.total_mass() - 1) <= 1e-3 ? kExitOk : kExitNumeric;
}

int cmd_selftest(std::ostream& out) {
  auto results = acceptance::run_all(out);
  bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  return ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditionally monotone probability toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_option("-o,--output", o.output, "Write results to this file instead of stdout");

  auto* cum = app.add_subcommand("cumulants", "Cumulants of a measure or pair");
  cum->add_option("--flavor", o.flavor, "monotone, boolean, free, cmonotone or cfree")->capture_default_str();
  cum->add_option("--mu", o.mu, "Measure spec (inline JSON or path)")->required();
  cum->add_option("--nu", o.nu, "Second measure for pair flavors");
  cum->add_option("--order", o.order, "Number of cumulants")->capture_default_str();

  auto* conv = app.add_subcommand("convolve", "Convolutions of measures and pairs");
  conv->add_option("--op", o.op, "mono, bool, ortho, cmono, cfree or deformed")->capture_default_str();
  conv->add_option("--transform", o.transform, "identity, delta0, U:t, V:t,u,a, F:u or Xi:t")->capture_default_str();
  conv->add_option("--mu", o.mu)->required();
  conv->add_option("--nu", o.nu)->required();
  conv->add_option("--mu2", o.mu2, "First slot of the second pair (pair ops)");
  conv->add_option("--nu2", o.nu2, "Second slot of the second pair (pair ops)");
  conv->add_option("--order", o.order)->capture_default_str();

  auto* mm = app.add_subcommand("mixedmoment", "Mixed moment of a word under the iterated product");
  mm->add_option("--word", o.word, "e.g. \"1^2 2^1 1^1\"")->required();
  mm->add_option("--tables", o.tables, "Moment tables JSON (inline or path)")->required();

  auto* sg = app.add_subcommand("semigroup", "Integrate the flow of a pair of vector fields");
  sg->add_option("--a1", o.a1, "Field JSON for the first slot")->required();
  sg->add_option("--a2", o.a2, "Field JSON for the second slot")->required();
  sg->add_option("--t", o.t)->capture_default_str();
  sg->add_option("--s", o.s, "First time of the law check (default t/2)");
  sg->add_flag("--check-law", o.check_law, "Report semigroup-law residuals");
  sg->add_option("--tol", o.tol, "Residual threshold")->capture_default_str();
  sg->add_option("--order", o.order)->capture_default_str();

  auto* id = app.add_subcommand("idcheck", "Hankel test for infinite divisibility");
  id->add_option("--mu", o.mu)->required();
  id->add_option("--nu", o.nu);
  id->add_option("--order", o.order, "2K: cumulants used")->capture_default_str();

  auto* lim = app.add_subcommand("limit", "Iterate the CLT or Poisson scheme and compare with the limit law");
  lim->add_option("--mode", o.mode, "clt or poisson")->capture_default_str();
  lim->add_option("--transform", o.transform, "pair, or a transform spec")->capture_default_str();
  lim->add_option("--N", o.N)->capture_default_str();
  lim->add_option("--order", o.order)->capture_default_str();
  lim->add_option("--mu", o.mu, "CLT input (default symmetric Bernoulli)");
  lim->add_option("--nu", o.nu, "Second CLT input in pair mode");
  lim->add_option("--lambda", o.lambda)->capture_default_str();
  lim->add_option("--rho", o.rho, "Pair-mode Poisson rate of the second slot");
  lim->add_option("--tol", o.limit_tol, "Exit 2 when an absolute moment error exceeds this");

  auto* den = app.add_subcommand("density", "Density table and atoms of a limit law (CSV)");
  den->add_option("--law", o.law, "e.g. clt_0a:1, kesten:1,2, xi_poisson:1/2,1")->required();
  den->add_option("--grid", o.grid, "a:b:n")->capture_default_str();

  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  std::string name = app.get_subcommands().front()->get_name();
  try {
    Output sink(o.output);
    std::ostream& out = sink.stream();
    if (cum->parsed()) return cmd_cumulants(o, out);
    if (conv->parsed()) return cmd_convolve(o, out);
    if (mm->parsed()) return cmd_mixedmoment(o, out);
    if (sg->parsed()) return cmd_semigroup(o, out);
    if (id->parsed()) return cmd_idcheck(o, out);
    if (lim->parsed()) return cmd_limit(o, out);
    if (den->parsed()) return cmd_density(o, out);
    if (self->parsed()) return cmd_selftest(out);
  } catch (const Error& e) {
    std::cerr << name << "." << e.what() << "\n";
    return e.klass() == ErrorClass::Validation ? kExitValidation : kExitNumeric;
  } catch (const Json::exception& e) {
    std::cerr << name << ".InvalidSpec: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << name << ".Failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitValidation;
}
