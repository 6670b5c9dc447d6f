#pragma once

// Command-line front end. `run` is separate from main so tests can drive it
// with string streams.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qapdist/qapdist.hpp"

namespace qapdist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitVerifyFailed = 3;

struct Options {
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string mode = "exact";
  int jobs = 1;
  std::string output;

  // subcommand arguments
  std::string file;
  std::string kind;
  int n = 0;
  long range = 9;
  long den = 1;
  std::string perm;
  std::string method = "auto";
  std::string cone = "auto";
  std::string coeffs;
  std::string center = "e";
  std::string ring_mode = "exact";
  std::string threshold;
  long samples = 0;
  long draws = 0;
  std::string target;
  int bins = 0;
  std::string theorem;
  int k = 3;
  std::string gamma = "1/2";
};

/// Thrown for inputs that are well-formed but fail validation.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Output sink: the -o file when given, otherwise stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ValidationError("cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& operator*() { return *out_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

inline void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (o.format == a) return;
  throw ValidationError("format '" + o.format + "' is not available for this command");
}

template <Scalar T>
QapInstance<T> load(const Options& o) {
  if (o.file.empty()) throw ValidationError("an instance file is required");
  return read_instance_file<T>(o.file);
}

template <Scalar T>
DenseMatrix<T> random_distance_matrix(int n, Rng& rng, long range, bool symmetric) {
  DenseMatrix<T> b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || (symmetric && j < i)) continue;
      b(i, j) = T(uniform_int(rng, 0, range));
      if (symmetric) b(j, i) = b(i, j);
    }
  return b;
}

inline bool is_random_kind(const std::string& kind) { return kind != "spike"; }

template <Scalar T>
QapInstance<T> generate(const Options& o) {
  const int n = o.n;
  if (n < 4) throw ValidationError("--n must be >= 4");
  if (o.range < 1 || o.den < 1) throw ValidationError("--range and --den must be >= 1");
  Rng rng(o.seed);
  RandomDistribution d;
  d.range = o.range;
  d.max_denominator = o.den;
  if (o.kind == "sym-cycle")
    return QapInstance<T>::matrix_pair(symmetric_cycle_matrix<T>(n),
                                       random_distance_matrix<T>(n, rng, o.range, true));
  if (o.kind == "dir-cycle")
    return QapInstance<T>::matrix_pair(directed_cycle_matrix<T>(n),
                                       random_distance_matrix<T>(n, rng, o.range, false));
  if (o.kind == "spike") return spike_instance<T>(n);
  if (o.kind == "generalized-random") {
    if (n > Tensor4<T>::max_dimension) throw ValidationError("--n is too large for a tensor");
    return random_generalized_instance<T>(n, d, rng);
  }
  if (o.kind == "random") d.kind = RandomKind::General;
  else if (o.kind == "random-symmetric") d.kind = RandomKind::Symmetric;
  else if (o.kind == "random-pure") d.kind = RandomKind::Pure;
  else if (o.kind == "random-bullseye") d.kind = RandomKind::Bullseye;
  else throw ValidationError("unknown instance kind: " + o.kind);
  return random_instance<T>(n, d, rng);
}

template <Scalar T>
QapInstance<T> load_or_generate(const Options& o) {
  if (!o.file.empty()) return load<T>(o);
  if (o.kind.empty()) throw ValidationError("give an instance file or --kind with --n");
  return generate<T>(o);
}

template <Scalar T>
std::string num(const T& x) {
  return to_string(x);
}

inline std::string yes_no(bool b) { return b ? "pass" : "FAIL"; }

/// Seed line for reports whose body cannot carry it: CSV on stdout gets it on
/// stderr, file output gets it on stdout.
inline void note_seed(const Options& o, const Sink& sink, std::ostream& out, std::ostream& err) {
  if (sink.to_file()) out << "seed: " << o.seed << '\n';
  else if (o.format == "csv") err << "seed: " << o.seed << '\n';
}

// ---------------------------------------------------------------------------

template <Scalar T>
int cmd_gen(const Options& o, std::ostream& out) {
  require_format(o, {"text", "json"});
  const QapInstance<T> inst = generate<T>(o);
  Json j = instance_to_json(inst);
  if (is_random_kind(o.kind)) j["seed"] = o.seed;
  Sink sink(o.output, out);
  *sink << j.dump(1) << '\n';
  if (sink.to_file()) {
    out << "wrote " << o.kind << " instance n=" << inst.n() << " to " << o.output << '\n';
    if (is_random_kind(o.kind)) out << "seed: " << o.seed << '\n';
  }
  return kExitOk;
}

template <Scalar T>
int cmd_eval(const Options& o, std::ostream& out) {
  require_format(o, {"text", "json"});
  const QapInstance<T> inst = load<T>(o);
  const Permutation sigma = o.perm.empty() ? Permutation::identity(inst.n()) : parse_permutation(o.perm);
  if (sigma.size() != inst.n()) throw ValidationError("permutation size does not match instance");
  const T f = inst.evaluate(sigma);
  const T f0 = f - inst.mean();
  Sink sink(o.output, out);
  if (o.format == "json") {
    Json j;
    j["perm"] = permutation_to_json(sigma);
    j["value"] = scalar_to_json(f);
    j["shifted"] = scalar_to_json(f0);
    *sink << j.dump() << '\n';
  } else {
    *sink << "f = " << num(f) << "\nf0 = " << num(f0) << '\n';
  }
  return kExitOk;
}

template <Scalar T>
int cmd_mean(const Options& o, std::ostream& out) {
  require_format(o, {"text", "json"});
  const QapInstance<T> inst = load<T>(o);
  Sink sink(o.output, out);
  if (o.format == "json") {
    *sink << Json{{"mean", scalar_to_json(inst.mean())}}.dump() << '\n';
  } else {
    *sink << num(inst.mean()) << '\n';
  }
  return kExitOk;
}

template <Scalar T>
ClassFunction<T> project_instance(const QapInstance<T>& inst, const std::string& method, int jobs) {
  if (method == "kb") return central_projection_kb(inst);
  if (method == "exact") return central_projection_exact(inst, jobs);
  if (method != "auto") throw ValidationError("unknown projection method: " + method);
  if (inst.is_matrix_pair() && inst.n() >= 4) return central_projection_kb(inst);
  return central_projection_exact(inst, jobs);
}

template <Scalar T>
void print_coefficients(std::ostream& os, const CharacterCoefficients<T>& c) {
  for (Irrep r : kIrreps) os << "  c[" << label(r) << "] = " << num(c[r]) << '\n';
}

template <Scalar T>
int cmd_project(const Options& o, std::ostream& out) {
  require_format(o, {"text", "json"});
  const QapInstance<T> inst = load<T>(o);
  const ClassFunction<T> cf = project_instance(inst, o.method, o.jobs);
  Sink sink(o.output, out);
  if (o.format == "json") {
    Json j = class_function_to_json(cf);
    if (!cf.is_span() && inst.n() >= 4) {
      const SpanProjection<T> sp = character_coefficients(cf);
      j["span"] = {{"coeffs", coefficients_to_json(sp.coeffs)},
                   {"residual_sq", scalar_to_json(sp.residual_sq)}};
    }
    *sink << j.dump(1) << '\n';
    return kExitOk;
  }
  *sink << "n = " << inst.n() << "\nmode = " << (cf.is_span() ? "span" : "exact") << '\n';
  if (cf.is_span()) {
    *sink << "coefficients:\n";
    print_coefficients(*sink, cf.coefficients());
    *sink << "values (p, t):\n";
    std::vector<CycleStats> all{{inst.n(), 0}};
    for (const auto& s : feasible_pt_pairs(inst.n())) all.push_back(s);
    for (const auto& s : all)
      *sink << "  (" << s.p << ", " << s.t << ") " << num(cf.coefficients().value(s.p, s.t)) << '\n';
  } else {
    *sink << "values (cycle type):\n";
    for (const auto& ct : partitions(inst.n())) *sink << "  " << ct << ' ' << num(cf(ct)) << '\n';
    if (inst.n() >= 4) {
      const SpanProjection<T> sp = character_coefficients(cf);
      *sink << "character span coefficients:\n";
      print_coefficients(*sink, sp.coeffs);
      *sink << "residual_sq = " << num(sp.residual_sq) << '\n';
    }
  }
  return kExitOk;
}

template <Scalar T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(parse_scalar<T>(cell));
  return out;
}

template <Scalar T>
int cmd_cone(const Options& o, std::ostream& out) {
  require_format(o, {"text", "json"});
  CharacterCoefficients<T> coeffs;
  T residual(0);
  int n = 0;
  std::optional<Regime> regime;
  if (!o.coeffs.empty()) {
    const std::vector<T> v = parse_list<T>(o.coeffs);
    if (v.size() != 4) throw ValidationError("--coeffs needs four values: n, n-1,1, n-2,2, n-2,1,1");
    for (std::size_t i = 0; i < 4; ++i) coeffs.c[i] = v[i];
    n = o.n;
    if (n < 4) throw ValidationError("--n must be >= 4");
  } else {
    const QapInstance<T> inst = load<T>(o);
    n = inst.n();
    if (n < 4) throw ValidationError("cones need n >= 4");
    regime = classify(inst);
    const SpanProjection<T> sp = character_coefficients(project_instance(inst, "auto", o.jobs));
    coeffs = sp.coeffs;
    residual = sp.residual_sq;
  }
  ConeType type;
  if (o.cone == "auto") {
    if (!regime) throw ValidationError("--cone auto needs an instance; pick pure, symmetric or general");
    type = cone_type_for(regime->label);
  } else {
    type = cone_type_from_string(o.cone);
  }
  ConeReport<T> rep = membership(coeffs, ConeKind(type, n));
  rep.span_residual = residual;
  Sink sink(o.output, out);
  if (o.format == "json") {
    Json j = cone_report_to_json(rep);
    if (regime) j["regime"] = to_string(regime->label);
    *sink << j.dump(1) << '\n';
    return kExitOk;
  }
  if (regime) *sink << "regime: " << to_string(regime->label) << '\n';
  *sink << "cone: " << to_string(type) << " (n=" << n << ")\n";
  *sink << "verdict: " << to_string(rep.verdict) << '\n';
  *sink << "basis:";
  for (const auto& v : rep.basis) *sink << ' ' << num(v);
  *sink << '\n';
  for (const auto& s : rep.slacks) *sink << "  " << s.id << " slack " << num(s.value) << '\n';
  if (rep.member) {
    *sink << "ray weights:";
    for (const auto& [name, w] : rep.ray_weights) *sink << ' ' << name << '=' << num(w);
    *sink << '\n';
  }
  *sink << "span residual: " << num(rep.span_residual) << '\n';
  return kExitOk;
}

template <Scalar T>
Permutation resolve_center(const QapInstance<T>& inst, const Options& o) {
  if (o.center == "e") return Permutation::identity(inst.n());
  if (o.center == "opt") return argmax_enumerate(inst, o.jobs).argmax;
  Permutation p = parse_permutation(o.center);
  if (p.size() != inst.n()) throw ValidationError("center size does not match instance");
  return p;
}

inline RingMode parse_ring_mode(const std::string& s) {
  if (s == "exact") return RingMode::Exact;
  if (s == "projected") return RingMode::Projected;
  throw ValidationError("unknown ring mode: " + s);
}

template <Scalar T>
void print_profile_text(std::ostream& os, const RingProfile<T>& prof) {
  os << "n = " << prof.n << "  center = " << prof.center << "  mode = " << to_string(prof.mode)
     << "\nf0(center) = " << num(prof.center_value) << '\n';
  os << "k  ring_size  average  threshold  pass\n";
  for (int k = 0; k <= prof.n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    os << k << "  " << prof.ring_sizes[idx].get_str() << "  "
       << (prof.empty_ring(k) ? std::string("-") : num(prof.averages[idx])) << "  "
       << (prof.thresholds.empty() ? std::string("-") : num(prof.thresholds[idx])) << "  "
       << (ring_passes(prof, k) ? "true" : "false") << '\n';
  }
}

template <Scalar T>
int cmd_rings(const Options& o, std::ostream& out) {
  const QapInstance<T> inst = load<T>(o);
  const RingProfile<T> prof =
      ring_profile(inst, resolve_center(inst, o), parse_ring_mode(o.ring_mode), o.jobs);
  Sink sink(o.output, out);
  if (o.format == "csv") write_ring_profile_csv(*sink, prof);
  else if (o.format == "json") *sink << ring_profile_to_json(prof).dump(1) << '\n';
  else print_profile_text(*sink, prof);
  return kExitOk;
}

template <Scalar T>
int cmd_tail(const Options& o, std::ostream& out) {
  require_format(o, {"text", "json"});
  const QapInstance<T> inst = load<T>(o);
  if (o.threshold.empty()) throw ValidationError("--threshold is required");
  const T threshold = parse_scalar<T>(o.threshold);
  const bool monte_carlo = o.samples > 0 || inst.n() > kEnumerationMaxN;
  TailReport<T> rep;
  if (monte_carlo) {
    if (o.samples < 1) throw ValidationError("n > 8 needs --samples for a Monte Carlo estimate");
    Rng rng(o.seed);
    rep = tail_probability_montecarlo(inst, threshold, o.samples, rng);
  } else {
    rep = tail_probability_exact(inst, threshold, o.jobs);
  }
  Sink sink(o.output, out);
  if (o.format == "json") {
    Json j = tail_report_to_json(rep);
    if (monte_carlo) j["seed"] = o.seed;
    *sink << j.dump(1) << '\n';
    return kExitOk;
  }
  *sink << "threshold = " << num(rep.threshold) << '\n';
  if (rep.exact) {
    *sink << "P = " << rep.hits.get_str() << '/' << rep.total.get_str() << " = "
          << rep.exact_probability().get_str() << " (" << rep.probability << ")\n";
  } else {
    *sink << "seed: " << o.seed << "\nP ~ " << rep.probability << "  99% CI [" << rep.ci_low << ", "
          << rep.ci_high << "]  from " << rep.total.get_str() << " samples\n";
  }
  return kExitOk;
}

template <Scalar T>
int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  const QapInstance<T> inst = load<T>(o);
  if (o.draws < 1) throw ValidationError("--draws must be >= 1");
  std::optional<T> target;
  if (!o.target.empty()) target = parse_scalar<T>(o.target);
  const SampleResult<T> res = best_of_sample(inst, o.draws, o.seed, target, o.bins > 0);
  Sink sink(o.output, out);
  if (o.bins > 0) {
    std::vector<double> values;
    for (const auto& v : res.values) values.push_back(to_double(v));
    const Histogram h = make_histogram(values, o.bins);
    if (o.format == "csv") {
      write_histogram_csv(*sink, h);
    } else if (o.format == "json") {
      Json j = sample_result_to_json(res);
      j["histogram"] = histogram_to_json(h);
      *sink << j.dump(1) << '\n';
    } else {
      *sink << "seed: " << res.seed << '\n';
      write_histogram_csv(*sink, h);
    }
    note_seed(o, sink, out, err);
    return kExitOk;
  }
  require_format(o, {"text", "json"});
  note_seed(o, sink, out, err);
  if (o.format == "json") {
    *sink << sample_result_to_json(res).dump(1) << '\n';
    return kExitOk;
  }
  *sink << "seed: " << res.seed << "\ndraws: " << res.draws << "\nbest: " << res.best
        << "\nbest f0: " << num(res.best_value) << '\n';
  if (target)
    *sink << "target: " << num(*target) << "\nhits: " << res.hits << " (" << res.fraction << ")\n";
  return kExitOk;
}

template <Scalar T>
int verify_ring_theorem(const Options& o, const QapInstance<T>& inst, bool seeded, std::ostream& out,
                        std::ostream& err) {
  if (inst.n() > kEnumerationMaxN)
    throw ValidationError("the ring bound check finds the optimum by enumeration; n must be <= 8");
  const Optimum<T> opt = argmax_enumerate(inst, o.jobs);
  const BullseyeReport<T> rep = verify_bullseye(inst, opt.argmax, parse_ring_mode(o.ring_mode));
  Sink sink(o.output, out);
  if (seeded) note_seed(o, sink, out, err);
  if (o.format == "csv") {
    write_ring_profile_csv(*sink, rep.profile);
  } else if (o.format == "json") {
    Json j;
    j["theorem"] = "2.1";
    if (seeded) j["seed"] = o.seed;
    j["profile"] = ring_profile_to_json(rep.profile);
    Json gaps = Json::array();
    for (const auto& row : rep.rows) gaps.push_back(scalar_to_json(row.gap));
    j["gaps"] = std::move(gaps);
    j["pass"] = rep.all_pass;
    *sink << j.dump(1) << '\n';
  } else {
    if (seeded) *sink << "seed: " << o.seed << '\n';
    *sink << "theorem 2.1  n = " << inst.n() << "  center = " << opt.argmax
          << "  f0(center) = " << num(rep.profile.center_value) << '\n';
    *sink << "k  ring_size  average  threshold  gap  result\n";
    for (const auto& row : rep.rows) {
      const auto idx = static_cast<std::size_t>(row.k);
      *sink << row.k << "  " << rep.profile.ring_sizes[idx].get_str() << "  ";
      if (rep.profile.empty_ring(row.k)) *sink << "-  " << num(row.threshold) << "  -  pass\n";
      else
        *sink << num(row.average) << "  " << num(row.threshold) << "  " << num(row.gap) << "  "
              << yes_no(row.pass) << '\n';
    }
    *sink << "result: " << (rep.all_pass ? "pass" : "FAIL") << '\n';
  }
  return rep.all_pass ? kExitOk : kExitVerifyFailed;
}

template <Scalar T>
int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const QapInstance<T> inst = load_or_generate<T>(o);
  const bool seeded = o.file.empty() && is_random_kind(o.kind);
  if (o.theorem == "2.1") return verify_ring_theorem(o, inst, seeded, out, err);
  const TailTheorem thm = theorem_from_id(o.theorem);
  if (inst.n() > kEnumerationMaxN)
    throw ValidationError("tail theorems are checked by enumeration; n must be <= 8");
  const Rational gamma = ScalarTraits<Rational>::parse(o.gamma);
  const TailReport<T> rep = verify_theorem(thm, inst, o.k, gamma, o.jobs);
  Sink sink(o.output, out);
  if (seeded) note_seed(o, sink, out, err);
  if (o.format == "csv") {
    write_tail_report_csv(*sink, std::vector<TailReport<T>>{rep});
  } else if (o.format == "json") {
    Json j = tail_report_to_json(rep);
    if (seeded) j["seed"] = o.seed;
    *sink << j.dump(1) << '\n';
  } else {
    if (seeded) *sink << "seed: " << o.seed << '\n';
    *sink << "theorem " << rep.theorem << "  n = " << inst.n() << "  k = " << rep.k
          << "  gamma = " << rep.gamma.get_str() << '\n'
          << "f0(opt) = " << num(rep.optimum) << "\nthreshold = " << num(rep.threshold) << '\n'
          << "P = " << rep.exact_probability().get_str() << " (" << rep.probability << ")\n"
          << "bound = " << rep.bound->get_str() << " (" << rep.bound->get_d() << ")\n"
          << "result: " << yes_no(rep.pass) << (rep.trivial ? " (trivial: bound is 0)" : "") << '\n';
  }
  return rep.pass ? kExitOk : kExitVerifyFailed;
}

template <Scalar T>
int dispatch(const std::string& cmd, const Options& o, std::ostream& out, std::ostream& err) {
  if (cmd == "gen") return cmd_gen<T>(o, out);
  if (cmd == "eval") return cmd_eval<T>(o, out);
  if (cmd == "mean") return cmd_mean<T>(o, out);
  if (cmd == "project") return cmd_project<T>(o, out);
  if (cmd == "cone") return cmd_cone<T>(o, out);
  if (cmd == "rings") return cmd_rings<T>(o, out);
  if (cmd == "tail") return cmd_tail<T>(o, out);
  if (cmd == "sample") return cmd_sample<T>(o, out, err);
  if (cmd == "verify") return cmd_verify<T>(o, out, err);
  throw ValidationError("unknown command: " + cmd);
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distribution analysis of quadratic assignment objectives over S_n", "qapdist"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    sub->add_option("--mode", o.mode, "arithmetic")
        ->check(CLI::IsMember({"exact", "float"}))
        ->capture_default_str();
    sub->add_option("--jobs", o.jobs, "worker threads for enumeration")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    sub->add_option("-o,--output", o.output, "write the result to a file");
  };
  auto with_file = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("instance", o.file, "instance JSON file");
    if (required) opt->required();
  };

  auto* gen = app.add_subcommand("gen", "generate an instance");
  common(gen);
  gen->add_option("--kind", o.kind,
                  "sym-cycle, dir-cycle, spike, random, random-symmetric, random-pure, "
                  "random-bullseye, generalized-random")
      ->required();
  gen->add_option("--n", o.n, "dimension")->required();
  gen->add_option("--range", o.range, "entries drawn from [-range, range]")->capture_default_str();
  gen->add_option("--den", o.den, "largest denominator of random entries")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "evaluate f and f0 at a permutation");
  common(eval);
  with_file(eval, true);
  eval->add_option("--perm", o.perm, "1-based images, e.g. 2,1,3,4 (default: identity)");

  auto* mean = app.add_subcommand("mean", "average of f over S_n");
  common(mean);
  with_file(mean, true);

  auto* project = app.add_subcommand("project", "central projection onto class functions");
  common(project);
  with_file(project, true);
  project->add_option("--method", o.method, "auto, kb or exact")->capture_default_str();

  auto* cone = app.add_subcommand("cone", "central cone membership of the projection");
  common(cone);
  with_file(cone, false);
  cone->add_option("--cone", o.cone, "auto, pure, symmetric or general")->capture_default_str();
  cone->add_option("--coeffs", o.coeffs, "character coefficients instead of an instance");
  cone->add_option("--n", o.n, "dimension for --coeffs");

  auto* rings = app.add_subcommand("rings", "Hamming ring averages around a center");
  common(rings);
  with_file(rings, true);
  rings->add_option("--center", o.center, "e, opt or a permutation")->capture_default_str();
  rings->add_option("--ring-mode", o.ring_mode, "exact or projected")->capture_default_str();

  auto* tail = app.add_subcommand("tail", "probability that f0 reaches a threshold");
  common(tail);
  with_file(tail, true);
  tail->add_option("--threshold", o.threshold, "threshold on f0")->required();
  tail->add_option("--samples", o.samples, "Monte Carlo sample size");

  auto* sample = app.add_subcommand("sample", "best of N random permutations");
  common(sample);
  with_file(sample, true);
  sample->add_option("--draws", o.draws, "number of draws")->required();
  sample->add_option("--target", o.target, "count draws with f0 >= target");
  sample->add_option("--histogram", o.bins, "emit a histogram of f0 with this many bins");

  auto* verify = app.add_subcommand("verify", "check a theorem bound by enumeration");
  common(verify);
  with_file(verify, false);
  verify->add_option("--theorem", o.theorem, "2.1, 2.3, 3.1 or 5.1")
      ->required()
      ->check(CLI::IsMember({"2.1", "2.3", "3.1", "5.1"}));
  verify->add_option("--kind", o.kind, "generate an instance of this kind (see gen)");
  verify->add_option("--n", o.n, "dimension for --kind");
  verify->add_option("--range", o.range, "entry range for --kind")->capture_default_str();
  verify->add_option("--den", o.den, "largest denominator for --kind")->capture_default_str();
  verify->add_option("--k", o.k, "ring index k")->capture_default_str();
  verify->add_option("--gamma", o.gamma, "gamma in (0,1)")->capture_default_str();
  verify->add_option("--ring-mode", o.ring_mode, "exact or projected (2.1)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (o.mode == "float") return detail::dispatch<double>(cmd, o, out, err);
    return detail::dispatch<Rational>(cmd, o, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
  }
  return kExitInvalid;
}

}  // namespace qapdist::cli
