#pragma once

// JSON and CSV encodings of permutations, instances and analysis results.
// Exact values are written as strings ("3/4"), float values as numbers.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qapdist/analysis.hpp"
#include "qapdist/cone.hpp"
#include "qapdist/instance.hpp"
#include "qapdist/isotypic.hpp"

namespace qapdist {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars and permutations

template <Scalar T>
Json scalar_to_json(const T& x) {
  if constexpr (is_exact_v<T>) {
    return to_string(x);
  } else {
    return x;
  }
}

template <Scalar T>
T scalar_from_json(const Json& j) {
  if (j.is_string()) return parse_scalar<T>(j.get<std::string>());
  if (j.is_number_integer()) return scalar<T>(j.get<long>());
  if (j.is_number()) {
    if constexpr (is_exact_v<T>) {
      return Rational(j.get<double>());
    } else {
      return j.get<double>();
    }
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

inline Json bigint_to_json(const BigInt& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline Json permutation_to_json(const Permutation& p) { return p.one_based(); }

inline Permutation permutation_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("permutation must be a JSON array");
  std::vector<int> images;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw std::invalid_argument("permutation entries must be integers");
    images.push_back(v.get<int>());
  }
  return Permutation::from_one_based(images);
}

/// Parses "2,1,3,4" or "[2,1,3,4]" (1-based images).
inline Permutation parse_permutation(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), '[', ' ');
  std::replace(s.begin(), s.end(), ']', ' ');
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<int> images;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      images.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed permutation: " + text);
    }
  }
  if (images.empty()) throw std::invalid_argument("empty permutation");
  return Permutation::from_one_based(images);
}

// ---------------------------------------------------------------------------
// Matrices and instances

template <Scalar T>
Json matrix_to_json(const DenseMatrix<T>& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.n(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.n(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <Scalar T>
DenseMatrix<T> matrix_from_json(const Json& j, int n, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw std::invalid_argument(std::string("matrix ") + name + " must have n rows");
  DenseMatrix<T> m(n);
  for (int i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw std::invalid_argument(std::string("matrix ") + name + " must be square");
    for (int k = 0; k < n; ++k) m(i, k) = scalar_from_json<T>(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

template <Scalar T>
Json instance_to_json(const QapInstance<T>& inst) {
  Json j;
  j["n"] = inst.n();
  j["form"] = inst.is_matrix_pair() ? "matrix_pair" : "generalized";
  j["mode"] = ScalarTraits<T>::name;
  if (inst.is_matrix_pair()) {
    j["A"] = matrix_to_json(inst.a());
    j["B"] = matrix_to_json(inst.b());
  } else {
    Json flat = Json::array();
    for (const auto& v : inst.tensor().data()) flat.push_back(scalar_to_json(v));
    j["C"] = std::move(flat);
  }
  return j;
}

template <Scalar T>
QapInstance<T> instance_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("instance must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw std::invalid_argument("instance needs an integer field \"n\"");
  const int n = j["n"].get<int>();
  if (n < 1) throw std::invalid_argument("instance dimension must be >= 1");
  std::string form = j.value("form", std::string(j.contains("C") ? "generalized" : "matrix_pair"));
  if (form == "matrix_pair") {
    if (!j.contains("A") || !j.contains("B"))
      throw std::invalid_argument("matrix_pair instance needs \"A\" and \"B\"");
    return QapInstance<T>::matrix_pair(matrix_from_json<T>(j["A"], n, "A"),
                                       matrix_from_json<T>(j["B"], n, "B"));
  }
  if (form == "generalized") {
    if (!j.contains("C") || !j["C"].is_array())
      throw std::invalid_argument("generalized instance needs a flat array \"C\"");
    Tensor4<T> c(n);
    if (j["C"].size() != c.data().size())
      throw std::invalid_argument("\"C\" must hold n^4 entries");
    for (std::size_t k = 0; k < c.data().size(); ++k) c.data()[k] = scalar_from_json<T>(j["C"][k]);
    return QapInstance<T>::generalized(std::move(c));
  }
  throw std::invalid_argument("unknown instance form: " + form);
}

template <Scalar T>
QapInstance<T> read_instance(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance JSON: ") + e.what());
  }
  return instance_from_json<T>(j);
}

template <Scalar T>
QapInstance<T> read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_instance<T>(in);
}

/// n rows of n comma-separated values; blank lines are skipped.
template <Scalar T>
DenseMatrix<T> read_matrix_csv(std::istream& in) {
  std::vector<std::vector<T>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<T> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      if (b == std::string::npos) throw std::invalid_argument("empty CSV cell");
      row.push_back(parse_scalar<T>(cell.substr(b, e - b + 1)));
    }
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw std::invalid_argument("empty CSV matrix");
  DenseMatrix<T> m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
      throw std::invalid_argument("CSV matrix must be square");
    for (int j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

template <Scalar T>
DenseMatrix<T> read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_matrix_csv<T>(in);
}

// ---------------------------------------------------------------------------
// Class functions and cones

template <Scalar T>
Json coefficients_to_json(const CharacterCoefficients<T>& c) {
  Json j;
  for (Irrep r : kIrreps) j[label(r)] = scalar_to_json(c[r]);
  return j;
}

template <Scalar T>
CharacterCoefficients<T> coefficients_from_json(const Json& j) {
  CharacterCoefficients<T> c;
  for (Irrep r : kIrreps) c[r] = j.contains(label(r)) ? scalar_from_json<T>(j[label(r)]) : T(0);
  return c;
}

template <Scalar T>
Json class_function_to_json(const ClassFunction<T>& cf) {
  Json j;
  if (cf.is_span()) {
    j["mode"] = "span";
    j["n"] = cf.n();
    j["coeffs"] = coefficients_to_json(cf.coefficients());
  } else {
    j["mode"] = "exact";
    j["n"] = cf.n();
    Json values = Json::array();
    for (const auto& ct : partitions(cf.n()))
      values.push_back({{"type", ct.parts}, {"value", scalar_to_json(cf(ct))}});
    j["values"] = std::move(values);
  }
  return j;
}

template <Scalar T>
ClassFunction<T> class_function_from_json(const Json& j) {
  const std::string mode = j.at("mode").get<std::string>();
  const int n = j.at("n").get<int>();
  if (mode == "span") return ClassFunction<T>::span(n, coefficients_from_json<T>(j.at("coeffs")));
  if (mode == "exact") {
    std::map<CycleType, T> values;
    for (const auto& e : j.at("values"))
      values[CycleType::from_parts(e.at("type").get<std::vector<int>>())] =
          scalar_from_json<T>(e.at("value"));
    return ClassFunction<T>::table(n, std::move(values));
  }
  throw std::invalid_argument("unknown class function mode: " + mode);
}

template <Scalar T>
Json cone_report_to_json(const ConeReport<T>& r) {
  Json j;
  j["kind"] = to_string(r.kind.type);
  j["n"] = r.kind.n;
  j["verdict"] = to_string(r.verdict);
  j["member"] = r.member;
  Json basis = Json::array();
  for (const auto& v : r.basis) basis.push_back(scalar_to_json(v));
  j["basis"] = std::move(basis);
  Json slacks = Json::array();
  for (const auto& s : r.slacks) slacks.push_back({{"id", s.id}, {"slack", scalar_to_json(s.value)}});
  j["slacks"] = std::move(slacks);
  Json violated = Json::array();
  for (const auto& s : r.violated) violated.push_back({{"id", s.id}, {"slack", scalar_to_json(s.value)}});
  j["violated"] = std::move(violated);
  Json weights = Json::object();
  for (const auto& [name, w] : r.ray_weights) weights[name] = scalar_to_json(w);
  j["ray_weights"] = std::move(weights);
  j["constant"] = scalar_to_json(r.constant);
  j["value_at_identity"] = scalar_to_json(r.value_at_identity);
  j["span_residual"] = scalar_to_json(r.span_residual);
  return j;
}

// ---------------------------------------------------------------------------
// Analysis results

namespace detail {

/// Shortest decimal that reads back as the same double.
template <Scalar T>
std::string csv_number(const T& x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, to_double(x));
  return std::string(buf, res.ptr);
}

}  // namespace detail

template <Scalar T>
bool ring_passes(const RingProfile<T>& prof, int k) {
  if (prof.thresholds.empty()) return true;
  const auto idx = static_cast<std::size_t>(k);
  if (prof.empty_ring(k)) return true;
  const double tol = is_exact_v<T> ? 0.0 : 1e-9 * std::max(1.0, std::abs(to_double(prof.center_value)));
  return sign_of<T>(T(prof.averages[idx] - prof.thresholds[idx]), tol) >= 0;
}

template <Scalar T>
Json ring_profile_to_json(const RingProfile<T>& prof) {
  Json j;
  j["n"] = prof.n;
  j["center"] = permutation_to_json(prof.center);
  j["mode"] = to_string(prof.mode);
  j["center_value"] = scalar_to_json(prof.center_value);
  Json rows = Json::array();
  for (int k = 0; k <= prof.n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    Json row;
    row["k"] = k;
    row["ring_size"] = bigint_to_json(prof.ring_sizes[idx]);
    row["average"] = prof.empty_ring(k) ? Json(nullptr) : scalar_to_json(prof.averages[idx]);
    row["threshold"] = prof.thresholds.empty() ? Json(nullptr) : scalar_to_json(prof.thresholds[idx]);
    row["pass"] = ring_passes(prof, k);
    rows.push_back(std::move(row));
  }
  j["rings"] = std::move(rows);
  return j;
}

/// Columns k, ring_size, average, threshold, pass; one row per k = 0..n.
template <Scalar T>
void write_ring_profile_csv(std::ostream& out, const RingProfile<T>& prof) {
  out << "k,ring_size,average,threshold,pass\n";
  for (int k = 0; k <= prof.n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    out << k << ',' << prof.ring_sizes[idx].get_str() << ',';
    if (!prof.empty_ring(k)) out << detail::csv_number(prof.averages[idx]);
    out << ',';
    if (!prof.thresholds.empty()) out << detail::csv_number(prof.thresholds[idx]);
    out << ',' << (ring_passes(prof, k) ? "true" : "false") << '\n';
  }
}

template <Scalar T>
Json tail_report_to_json(const TailReport<T>& r) {
  Json j;
  if (!r.theorem.empty()) {
    j["theorem"] = r.theorem;
    j["k"] = r.k;
    j["gamma"] = r.gamma.get_str();
    j["optimum"] = scalar_to_json(r.optimum);
  }
  j["threshold"] = scalar_to_json(r.threshold);
  j["exact"] = r.exact;
  j["hits"] = bigint_to_json(r.hits);
  j["total"] = bigint_to_json(r.total);
  if (r.exact) {
    j["probability"] = r.exact_probability().get_str();
  } else {
    j["probability"] = r.probability;
    j["ci99"] = {r.ci_low, r.ci_high};
  }
  j["probability_float"] = r.probability;
  if (r.bound) {
    j["bound"] = r.bound->get_str();
    j["pass"] = r.pass;
    j["trivial"] = r.trivial;
  }
  return j;
}

template <Scalar T>
void write_tail_report_csv(std::ostream& out, const std::vector<TailReport<T>>& rows) {
  out << "theorem,k,gamma,threshold,probability,bound,pass\n";
  for (const auto& r : rows) {
    out << r.theorem << ',' << r.k << ',' << r.gamma.get_str() << ','
        << detail::csv_number(r.threshold) << ',' << detail::csv_number(r.probability) << ','
        << (r.bound ? detail::csv_number(*r.bound) : std::string()) << ','
        << (r.pass ? "true" : "false") << '\n';
  }
}

template <Scalar T>
Json sample_result_to_json(const SampleResult<T>& s) {
  Json j;
  j["seed"] = s.seed;
  j["draws"] = s.draws;
  j["best"] = permutation_to_json(s.best);
  j["best_value"] = scalar_to_json(s.best_value);
  if (s.target) {
    j["target"] = scalar_to_json(*s.target);
    j["hits"] = s.hits;
    j["fraction"] = s.fraction;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Histograms

struct Histogram {
  double low = 0.0;
  double high = 0.0;
  std::vector<long> counts;

  double width() const { return counts.empty() ? 0.0 : (high - low) / static_cast<double>(counts.size()); }
  long total() const {
    long s = 0;
    for (long c : counts) s += c;
    return s;
  }
};

/// Equal-width bins over [min, max]; the maximum falls in the last bin.
inline Histogram make_histogram(const std::vector<double>& values, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  if (values.empty()) return h;
  h.low = *std::min_element(values.begin(), values.end());
  h.high = *std::max_element(values.begin(), values.end());
  const double w = h.width();
  for (double v : values) {
    long b = w > 0.0 ? static_cast<long>((v - h.low) / w) : 0;
    b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

inline void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin,low,high,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double lo = h.low + h.width() * static_cast<double>(b);
    const double hi = b + 1 == h.counts.size() ? h.high : lo + h.width();
    out << b << ',' << detail::csv_number(lo) << ',' << detail::csv_number(hi) << ',' << h.counts[b] << '\n';
  }
}

inline Json histogram_to_json(const Histogram& h) {
  Json j;
  j["low"] = h.low;
  j["high"] = h.high;
  j["counts"] = h.counts;
  return j;
}

}  // namespace qapdist
