#include "dmp/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "dmp/errors.hpp"

namespace dmp::io {

using json = nlohmann::json;

namespace {

json parse_json(std::string_view text)
{
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError("$", std::string("malformed JSON: ") + e.what());
  }
}

std::string at(const std::string& path, const std::string& key)
{
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t index)
{
  return path + "[" + std::to_string(index) + "]";
}

const json& need(const json& obj, const std::string& path, const std::string& key)
{
  if (!obj.is_object())
    throw ValidationError(path.empty() ? "$" : path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw ValidationError(at(path, key), "missing");
  return *it;
}

double number(const json& j, const std::string& path)
{
  if (!j.is_number())
    throw ValidationError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw ValidationError(path, "must be finite");
  return v;
}

double positive(double v, const std::string& path)
{
  if (!(v > 0.0))
    throw ValidationError(path, "must be positive");
  return v;
}

double positive(const json& j, const std::string& path) { return positive(number(j, path), path); }

int integer(const json& j, const std::string& path)
{
  if (!j.is_number_integer())
    throw ValidationError(path, "expected an integer");
  return j.get<int>();
}

Vec vec(const json& j, const std::string& path, Eigen::Index size = -1)
{
  if (!j.is_array())
    throw ValidationError(path, "expected an array");
  if (size >= 0 && static_cast<Eigen::Index>(j.size()) != size)
    throw ValidationError(path, "expected " + std::to_string(size) + " entries, got " +
                                  std::to_string(j.size()));
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = number(j[i], at(path, i));
  return v;
}

// Array of equal-length rows; n < 0 takes the length of the first row.
std::vector<Vec> rows(const json& j, const std::string& path, Eigen::Index n = -1)
{
  if (!j.is_array() || j.empty())
    throw ValidationError(path, "expected a nonempty array of vectors");
  std::vector<Vec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(vec(j[i], at(path, i), n));
    if (n < 0)
      n = out.back().size();
    if (n == 0)
      throw ValidationError(at(path, i), "empty vector");
  }
  return out;
}

UnitVector unit_row(const Vec& v, const std::string& path)
{
  if (std::abs(v.norm() - 1.0) > 1e-9)
    throw ValidationError(path, "not a unit vector");
  return UnitVector::normalized(v);
}

Mat axes_matrix(const json& obj, const std::string& path, int n)
{
  auto it = obj.find("axes");
  if (it == obj.end())
    return Mat::Identity(n, n);
  const std::vector<Vec> r = rows(*it, at(path, "axes"), n);
  if (static_cast<int>(r.size()) != n)
    throw ValidationError(at(path, "axes"), "expected " + std::to_string(n) + " axes");
  Mat m(n, n);
  for (int c = 0; c < n; ++c)
    m.col(c) = r[static_cast<std::size_t>(c)];
  if (!(m.transpose() * m).isIdentity(1e-12))
    throw ValidationError(at(path, "axes"), "axes must be orthonormal");
  return m;
}

json vec_json(const Vec& v)
{
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    a.push_back(v[i]);
  return a;
}

json columns_json(const Mat& m)
{
  json a = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    a.push_back(vec_json(m.col(c)));
  return a;
}

json body_json(const Body& body)
{
  return std::visit(
    [](const auto& b) -> json {
      using T = std::decay_t<decltype(b)>;
      json j;
      if constexpr (std::is_same_v<T, SymmetricPolytope>) {
        j["type"] = "polytope";
        j["normals"] = json::array();
        for (const UnitVector& v : b.normals())
          j["normals"].push_back(vec_json(v.coords()));
        j["support"] = vec_json(b.support_numbers());
      } else if constexpr (std::is_same_v<T, Ellipsoid>) {
        j["type"] = "ellipsoid";
        j["axes"] = columns_json(b.axes());
        j["semiaxes"] = vec_json(b.semiaxes());
      } else if constexpr (std::is_same_v<T, BarrierBody>) {
        j["type"] = "barrier";
        j["k"] = b.k();
        j["params"] = vec_json(b.params());
        j["axes"] = columns_json(b.axes());
      } else {
        j["type"] = "cylinder";
        j["k"] = b.k();
        j["semiaxes"] = vec_json(b.semiaxes());
        j["axes"] = columns_json(b.axes());
      }
      return j;
    },
    body);
}

json measure_json(const DiscreteEvenMeasure& mu)
{
  json j;
  j["n"] = mu.dim();
  j["pairs"] = json::array();
  for (int i = 0; i < mu.size(); ++i)
    j["pairs"].push_back(
      {{"dir", vec_json(mu.directions().row(i).transpose())}, {"weight", mu.weights()[i]}});
  return j;
}

// Wraps library errors raised while building a body from valid-looking data.
template <class F>
auto as_validation(const std::string& path, F&& f) -> decltype(f())
{
  try {
    return f();
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(path, e.what());
  }
}

} // namespace

Body parse_body(std::string_view text)
{
  const json j = parse_json(text);
  const json& type = need(j, "", "type");
  if (!type.is_string())
    throw ValidationError("type", "expected a string");
  const std::string t = type.get<std::string>();

  if (t == "polytope") {
    const std::vector<Vec> r = rows(need(j, "", "normals"), "normals");
    std::vector<UnitVector> normals;
    for (std::size_t i = 0; i < r.size(); ++i)
      normals.push_back(unit_row(r[i], at("normals", i)));
    const Vec h = vec(need(j, "", "support"), "support", static_cast<Eigen::Index>(r.size()));
    for (Eigen::Index i = 0; i < h.size(); ++i)
      positive(h[i], at("support", static_cast<std::size_t>(i)));
    return as_validation("normals", [&] { return Body{SymmetricPolytope(normals, h)}; });
  }
  if (t == "ellipsoid") {
    const Vec a = vec(need(j, "", "semiaxes"), "semiaxes");
    if (a.size() == 0)
      throw ValidationError("semiaxes", "expected at least one semiaxis");
    for (Eigen::Index i = 0; i < a.size(); ++i)
      positive(a[i], at("semiaxes", static_cast<std::size_t>(i)));
    const int n = static_cast<int>(a.size());
    const Mat axes = axes_matrix(j, "", n);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a[x] < a[y]; });
    Mat sorted_axes(n, n);
    Vec sorted(n);
    for (int c = 0; c < n; ++c) {
      sorted_axes.col(c) = axes.col(order[static_cast<std::size_t>(c)]);
      sorted[c] = a[order[static_cast<std::size_t>(c)]];
    }
    return as_validation("semiaxes", [&] { return Body{Ellipsoid(sorted_axes, sorted)}; });
  }
  if (t == "barrier" || t == "cylinder") {
    const int k = integer(need(j, "", "k"), "k");
    const std::string key = t == "barrier" ? "params" : "semiaxes";
    const Vec p = vec(need(j, "", key), key);
    for (Eigen::Index i = 0; i < p.size(); ++i)
      positive(p[i], at(key, static_cast<std::size_t>(i)));
    int n = 0;
    if (auto it = j.find("axes"); it != j.end())
      n = static_cast<int>(it->size());
    else if (auto nt = j.find("n"); nt != j.end())
      n = integer(*nt, "n");
    else
      throw ValidationError("axes", "missing (or give \"n\" for the standard frame)");
    if (n < 1)
      throw ValidationError("n", "must be positive");
    const Mat axes = axes_matrix(j, "", n);
    if (t == "barrier")
      return as_validation("params", [&] { return Body{BarrierBody(axes, k, p)}; });
    return as_validation("semiaxes", [&] { return Body{Cylinder(axes, k, p)}; });
  }
  throw ValidationError("type", "unknown body type '" + t + "'");
}

std::string body_to_json(const Body& body) { return body_json(body).dump(2) + "\n"; }

DiscreteEvenMeasure parse_measure(std::string_view text)
{
  const json j = parse_json(text);
  const int n = integer(need(j, "", "n"), "n");
  if (n < 1)
    throw ValidationError("n", "must be positive");
  const json& pairs = need(j, "", "pairs");
  if (!pairs.is_array() || pairs.empty())
    throw ValidationError("pairs", "expected a nonempty array");
  std::vector<AtomPair> atoms;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string p = at("pairs", i);
    const Vec d = vec(need(pairs[i], p, "dir"), at(p, "dir"), n);
    if (!(d.norm() > 0.0))
      throw ValidationError(at(p, "dir"), "zero direction");
    const double w = positive(need(pairs[i], p, "weight"), at(p, "weight"));
    atoms.push_back({UnitVector::normalized(d), w});
  }
  return DiscreteEvenMeasure(atoms);
}

std::string measure_to_json(const DiscreteEvenMeasure& mu) { return measure_json(mu).dump(2) + "\n"; }

std::string curvature_to_json(const CurvatureMeasure& c)
{
  json j = measure_json(to_measure(c));
  j["q"] = c.q;
  j["total"] = c.total;
  j["method"] = to_string(c.method);
  return j.dump(2) + "\n";
}

std::vector<UnitVector> parse_normals(std::string_view text)
{
  const json j = parse_json(text);
  const std::vector<Vec> r = rows(need(j, "", "normals"), "normals");
  std::vector<UnitVector> out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i].norm() > 0.0))
      throw ValidationError(at("normals", i), "zero vector");
    out.push_back(UnitVector::normalized(r[i]));
  }
  return out;
}

std::string solve_result_to_json(const SolveResult& r)
{
  json j;
  j["body"] = body_json(Body{r.body});
  j["c"] = r.c;
  j["residual"] = r.residual;
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["gradient_norm"] = r.gradient_norm;
  j["method"] = to_string(r.method);
  j["phi_final"] = r.phi_trace.empty() ? 0.0 : r.phi_trace.back();
  if (r.smi)
    j["smi_margin"] = r.smi->margin;
  else
    j["smi_margin"] = nullptr;
  return j.dump(2) + "\n";
}

std::string phi_trace_csv(const SolveResult& r)
{
  std::ostringstream out;
  out << "iteration,phi\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.phi_trace.size(); ++i)
    out << i << "," << r.phi_trace[i] << "\n";
  return out.str();
}

GridSpec parse_grid_spec(std::string_view text)
{
  GridSpec g;
  g.text = std::string(text);
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  auto to_int = [&](const std::string& s) -> long long {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size())
      throw ValidationError("grid", "'" + s + "' is not an integer");
    return v;
  };
  const std::string& scheme = parts[0];
  if (scheme == "product")
    g.scheme = GridScheme::product_angle;
  else if (scheme == "mc")
    g.scheme = GridScheme::monte_carlo;
  else if (scheme != "default")
    throw ValidationError("grid", "unknown scheme '" + scheme + "' (product, mc, default)");
  if (parts.size() < 2 || parts.size() > 3 || (parts.size() == 3 && scheme != "mc"))
    throw ValidationError("grid", "expected product:RES, mc:COUNT[:SEED] or default:RES");
  const long long res = to_int(parts[1]);
  if (res < 8 || res > 100'000'000)
    throw ValidationError("grid", "resolution must lie in [8, 1e8]");
  g.resolution = static_cast<int>(res);
  if (parts.size() == 3) {
    const long long s = to_int(parts[2]);
    if (s < 0)
      throw ValidationError("grid", "seed must be nonnegative");
    g.seed = static_cast<std::uint64_t>(s);
  } else if (g.scheme == GridScheme::monte_carlo) {
    g.seed = 0;
  }
  return g;
}

SphericalGrid make_grid(const GridSpec& spec, int n)
{
  if (!spec.scheme)
    return build_default_grid(n, spec.resolution);
  return dmp::build_grid(n, spec.resolution, *spec.scheme, spec.seed);
}

std::uint64_t fnv1a(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t value)
{
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << value;
  return out.str();
}

std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ValidationError(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ValidationError(path.string(), "cannot write file");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out)
    throw ValidationError(path.string(), "write failed");
}

std::string file_hash(const std::filesystem::path& path) { return hex(fnv1a(read_file(path))); }

namespace {

json manifest_core(const RunManifest& m)
{
  json j;
  j["command"] = m.command;
  j["tool_version"] = m.tool_version;
  j["parameters"] = m.parameters;
  j["input_hashes"] = m.input_hashes;
  j["seeds"] = m.seeds;
  j["threads"] = m.threads;
  return j;
}

} // namespace

std::string manifest_hash(const RunManifest& m) { return hex(fnv1a(manifest_core(m).dump())); }

std::string manifest_to_json(const RunManifest& m)
{
  json j = manifest_core(m);
  j["manifest_hash"] = manifest_hash(m);
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  j["timestamp"] = m.timestamp;
  return j.dump(2) + "\n";
}

} // namespace dmp::io
