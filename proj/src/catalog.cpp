#include "lsub/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "lsub/errors.hpp"

namespace lsub {

namespace {

struct KindInfo {
  FamilyKind kind;
  const char* name;
  std::map<std::string, double> defaults;
};

const std::vector<KindInfo>& kind_table() {
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  static const std::vector<KindInfo> table = {
      {FamilyKind::plane, "plane", {{"n", 2}, {"p", 1}, {"h", 1.0}}},
      {FamilyKind::centered_sphere, "centered_sphere", {{"n", 2}, {"p", 1}, {"r", 2.0}}},
      {FamilyKind::offset_sphere, "offset_sphere", {{"n", 2}, {"p", 2}, {"r", 2.0}, {"h", 1.0}}},
      {FamilyKind::cylinder, "cylinder", {{"n", 2}, {"p", 1}, {"k", 1}, {"r", golden}}},
      {FamilyKind::product, "product", {{"n", 2}, {"k", 1}, {"r", golden}, {"h", 1.0}}},
      {FamilyKind::cmc_in_sphere, "cmc_in_sphere", {{"lambda", 1.0}}},
      {FamilyKind::tilted_offset_sphere,
       "tilted_offset_sphere",
       {{"n", 2}, {"p", 2}, {"r", 2.0}, {"h", 1.0}, {"tilt", std::numbers::pi / 6.0}}},
      {FamilyKind::off_axis_cylinder,
       "off_axis_cylinder",
       {{"n", 2}, {"p", 1}, {"k", 1}, {"r", 1.0}, {"offset", 1.0}}},
      {FamilyKind::remark_sphere_G6, "remark_sphere_G6", {{"n", 4}, {"p", 2}, {"r", 2.0}, {"h", 3.0}}},
  };
  return table;
}

const KindInfo& info(FamilyKind kind) {
  for (const auto& k : kind_table())
    if (k.kind == kind) return k;
  throw InvalidFamilyParams("unknown family kind");
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidFamilyParams(msg);
}

ParamSpec line_param(const std::string& name) {
  ParamSpec s;
  s.name = name;
  s.kind = ParamKind::line;
  s.lo = -kLineWindow;
  s.hi = kLineWindow;
  return s;
}

ParamSpec polar_param(const std::string& name) {
  ParamSpec s;
  s.name = name;
  s.kind = ParamKind::bounded;
  s.lo = 0.0;
  s.hi = std::numbers::pi;
  s.margin = kPoleMargin;
  return s;
}

ParamSpec angle_param(const std::string& name) {
  ParamSpec s;
  s.name = name;
  s.kind = ParamKind::periodic;
  s.lo = 0.0;
  s.hi = 2.0 * std::numbers::pi;
  return s;
}

// k parameters: k-1 polar angles then one periodic angle.
void push_sphere_params(std::vector<ParamSpec>& ps, int k, const std::string& prefix) {
  for (int i = 0; i + 1 < k; ++i) ps.push_back(polar_param(prefix + "phi" + std::to_string(i + 1)));
  ps.push_back(angle_param(prefix + "theta"));
}

// Writes the k+1 coordinates of S^k(r) from the k angles u[first..first+k).
template <class T, class U>
void sphere_coords(const U& u, int first, int k, double r, T* out) {
  using std::cos;
  using std::sin;
  T prod(r);
  for (int i = 0; i + 1 < k; ++i) {
    out[i] = prod * cos(u[first + i]);
    prod = prod * sin(u[first + i]);
  }
  out[k - 1] = prod * cos(u[first + k - 1]);
  out[k] = prod * sin(u[first + k - 1]);
}

std::set<std::string> allowed_keys(FamilyKind kind) {
  std::set<std::string> keys;
  for (const auto& [k, v] : info(kind).defaults) keys.insert(k);
  if (kind == FamilyKind::cmc_in_sphere) keys.insert("r");
  if (kind == FamilyKind::product) keys.insert("p");
  return keys;
}

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

CatalogSurface build(const FamilySpec& spec) {
  CatalogSurface s;
  s.spec = spec;
  const auto kind = spec.kind;
  std::vector<ParamSpec> ps;

  switch (kind) {
    case FamilyKind::plane: {
      const int n = spec.get_int("n"), p = spec.get_int("p");
      const double h = spec.get("h");
      const int N = n + p;
      for (int i = 0; i < n; ++i) ps.push_back(line_param("u" + std::to_string(i + 1)));
      s.chart = ImmersionChart(N, ps, make_chart_function([n, N, h](auto u, auto x) {
                                 using T = std::decay_t<decltype(x[0])>;
                                 for (int a = 0; a < N; ++a) x[a] = T(0.0);
                                 for (int i = 0; i < n; ++i) x[i] = u[i];
                                 x[N - 1] = x[N - 1] + T(h);
                               }));
      s.expected.lambda = std::abs(h);
      s.expected.growth_exponent = n;
      s.expected.graph = true;
      break;
    }
    case FamilyKind::centered_sphere:
    case FamilyKind::offset_sphere:
    case FamilyKind::remark_sphere_G6:
    case FamilyKind::tilted_offset_sphere: {
      const int n = spec.get_int("n"), p = spec.get_int("p");
      const double r = spec.get("r");
      const double h = kind == FamilyKind::centered_sphere ? 0.0 : spec.get("h");
      const double tilt = kind == FamilyKind::tilted_offset_sphere ? spec.get("tilt") : 0.0;
      const int N = n + p;
      push_sphere_params(ps, n, "");
      const double ct = std::cos(tilt), st = std::sin(tilt);
      s.chart = ImmersionChart(N, ps, make_chart_function([n, N, r, h, ct, st](auto u, auto x) {
                                 using T = std::decay_t<decltype(x[0])>;
                                 for (int a = 0; a < N; ++a) x[a] = T(0.0);
                                 sphere_coords(u, 0, n, r, x.data());
                                 if (N > n + 1) {
                                   // Rotate in the (e_1, e_N) plane, then offset along e_N.
                                   const T x1 = x[0];
                                   x[0] = x1 * ct;
                                   x[N - 1] = x1 * st + T(h);
                                 }
                               }));
      s.expected.A2 = n / (r * r);
      s.expected.H_norm = n / r;
      s.expected.compact = true;
      s.expected.radius = r;
      if (kind != FamilyKind::tilted_offset_sphere || tilt == 0.0) {
        const double a = r - n / r;
        s.expected.lambda = std::sqrt(a * a + h * h);
      }
      break;
    }
    case FamilyKind::cylinder:
    case FamilyKind::off_axis_cylinder: {
      const int n = spec.get_int("n"), p = spec.get_int("p"), k = spec.get_int("k");
      const double r = spec.get("r");
      const double off = kind == FamilyKind::off_axis_cylinder ? spec.get("offset") : 0.0;
      const int N = n + p;
      push_sphere_params(ps, k, "");
      for (int i = 0; i < n - k; ++i) ps.push_back(line_param("v" + std::to_string(i + 1)));
      s.chart = ImmersionChart(N, ps, make_chart_function([n, N, k, r, off](auto u, auto x) {
                                 using T = std::decay_t<decltype(x[0])>;
                                 for (int a = 0; a < N; ++a) x[a] = T(0.0);
                                 sphere_coords(u, 0, k, r, x.data());
                                 x[0] = x[0] + T(off);
                                 for (int i = 0; i < n - k; ++i) x[k + 1 + i] = u[k + i];
                               }));
      s.expected.A2 = k / (r * r);
      s.expected.H_norm = k / r;
      s.expected.growth_exponent = n - k;
      s.expected.radius = r;
      if (off == 0.0) s.expected.lambda = std::abs(r - k / r);
      break;
    }
    case FamilyKind::product: {
      const int n = spec.get_int("n"), k = spec.get_int("k");
      const double r = spec.get("r"), h = spec.get("h");
      const int N = n + 2;
      push_sphere_params(ps, k, "");
      for (int i = 0; i < n - k; ++i) ps.push_back(line_param("v" + std::to_string(i + 1)));
      s.chart = ImmersionChart(N, ps, make_chart_function([n, N, k, r, h](auto u, auto x) {
                                 using T = std::decay_t<decltype(x[0])>;
                                 for (int a = 0; a < N; ++a) x[a] = T(0.0);
                                 sphere_coords(u, 0, k, r, x.data());
                                 for (int i = 0; i < n - k; ++i) x[k + 1 + i] = u[k + i];
                                 x[N - 1] = T(h);
                               }));
      s.expected.A2 = k / (r * r);
      s.expected.H_norm = k / r;
      s.expected.growth_exponent = n - k;
      s.expected.radius = r;
      s.expected.lambda = expected_lambda(spec);
      break;
    }
    case FamilyKind::cmc_in_sphere: {
      const double r = spec.get("r");
      const double rho = r / std::sqrt(2.0);
      ps.push_back(angle_param("a"));
      ps.push_back(angle_param("b"));
      s.chart = ImmersionChart(4, ps, make_chart_function([rho](auto u, auto x) {
                                 using std::cos;
                                 using std::sin;
                                 using T = std::decay_t<decltype(x[0])>;
                                 x[0] = T(rho) * cos(u[0]);
                                 x[1] = T(rho) * sin(u[0]);
                                 x[2] = T(rho) * cos(u[1]);
                                 x[3] = T(rho) * sin(u[1]);
                               }));
      s.expected.A2 = 4.0 / (r * r);
      s.expected.H_norm = 2.0 / r;
      s.expected.compact = true;
      s.expected.radius = r;
      s.expected.lambda = std::abs(r - 2.0 / r);
      break;
    }
  }
  return s;
}

}  // namespace

std::string to_string(FamilyKind kind) { return info(kind).name; }

FamilyKind family_kind_from_string(const std::string& name) {
  for (const auto& k : kind_table())
    if (name == k.name) return k.kind;
  throw InvalidFamilyParams("unknown family '" + name + "'");
}

std::vector<FamilyKind> all_family_kinds() {
  std::vector<FamilyKind> out;
  for (const auto& k : kind_table()) out.push_back(k.kind);
  return out;
}

bool is_non_example(FamilyKind kind) {
  return kind == FamilyKind::tilted_offset_sphere || kind == FamilyKind::off_axis_cylinder;
}

double FamilySpec::get(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw InvalidFamilyParams("missing parameter '" + key + "'");
  return it->second;
}

int FamilySpec::get_int(const std::string& key) const {
  const double v = get(key);
  if (!is_integer(v)) throw InvalidFamilyParams("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::string FamilySpec::label() const {
  std::ostringstream os;
  os << to_string(kind) << "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    os << (first ? "" : ",") << k << "=" << v;
    first = false;
  }
  os << ")";
  return os.str();
}

void to_json(nlohmann::json& j, const FamilySpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)}, {"params", spec.params}};
}

void from_json(const nlohmann::json& j, FamilySpec& spec) {
  spec.kind = family_kind_from_string(j.at("kind").get<std::string>());
  spec.params.clear();
  if (j.contains("params")) {
    for (const auto& [k, v] : j.at("params").items()) spec.params[k] = v.get<double>();
  }
}

double sphere_radius_for_lambda(double lambda, int n, int sign) {
  return (sign * lambda + std::sqrt(lambda * lambda + 4.0 * n)) / 2.0;
}

FamilySpec with_defaults(FamilySpec spec) {
  const auto keys = allowed_keys(spec.kind);
  for (const auto& [k, v] : spec.params) {
    require(keys.count(k) > 0, "parameter '" + k + "' does not apply to " + to_string(spec.kind));
    require(std::isfinite(v), "parameter '" + k + "' is not finite");
  }
  if (spec.kind == FamilyKind::cmc_in_sphere) {
    if (!spec.params.count("r")) {
      const double lam = spec.params.count("lambda") ? spec.params.at("lambda") : 1.0;
      require(lam >= 0.0, "lambda must be non-negative");
      spec.params["r"] = (-lam + std::sqrt(lam * lam + 8.0)) / 2.0;
    }
    spec.params.erase("lambda");
  }
  for (const auto& [k, v] : info(spec.kind).defaults) {
    if (spec.kind == FamilyKind::cmc_in_sphere && k == "lambda") continue;
    spec.params.emplace(k, v);
  }

  for (const char* key : {"n", "p", "k"}) {
    if (spec.params.count(key)) {
      require(is_integer(spec.params[key]), std::string("parameter '") + key + "' must be an integer");
    }
  }
  if (spec.params.count("r")) require(spec.params["r"] > 0.0, "radius must be positive");
  if (spec.params.count("n")) {
    const int n = static_cast<int>(spec.params["n"]);
    require(n >= 1 && n <= kMaxChartDim, "n must be in [1, " + std::to_string(kMaxChartDim) + "]");
  }
  if (spec.params.count("p")) require(spec.params["p"] >= 1, "p must be at least 1");

  switch (spec.kind) {
    case FamilyKind::offset_sphere:
    case FamilyKind::tilted_offset_sphere:
    case FamilyKind::remark_sphere_G6:
      require(spec.params["p"] >= 2, "an offset sphere needs codimension p >= 2");
      break;
    case FamilyKind::cylinder:
    case FamilyKind::off_axis_cylinder: {
      const double k = spec.params["k"], n = spec.params["n"];
      require(k >= 1 && k <= n - 1, "cylinders need 1 <= k <= n-1");
      break;
    }
    case FamilyKind::product: {
      const double k = spec.params["k"], n = spec.params["n"];
      require(k >= 1 && k <= n - 1, "products need 1 <= k <= n-1");
      if (spec.params.count("p")) require(spec.params["p"] == 2, "products have codimension 2");
      spec.params["p"] = 2;
      break;
    }
    default:
      break;
  }
  return spec;
}

double expected_lambda(const FamilySpec& raw) {
  const FamilySpec spec = with_defaults(raw);
  switch (spec.kind) {
    case FamilyKind::plane:
      return std::abs(spec.get("h"));
    case FamilyKind::centered_sphere: {
      const double r = spec.get("r");
      return std::abs(r - spec.get_int("n") / r);
    }
    case FamilyKind::offset_sphere:
    case FamilyKind::remark_sphere_G6: {
      const double r = spec.get("r"), h = spec.get("h");
      const double a = r - spec.get_int("n") / r;
      return std::sqrt(a * a + h * h);
    }
    case FamilyKind::cylinder: {
      const double r = spec.get("r");
      return std::abs(r - spec.get_int("k") / r);
    }
    case FamilyKind::product: {
      // H_f of the two factors live in orthogonal subspaces.
      const double r = spec.get("r");
      const double l1 = std::abs(r - spec.get_int("k") / r), l2 = std::abs(spec.get("h"));
      return std::sqrt(l1 * l1 + l2 * l2);
    }
    case FamilyKind::cmc_in_sphere: {
      const double r = spec.get("r");
      return std::abs(r - 2.0 / r);
    }
    case FamilyKind::tilted_offset_sphere:
    case FamilyKind::off_axis_cylinder:
      throw InvalidFamilyParams(to_string(spec.kind) + " has no constant lambda");
  }
  throw InvalidFamilyParams("unknown family kind");
}

CatalogSurface instantiate(const FamilySpec& spec) { return build(with_defaults(spec)); }

CatalogSurface non_example(const FamilySpec& spec) {
  require(is_non_example(spec.kind), to_string(spec.kind) + " is not a non-example kind");
  return build(with_defaults(spec));
}

std::vector<FamilySpec> standard_families() {
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  using P = std::map<std::string, double>;
  return {
      {FamilyKind::plane, P{{"n", 2}, {"p", 1}, {"h", 1.0}}},
      {FamilyKind::plane, P{{"n", 2}, {"p", 1}, {"h", 0.0}}},
      {FamilyKind::plane, P{{"n", 2}, {"p", 2}, {"h", 0.0}}},
      {FamilyKind::centered_sphere, P{{"n", 1}, {"p", 1}, {"r", 1.0}}},
      {FamilyKind::centered_sphere, P{{"n", 2}, {"p", 1}, {"r", 2.0}}},
      {FamilyKind::centered_sphere, P{{"n", 2}, {"p", 1}, {"r", 1.0}}},
      {FamilyKind::centered_sphere, P{{"n", 2}, {"p", 1}, {"r", std::sqrt(2.0)}}},
      {FamilyKind::offset_sphere, P{{"n", 2}, {"p", 2}, {"r", 2.0}, {"h", 1.0}}},
      {FamilyKind::remark_sphere_G6, P{}},
      {FamilyKind::cylinder, P{{"n", 2}, {"p", 1}, {"k", 1}, {"r", golden}}},
      {FamilyKind::cylinder, P{{"n", 2}, {"p", 1}, {"k", 1}, {"r", 1.0}}},
      {FamilyKind::cylinder, P{{"n", 2}, {"p", 1}, {"k", 1}, {"r", golden - 1.0}}},
      {FamilyKind::product, P{}},
      {FamilyKind::cmc_in_sphere, P{{"lambda", 1.0}}},
  };
}

std::vector<FamilySpec> standard_non_examples() {
  return {{FamilyKind::tilted_offset_sphere, {}}, {FamilyKind::off_axis_cylinder, {}}};
}

}  // namespace lsub
