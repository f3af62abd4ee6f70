// curvhom: command-line front end.
//
// Defaults (flags override):
//   seed                 1729, or CURVHOM_SEED when set
//   --point              origin (all 2p coordinates 0)
//   alpha-scan --tol     1e-6 relative spread threshold
//   spectral --kind      jacobi-spacelike
//   spectral --n         50 samples
//   spectral --tol       1e-7 eigenvalue tolerance
//   verify               p = 3, theta = 0.5*sin(x1), 10 points
//   verify --tol         replaces every per-check tolerance
//   dimension cap        p <= 8
//
// Exit codes: 0 success, 1 usage or parse error, 2 hypothesis or domain
// violation (including failed verify checks).

#include "curvhom/errors.hpp"
#include "curvhom/field.hpp"
#include "curvhom/frames.hpp"
#include "curvhom/invariant.hpp"
#include "curvhom/io.hpp"
#include "curvhom/model.hpp"
#include "curvhom/spectral.hpp"
#include "curvhom/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace curvhom;

constexpr std::uint64_t kDefaultSeed = 1729;
constexpr int kDefaultSamples = 50;
constexpr int kVerifyP = 3;
constexpr const char* kVerifyTheta = "0.5*sin(x1)";

struct Options {
  std::optional<int> p;
  std::optional<std::string> field;
  std::optional<std::string> theta;
  std::optional<std::string> point;
  std::vector<std::string> grid;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string format = "json";
  std::string kind = "jacobi-spacelike";
  std::optional<std::string> rs;
  int n = kDefaultSamples;
  int points = 10;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::invalid_argument("cannot parse " + what + " '" + text + "' as a number");
  }
  return v;
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("CURVHOM_SEED")) {
    std::uint64_t v = 0;
    const std::string s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw std::invalid_argument("CURVHOM_SEED must be a non-negative integer, got '" + s + "'");
    }
    return v;
  }
  return kDefaultSeed;
}

int require_p(const Options& o) {
  if (!o.p) throw std::invalid_argument("--p is required");
  return *o.p;
}

struct ResolvedField {
  FieldSpec field;
  std::optional<FieldSpec> theta;
};

ResolvedField resolve_field(const Options& o, int p) {
  if (o.field.has_value() == o.theta.has_value()) {
    throw std::invalid_argument("exactly one of --field and --theta is required");
  }
  if (o.field) return {parse_field(*o.field, p), std::nullopt};
  FieldSpec theta = parse_field(*o.theta, p);
  return {canonical_f(theta, p), theta};
}

Point resolve_point(const Options& o, int p) {
  if (!o.point) return Point::at_x(Eigen::VectorXd::Zero(p));
  const auto parts = split(*o.point, ',');
  if (static_cast<int>(parts.size()) != 2 * p) {
    throw std::invalid_argument("--point needs 2p = " + std::to_string(2 * p) +
                                " comma-separated values (x-part then y-part), got " +
                                std::to_string(parts.size()));
  }
  std::vector<double> coords;
  for (const auto& s : parts) coords.push_back(parse_double(s, "point coordinate"));
  return Point::from_coordinates(coords);
}

Grid resolve_grid(const Options& o, int p) {
  Grid grid;
  std::vector<std::string> axes;
  for (const auto& g : o.grid)
    for (const auto& a : split(g, ',')) axes.push_back(a);
  if (axes.empty()) throw std::invalid_argument("--grid is required (start:stop:count per axis)");
  if (static_cast<int>(axes.size()) > p) {
    throw std::invalid_argument("--grid has more axes than p");
  }
  for (const auto& a : axes) {
    const auto f = split(a, ':');
    if (f.size() != 3) throw std::invalid_argument("grid axis '" + a + "' is not start:stop:count");
    GridAxis axis;
    axis.start = parse_double(f[0], "grid start");
    axis.stop = parse_double(f[1], "grid stop");
    const double count = parse_double(f[2], "grid count");
    if (count < 1 || count != static_cast<int>(count)) {
      throw std::invalid_argument("grid count must be an integer >= 1, got '" + f[2] + "'");
    }
    axis.count = static_cast<int>(count);
    grid.axes.push_back(axis);
  }
  return grid;
}

void require_json(const Options& o, const std::string& command) {
  if (o.format != "json") throw std::invalid_argument(command + " only supports --format json");
}

void emit(const Options& o, const std::string& text) {
  if (!o.out) {
    std::cout << text;
    return;
  }
  std::ofstream file(*o.out, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file '" + *o.out + "'");
  file << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int cmd_tensors(const Options& o) {
  require_json(o, "tensors");
  const int p = require_p(o);
  const ResolvedField f = resolve_field(o, p);
  emit(o, dump(tensor_dump(f.field, resolve_point(o, p))));
  return 0;
}

int cmd_model(const Options& o) {
  require_json(o, "model");
  emit(o, dump(model_dump(model_space(require_p(o)))));
  return 0;
}

int cmd_alpha_scan(const Options& o) {
  const int p = require_p(o);
  const ResolvedField f = resolve_field(o, p);
  const Grid grid = resolve_grid(o, p);
  const AlphaScan scan = scan_alpha(f.field, grid, o.tol.value_or(kConstancyThreshold));
  const nlohmann::json summary = alpha_summary(scan);
  if (o.format == "csv") {
    emit(o, alpha_csv(scan, p));
    if (o.out) {
      std::ofstream(*o.out + ".summary.json", std::ios::binary) << dump(summary);
    } else {
      std::cerr << dump(summary);
    }
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : scan.samples) rows.push_back({{"x", to_json(s.x)}, {"alpha", s.alpha}});
    nlohmann::json j = summary;
    j["p"] = p;
    j["field"] = f.field.to_string();
    j["rows"] = rows;
    emit(o, dump(j));
  }
  std::cerr << "verdict: " << to_string(scan.verdict) << "\n";
  return 0;
}

int cmd_verify(const Options& o) {
  require_json(o, "verify");
  const int p = o.p.value_or(kVerifyP);
  Options local = o;
  if (!local.field && !local.theta) local.theta = kVerifyTheta;
  const ResolvedField f = resolve_field(local, p);
  VerifyConfig config{f.field, f.theta, resolve_seed(o), o.tol, o.points};
  const VerifyReport report = run_verify(config);
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json j = {{"name", c.name}, {"pass", c.pass}, {"skipped", c.skipped}};
    if (!c.skipped) {
      j["residual"] = c.residual;
      j["tolerance"] = c.tolerance;
    }
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(std::move(j));
  }
  emit(o, dump({{"p", p},
                {"field", f.field.to_string()},
                {"seed", config.seed},
                {"all_pass", report.all_pass()},
                {"checks", checks}}));
  return report.all_pass() ? 0 : 2;
}

int cmd_spectral(const Options& o) {
  require_json(o, "spectral");
  const int p = require_p(o);
  const ResolvedField f = resolve_field(o, p);
  std::string kind_text = o.kind;
  if (o.rs) {
    if (kind_text != "higher-jacobi") throw std::invalid_argument("--rs only applies to higher-jacobi");
    kind_text += "(" + *o.rs + ")";
  } else if (kind_text == "higher-jacobi") {
    throw std::invalid_argument("higher-jacobi needs --rs r,s");
  }
  const SpectralReport report =
      sample_constancy(parse_kind(kind_text), f.field, resolve_point(o, p), o.n, resolve_seed(o),
                       o.tol.value_or(kEigenvalueTolerance));
  emit(o, dump(spectral_json(report)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature homogeneity invariants of the metrics g_f"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub, bool with_field, bool with_point) {
    sub->add_option("--p", o.p, "dimension p of the x-coordinates")->check(CLI::Range(1, 8));
    if (with_field) {
      auto* field = sub->add_option("--field", o.field, "expression for f in x1..xp");
      auto* theta = sub->add_option("--theta", o.theta, "theta(x1); f = 1/2 |x|^2 + theta");
      field->excludes(theta);
    }
    if (with_point) {
      sub->add_option("--point", o.point, "2p comma-separated coordinates, x-part then y-part");
    }
    sub->add_option("--seed", o.seed, "random seed (default CURVHOM_SEED or 1729)");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* tensors = app.add_subcommand("tensors", "dump g, L, R and nabla R at a point");
  common(tensors, true, true);

  auto* scan = app.add_subcommand("alpha-scan", "alpha over a grid and a constancy verdict");
  common(scan, true, false);
  scan->add_option("--grid", o.grid, "start:stop:count per axis, comma separated")
      ->allow_extra_args(false);
  scan->add_option("--tol", o.tol, "relative spread threshold");

  auto* verify = app.add_subcommand("verify", "run the cross-check suite");
  common(verify, true, false);
  verify->add_option("--tol", o.tol, "replace every check tolerance");
  verify->add_option("--points", o.points, "number of random points")->check(CLI::PositiveNumber);

  auto* spectral = app.add_subcommand("spectral", "sample operator fingerprints at a point");
  common(spectral, true, true);
  spectral->add_option("--kind", o.kind, "operator kind, e.g. jacobi-spacelike");
  spectral->add_option("--rs", o.rs, "r,s for higher-jacobi");
  spectral->add_option("--n", o.n, "number of samples")->check(CLI::PositiveNumber);
  spectral->add_option("--tol", o.tol, "eigenvalue tolerance");

  auto* model = app.add_subcommand("model", "dump the model space");
  common(model, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*tensors) return cmd_tensors(o);
    if (*scan) return cmd_alpha_scan(o);
    if (*verify) return cmd_verify(o);
    if (*spectral) return cmd_spectral(o);
    if (*model) return cmd_model(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const FitError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
