// qdot: spectra, ground states and entanglement of two-electron parabolic quantum dots.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdot/qdot.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kUsageError = 2;
constexpr int kNumericalError = 3;

std::string fmt(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Rounds to 12 significant digits so JSON output is stable across platforms.
double r12(double x) { return std::isfinite(x) ? std::stod(fmt(x)) : x; }

json jvec(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(r12(x));
  return a;
}

json jmat(const qdot::Matrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(r12(m(i, j)));
    a.push_back(row);
  }
  return a;
}

json jmode(const qdot::Mode& m) { return json{{"n", m.n}, {"m", m.m}, {"nz", m.nz}}; }

/// `x` or `lo:hi:step` (inclusive of hi up to round-off).
std::vector<double> parse_grid(const std::string& s) {
  auto num = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw std::invalid_argument("bad grid value '" + t + "'");
    return v;
  };
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() == 1) return {num(parts[0])};
  if (parts.size() != 3) throw std::invalid_argument("grid must be x or lo:hi:step");
  const double lo = num(parts[0]), hi = num(parts[1]), step = num(parts[2]);
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("grid needs step > 0 and hi >= lo");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  if (count > 1000000) throw std::invalid_argument("grid too large");
  std::vector<double> g;
  for (long i = 0; i <= count; ++i) g.push_back(r12(lo + static_cast<double>(i) * step));
  return g;
}

struct Options {
  std::optional<double> lambda, g_star, mass_ratio, wz_ratio;
  std::optional<std::string> wz_text, dimension, config, out, wl, grid, input, method;
  std::optional<int> m, M, nmax, nzmax;
  int m_max = 8;
  int sign = 0;
  bool inverse = false;
  int ncm = 0, mcm = 0, nzcm = 0, n = 0, nz = 0;
  int n1 = 0, m1 = 0, nz1 = 0, n2 = 0, m2 = 0, nz2 = 0;
};

struct Resolved {
  qdot::ModelParams params;
  qdot::Truncation trunc;
};

Resolved resolve(const Options& o) {
  auto cfg = qdot::resolve_config(o.config);
  auto& p = cfg.params;
  if (o.lambda) p.lambda = *o.lambda;
  if (o.g_star) p.g_star = *o.g_star;
  if (o.mass_ratio) p.mass_ratio = *o.mass_ratio;
  if (o.wz_text) {
    p.wz_ratio = qdot::detail::parse_real("wz-ratio", *o.wz_text);
    p.dimension = std::isinf(p.wz_ratio) ? qdot::Dimension::TwoD : qdot::Dimension::ThreeD;
  }
  if (o.dimension) {
    p.dimension = qdot::parse_dimension(*o.dimension);
    if (p.dimension == qdot::Dimension::TwoD) {
      if (o.wz_text && std::isfinite(p.wz_ratio)) throw std::invalid_argument("--dimension 2d needs --wz-ratio inf");
      p.wz_ratio = qdot::kInf;
    } else if (std::isinf(p.wz_ratio)) {
      throw std::invalid_argument("--dimension 3d needs a finite --wz-ratio");
    }
  }
  p.validate();
  auto trunc = cfg.trunc.value_or(qdot::Truncation::defaults(p.dimension));
  if (o.nmax) trunc.nmax = *o.nmax;
  if (o.nzmax) trunc.nzmax = *o.nzmax;
  if (p.is_2d()) trunc.nzmax = 0;
  if (trunc.nmax < 0 || trunc.nzmax < 0) throw std::invalid_argument("truncations must be >= 0");
  return {p, trunc};
}

double scalar_wl(const Options& o, double fallback) {
  if (!o.wl) return fallback;
  const auto g = parse_grid(*o.wl);
  if (g.size() != 1) throw std::invalid_argument("--wl must be a single value here");
  return g.front();
}

qdot::Method parse_method(const std::string& s) {
  if (s == "cm") return qdot::Method::CmIJ;
  if (s == "matrix") return qdot::Method::MatrixTrace;
  if (s == "ip") return qdot::Method::IpDiagonal;
  if (s == "closed") return qdot::Method::ClosedForm;
  throw std::invalid_argument("--method must be cm, matrix, ip or closed");
}

void spectrum(const Options& o, std::ostream& os) {
  const auto r = resolve(o);
  const auto grid = parse_grid(o.wl.value_or("0:3:0.1"));
  os << "wl_ratio,m,S,M_S,E_total\n";
  for (double wl : grid) {
    const int lo = o.m.value_or(0), hi = o.m.value_or(o.m_max);
    for (int m = lo; m <= hi; ++m) {
      const auto lv = qdot::lowest_level(m, r.params, qdot::FieldPoint(wl), r.trunc);
      os << fmt(wl) << ',' << m << ',' << lv.S << ',' << lv.M_S << ',' << fmt(lv.total()) << '\n';
    }
  }
}

void ground_state(const Options& o, std::ostream& os) {
  const auto r = resolve(o);
  const auto grid = parse_grid(o.wl.value_or("0:3:0.01"));
  const auto segs = qdot::ground_state_scan(grid, r.params, r.trunc, {o.m_max, 1e-6, false});
  os << "wl_lo,wl_hi,m,S,M_S\n";
  for (const auto& s : segs) os << fmt(s.wl_lo) << ',' << fmt(s.wl_hi) << ',' << s.m << ',' << s.S << ',' << s.M_S << '\n';
}

void entangle(const Options& o, std::ostream& os) {
  const auto r = resolve(o);
  const int m = o.m.value_or(0);
  if (m < 0) throw std::invalid_argument("--m must be >= 0");
  const auto method = parse_method(o.method.value_or("cm"));
  const auto rep = qdot::lowest_state_report(m, r.params, qdot::FieldPoint(scalar_wl(o, 0.0)), r.trunc, method);
  const auto spin = qdot::lowest_state_spin(m);
  json j{{"m", m},
         {"S", spin.S},
         {"M_S", spin.M_S},
         {"trace_orb", r12(rep.trace_orb)},
         {"trace_spin", r12(rep.trace_spin)},
         {"measure", r12(rep.measure)},
         {"method", qdot::to_string(rep.method)},
         {"nmax", r.trunc.nmax},
         {"nzmax", r.trunc.nzmax}};
  os << j.dump(2) << '\n';
}

void scan_entangle(const Options& o, std::ostream& os) {
  const auto r = resolve(o);
  const auto grid = parse_grid(o.wl.value_or("0:3:0.01"));
  os << "wl_ratio,m,S,M_S,measure\n";
  for (double wl : grid) {
    const qdot::FieldPoint f(wl);
    const int m = qdot::ground_channel(o.m_max, r.params, f, r.trunc);
    if (m == o.m_max) throw qdot::NumericalDiagnostic("ground channel reached m_max at wl = " + fmt(wl));
    const auto spin = qdot::lowest_state_spin(m);
    const auto rep = qdot::lowest_state_report(m, r.params, f, r.trunc);
    os << fmt(wl) << ',' << m << ',' << spin.S << ',' << spin.M_S << ',' << fmt(rep.measure) << '\n';
  }
}

void pt_limit(const Options& o, std::ostream& os) {
  const int M = o.M.value_or(0);
  if (M < 0) throw std::invalid_argument("--M must be >= 0");
  json blocks = json::array();
  for (int sign : {1, -1}) {
    if (qdot::subspace_dimension(M, sign) == 0) continue;
    const auto pt = qdot::solve_pt(M, sign);
    json basis = json::array();
    for (const auto& u : pt.space.basis) basis.push_back(json::array({jmode(u.first), jmode(u.second)}));
    json vecs = json::array();
    for (const auto& v : pt.vectors) vecs.push_back(jvec(v));
    blocks.push_back(json{{"sign", sign > 0 ? "+" : "-"},
                          {"basis", basis},
                          {"V", jmat(pt.V)},
                          {"deltaE", jvec(pt.deltaE)},
                          {"vectors", vecs}});
  }
  json rows = json::array();
  for (const auto& row : qdot::limit_state_table(M)) {
    json ip = json::array();
    for (const auto& [k, v] : row.ip) ip.push_back(json{{"first", jmode(k.first)}, {"second", jmode(k.second)}, {"c", r12(v)}});
    rows.push_back(json{{"label", row.label},
                        {"coefficients", jvec(row.coefficients)},
                        {"ip", ip},
                        {"cm", jmode(row.cm.cm)},
                        {"rel", jmode(row.cm.rel)},
                        {"overlap", r12(row.overlap)},
                        {"trace_orb", r12(row.trace_orb)},
                        {"S", row.S},
                        {"M_S", row.M_S},
                        {"trace_spin", jvec(row.trace_spin)},
                        {"measure", jvec(row.measure)}});
  }
  os << json{{"M", M}, {"blocks", blocks}, {"rows", rows}}.dump(2) << '\n';
}

void transform(const Options& o, std::ostream& os) {
  if (!o.inverse) {
    const qdot::CmRelState s{{o.ncm, o.mcm, o.nzcm}, {o.n, o.m.value_or(0), o.nz}};
    os << "n1,m1,nz1,n2,m2,nz2,amplitude\n";
    for (const auto& [k, v] : qdot::cm_to_ip(s))
      os << k.first.n << ',' << k.first.m << ',' << k.first.nz << ',' << k.second.n << ',' << k.second.m << ','
         << k.second.nz << ',' << fmt(v) << '\n';
  } else {
    const qdot::ProductState s{{o.n1, o.m1, o.nz1}, {o.n2, o.m2, o.nz2}};
    os << "ncm,mcm,nzcm,n,m,nz,amplitude\n";
    for (const auto& [k, v] : qdot::ip_to_cm(s))
      os << k.cm.n << ',' << k.cm.m << ',' << k.cm.nz << ',' << k.rel.n << ',' << k.rel.m << ',' << k.rel.nz << ','
         << fmt(v) << '\n';
  }
}

void addition(const Options& o, std::ostream& os) {
  const auto r = resolve(o);
  const auto grid = parse_grid(o.grid.value_or(o.wl.value_or("0:3:0.01")));
  const auto curve = qdot::simulate_curve(r.params, grid, r.trunc, o.m_max);
  os << "wl_ratio,E_a,m,M_S\n";
  for (const auto& s : curve.samples) os << fmt(s.wl_ratio) << ',' << fmt(s.e_a) << ',' << s.m << ',' << s.M_S << '\n';
}

bool estimate(const Options& o, std::ostream& os) {
  const auto r = resolve(o);
  if (!o.input) throw std::invalid_argument("estimate needs --input");
  std::ifstream in(*o.input);
  if (!in) throw std::invalid_argument("cannot open " + *o.input);
  const auto rep = qdot::estimate_curve(qdot::read_curve_csv(in), r.params);
  for (const auto& n : rep.notes) std::cerr << "note: " << n << '\n';
  os << "wl_ratio,F,b1_sq,b0,measure_0th,measure_1st\n";
  for (const auto& e : rep.results)
    os << fmt(e.wl_ratio) << ',' << fmt(e.F) << ',' << fmt(e.b1_sq) << ',' << fmt(e.b0) << ',' << fmt(e.measure_0th)
       << ',' << fmt(e.measure_1st) << '\n';
  return rep.diagnostics == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-electron parabolic quantum dots: spectra, ground states, entanglement"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;

  app.add_option("--lambda", o.lambda, "Coulomb strength (Wigner parameter)");
  app.add_option("--wz-ratio", o.wz_text, "omega_z/omega_0, or inf for the 2D model");
  app.add_option("--wl", o.wl, "omega_L/omega_0: a value or lo:hi:step");
  app.add_option("--m", o.m, "relative magnetic quantum number");
  app.add_option("--M", o.M, "total magnetic quantum number");
  app.add_option("--g-star", o.g_star, "effective g factor");
  app.add_option("--mass-ratio", o.mass_ratio, "effective mass over electron mass");
  app.add_option("--nmax", o.nmax, "radial truncation");
  app.add_option("--nzmax", o.nzmax, "vertical truncation");
  app.add_option("--dimension", o.dimension, "2d or 3d")->check(CLI::IsMember({"2d", "3d"}));
  app.add_option("--out", o.out, "write output to this file");
  app.add_option("--config", o.config, "key=value config file (fallback: $QDOT_CONFIG, ./dot.cfg)");
  app.add_option("--m-max", o.m_max, "largest relative m in scans")->check(CLI::Range(1, 60));

  auto* sp = app.add_subcommand("spectrum", "lowest level per channel m: CSV wl_ratio,m,S,M_S,E_total");
  auto* gs = app.add_subcommand("ground-state", "ground-state segments: CSV wl_lo,wl_hi,m,S,M_S");
  auto* en = app.add_subcommand("entangle", "entanglement of the lowest state in channel m (JSON)");
  en->add_option("--method", o.method, "cm, matrix, ip or closed");
  auto* se = app.add_subcommand("scan-entangle", "ground-state entanglement along a field grid (CSV)");
  auto* pt = app.add_subcommand("pt-limit", "weak-interaction limit on the E_M^(0) level (JSON)");
  auto* tr = app.add_subcommand("transform", "CM x relative <-> IP product expansion (CSV)");
  tr->add_flag("--inverse", o.inverse, "expand an IP product over CM x relative states");
  tr->add_option("--ncm", o.ncm);
  tr->add_option("--mcm", o.mcm);
  tr->add_option("--nzcm", o.nzcm);
  tr->add_option("--n", o.n);
  tr->add_option("--nz", o.nz);
  tr->add_option("--n1", o.n1);
  tr->add_option("--m1", o.m1);
  tr->add_option("--nz1", o.nz1);
  tr->add_option("--n2", o.n2);
  tr->add_option("--m2", o.m2);
  tr->add_option("--nz2", o.nz2);
  auto* ae = app.add_subcommand("addition-energy", "addition energy along a grid: CSV wl_ratio,E_a,m,M_S");
  ae->add_option("--grid", o.grid, "lo:hi:step");
  auto* es = app.add_subcommand("estimate", "entanglement estimates from an addition-energy CSV");
  es->add_option("--input", o.input, "CSV with header wl_ratio,E_a,m,M_S")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  std::ostringstream buffer;
  bool clean = true;
  try {
    if (sp->parsed()) spectrum(o, buffer);
    else if (gs->parsed()) ground_state(o, buffer);
    else if (en->parsed()) entangle(o, buffer);
    else if (se->parsed()) scan_entangle(o, buffer);
    else if (pt->parsed()) pt_limit(o, buffer);
    else if (tr->parsed()) transform(o, buffer);
    else if (ae->parsed()) addition(o, buffer);
    else if (es->parsed()) clean = estimate(o, buffer);
  } catch (const qdot::NumericalDiagnostic& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }

  if (o.out) {
    std::ofstream out(*o.out);
    if (!out) {
      std::cerr << "error: cannot write " << *o.out << '\n';
      return kUsageError;
    }
    out << buffer.str();
  } else {
    std::cout << buffer.str();
  }
  return clean ? 0 : kNumericalError;
}
