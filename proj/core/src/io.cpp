#include "lsopr/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace lsopr {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const int rows = static_cast<int>(j.size());
  const int cols = rows > 0 ? static_cast<int>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  return m;
}

json f_to_json(const SpectralFunction& f) {
  json out;
  out["kind"] = to_string(f.kind);
  switch (f.kind) {
    case FunctionKind::Zero:
      break;
    case FunctionKind::LpBall:
      out["ell"] = std::isinf(f.ell) ? json("inf") : json(f.ell);
      out["c"] = f.c;
      break;
    case FunctionKind::TraceBox:
      out["L"] = f.lo;
      out["U"] = f.hi;
      break;
    case FunctionKind::SpectralNormBall:
      out["c"] = f.c;
      break;
    case FunctionKind::TraceLogDet:
      out["U"] = f.hi;
      out["L"] = f.lo;
      break;
    case FunctionKind::NuclearBall:
      out["z"] = f.z;
      break;
    case FunctionKind::FrobeniusSq:
      out["z"] = f.z;
      break;
    case FunctionKind::LogDetLb:
      out["alpha"] = f.alpha;
      out["z"] = f.z;
      break;
  }
  return out;
}

SpectralFunction f_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return SpectralFunction::zero();
  if (kind == "lp_ball") {
    double ell;
    if (j.at("ell").is_string()) ell = std::numeric_limits<double>::infinity();
    else ell = j.at("ell").get<double>();
    return SpectralFunction::lp_ball(ell, j.at("c").get<double>());
  }
  if (kind == "trace_box")
    return SpectralFunction::trace_box(j.at("L").get<double>(), j.at("U").get<double>());
  if (kind == "spectral_norm_ball")
    return SpectralFunction::spectral_norm_ball(j.at("c").get<double>());
  if (kind == "trace_logdet")
    return SpectralFunction::trace_logdet(j.at("U").get<double>(), j.at("L").get<double>());
  if (kind == "nuclear_ball") return SpectralFunction::nuclear_ball(j.at("z").get<double>());
  if (kind == "frobenius_sq") return SpectralFunction::frobenius_sq(j.at("z").get<double>());
  if (kind == "logdet_lb")
    return SpectralFunction::logdet_lb(j.at("alpha").get<double>(), j.at("z").get<double>());
  throw DomainError("unknown spectral function kind: " + kind);
}

SpaceKind space_from_string(const std::string& s) {
  if (s == "psd") return SpaceKind::Psd;
  if (s == "nonsym") return SpaceKind::NonSym;
  if (s == "sym") return SpaceKind::Sym;
  if (s == "diag") return SpaceKind::Diag;
  throw DomainError("unknown space kind: " + s);
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json out;
  out["space"] = {{"kind", to_string(inst.domain.space.kind)},
                  {"n", inst.domain.space.n},
                  {"p", inst.domain.space.p}};
  out["k"] = inst.domain.k;
  out["ktilde"] = inst.domain.ktilde;
  out["f"] = f_to_json(inst.domain.f);
  out["objective"] = matrix_to_json(inst.a0);
  json rows = json::array();
  for (const auto& c : inst.constraints) {
    json row;
    row["A"] = matrix_to_json(c.a);
    row["bl"] = c.bl ? json(*c.bl) : json(nullptr);
    row["bu"] = c.bu ? json(*c.bu) : json(nullptr);
    rows.push_back(row);
  }
  out["constraints"] = rows;
  if (!inst.aux_vars.empty()) {
    json aux = json::array();
    for (const auto& a : inst.aux_vars) {
      json item;
      item["obj"] = a.obj;
      item["lb"] = a.lb;
      json coeffs = json::array();
      for (int i = 0; i < a.row_coeffs.size(); ++i) coeffs.push_back(a.row_coeffs(i));
      item["rows"] = coeffs;
      aux.push_back(item);
    }
    out["aux_vars"] = aux;
  }
  if (inst.planted) out["planted"] = matrix_to_json(*inst.planted);
  return out.dump(2) + "\n";
}

std::string mc_to_json(const McData& data, double delta_lb) {
  json out;
  out["space"] = {{"kind", "nonsym"}, {"n", data.n}, {"p", data.p}};
  out["k"] = data.k;
  out["noise"] = data.noise;
  out["delta_lb"] = delta_lb;
  json obs = json::array();
  for (const auto& o : data.observations) obs.push_back({o.i, o.j, o.value});
  out["observations"] = obs;
  return out.dump(2) + "\n";
}

ProblemFile problem_from_json(const std::string& text) {
  const json j = json::parse(text);
  ProblemFile out;
  if (j.contains("observations")) {
    out.is_mc = true;
    out.mc.n = j.at("space").at("n").get<int>();
    out.mc.p = j.at("space").at("p").get<int>();
    out.mc.k = j.at("k").get<int>();
    out.mc.noise = j.value("noise", 0.0);
    out.mc_delta_lb = j.value("delta_lb", 1e-4);
    for (const auto& o : j.at("observations")) {
      out.mc.observations.push_back(
          {o[0].get<int>(), o[1].get<int>(), o[2].get<double>()});
    }
    out.mc.truth = Matrix::Zero(out.mc.n, out.mc.p);
    for (const auto& o : out.mc.observations) out.mc.truth(o.i, o.j) = o.value;
    return out;
  }
  Instance& inst = out.instance;
  MatrixSpace space;
  space.kind = space_from_string(j.at("space").at("kind").get<std::string>());
  space.n = j.at("space").at("n").get<int>();
  space.p = j.at("space").value("p", space.n);
  const int k = j.at("k").get<int>();
  const SpectralFunction f = f_from_json(j.at("f"));
  if (j.contains("ktilde")) {
    inst.domain = DomainSet::make(space, k, j.at("ktilde").get<int>(), f);
  } else {
    inst.domain = DomainSet::make(space, k, f);
  }
  inst.a0 = matrix_from_json(j.at("objective"));
  for (const auto& row : j.at("constraints")) {
    Constraint c;
    c.a = matrix_from_json(row.at("A"));
    if (!row.at("bl").is_null()) c.bl = row.at("bl").get<double>();
    if (!row.at("bu").is_null()) c.bu = row.at("bu").get<double>();
    inst.constraints.push_back(c);
  }
  if (j.contains("aux_vars")) {
    for (const auto& item : j.at("aux_vars")) {
      AuxVar a;
      a.obj = item.at("obj").get<double>();
      a.lb = item.value("lb", 0.0);
      const auto& coeffs = item.at("rows");
      a.row_coeffs = Vector::Zero(static_cast<int>(coeffs.size()));
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        a.row_coeffs(static_cast<int>(i)) = coeffs[i].get<double>();
      }
      inst.aux_vars.push_back(a);
    }
  }
  if (j.contains("planted")) inst.planted = matrix_from_json(j.at("planted"));
  return out;
}

std::string report_to_json(const Report& r) {
  json out;
  out["objective"] = r.objective;
  out["dual_bound"] = r.dual_bound;
  out["gap"] = r.gap;
  out["rank"] = r.rank;
  out["reduced_rank"] = r.reduced_rank;
  out["bound_theoretical"] = r.bound_theoretical;
  out["mtilde"] = r.mtilde;
  out["iterations"] = r.iterations;
  out["columns_generated"] = r.columns_generated;
  out["branch"] = r.branch ? json(*r.branch) : json(nullptr);
  out["wall_time_ms"] = r.wall_time_ms;
  json eig = json::array();
  for (int i = 0; i < r.eigenvalues.size(); ++i) eig.push_back(r.eigenvalues(i));
  out["eigenvalues"] = eig;
  out["X"] = matrix_to_json(r.x);
  out["n"] = r.n;
  out["p"] = r.p;
  out["m"] = r.m;
  out["k"] = r.k;
  out["status"] = r.status;
  return out.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  const json j = json::parse(text);
  Report r;
  r.objective = j.value("objective", 0.0);
  r.dual_bound = j.value("dual_bound", 0.0);
  r.gap = j.value("gap", 0.0);
  r.rank = j.value("rank", 0);
  r.reduced_rank = j.value("reduced_rank", 0);
  r.bound_theoretical = j.value("bound_theoretical", 0);
  r.mtilde = j.value("mtilde", 0);
  r.iterations = j.value("iterations", 0);
  r.columns_generated = j.value("columns_generated", 0);
  if (j.contains("branch") && !j.at("branch").is_null()) r.branch = j.at("branch").get<int>();
  r.wall_time_ms = j.value("wall_time_ms", 0.0);
  if (j.contains("eigenvalues")) {
    const auto& eig = j.at("eigenvalues");
    r.eigenvalues = Vector::Zero(static_cast<int>(eig.size()));
    for (std::size_t i = 0; i < eig.size(); ++i) {
      r.eigenvalues(static_cast<int>(i)) = eig[i].get<double>();
    }
  }
  if (j.contains("X")) r.x = matrix_from_json(j.at("X"));
  r.n = j.value("n", 0);
  r.p = j.value("p", 0);
  r.m = j.value("m", 0);
  r.k = j.value("k", 0);
  r.status = j.value("status", "optimal");
  return r;
}

std::string report_to_csv(const Report& r) {
  std::ostringstream out;
  out << "n,p,m,k,rank,time_s,reduced_rank,rank_bound,mtilde,gap,status\n";
  out.precision(17);
  out << r.n << "," << r.p << "," << r.m << "," << r.k << "," << r.rank << ","
      << r.wall_time_ms / 1000.0 << "," << r.reduced_rank << "," << r.bound_theoretical << ","
      << r.mtilde << "," << r.gap << "," << r.status << "\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write file: " + path);
  out << content;
}

}  // namespace lsopr
