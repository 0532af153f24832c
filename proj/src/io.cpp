#include "mpt/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace mpt {

using nlohmann::json;

namespace {

constexpr const char* kSlots[6] = {"11", "22", "33", "12", "13", "23"};

json packed_json(const SymTensor3& t) {
  json a = json::array();
  for (double x : t.packed()) a.push_back(x);
  return a;
}

SymTensor3 packed_from(const json& a, const char* what) {
  if (!a.is_array() || a.size() != 6) throw Error(ErrorKind::Schema, std::string(what) + " must be an array of 6 numbers");
  std::array<double, 6> v{};
  for (int k = 0; k < 6; ++k) {
    if (!a[k].is_number()) throw Error(ErrorKind::Schema, std::string(what) + " entries must be numbers");
    v[k] = a[k].get<double>();
  }
  return SymTensor3(v);
}

const json& field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::Schema, std::string("missing field '") + key + "'");
  return doc.at(key);
}

double number(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number()) throw Error(ErrorKind::Schema, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json model_to_json(const SpectralModel& model) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["alpha_m"] = model.alpha();
  doc["sigma_star_S_per_m"] = model.sigma_star();
  doc["N0"] = packed_json(model.n0());
  json modes = json::array();
  for (const Mode& m : model.modes()) {
    json jm;
    jm["lambda"] = m.lambda;
    jm["multiplicity"] = m.multiplicity();
    json rows = json::array();
    for (const Vec3& c : m.couplings) rows.push_back({c[0], c[1], c[2]});
    jm["couplings"] = rows;
    if (m.dark) jm["dark"] = true;
    modes.push_back(jm);
  }
  doc["modes"] = modes;
  doc["provenance"] = to_string(model.provenance());
  if (model.tail_bound()) doc["tail_bound"] = *model.tail_bound();
  if (model.topology()) doc["topology"] = *model.topology();
  return doc;
}

SpectralModel model_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Schema, "model document must be a JSON object");
  const json& ver = field(doc, "schema_version");
  if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion)
    throw Error(ErrorKind::Schema, "unsupported schema_version (expected 1)");
  const double alpha = number(doc, "alpha_m");
  const double sigma = number(doc, "sigma_star_S_per_m");
  const SymTensor3 n0 = packed_from(field(doc, "N0"), "N0");
  const json& jmodes = field(doc, "modes");
  if (!jmodes.is_array()) throw Error(ErrorKind::Schema, "modes must be an array");
  std::vector<Mode> modes;
  for (const json& jm : jmodes) {
    Mode m;
    m.lambda = number(jm, "lambda");
    const json& rows = field(jm, "couplings");
    if (!rows.is_array()) throw Error(ErrorKind::Schema, "couplings must be an array of rows");
    for (const json& row : rows) {
      if (!row.is_array() || row.size() != 3) throw Error(ErrorKind::Schema, "coupling rows must have 3 entries");
      m.couplings.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
    const json& mult = field(jm, "multiplicity");
    if (!mult.is_number_integer() || mult.get<long long>() != static_cast<long long>(m.couplings.size()))
      throw Error(ErrorKind::Schema, "multiplicity must equal the number of coupling rows");
    m.dark = jm.value("dark", false);
    modes.push_back(std::move(m));
  }
  const Provenance prov = provenance_from_string(field(doc, "provenance").get<std::string>());
  std::optional<double> tail;
  if (doc.contains("tail_bound")) tail = number(doc, "tail_bound");
  std::optional<std::string> topo;
  if (doc.contains("topology")) topo = doc.at("topology").get<std::string>();
  return SpectralModel(alpha, sigma, n0, std::move(modes), prov, topo, tail);
}

std::string dump_model(const SpectralModel& model) { return model_to_json(model).dump(2) + "\n"; }

SpectralModel parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("model JSON: ") + e.what());
  }
  try {
    return model_from_json(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("model JSON: ") + e.what());
  }
}

void save_model(const SpectralModel& model, const std::filesystem::path& path) { write_atomic(path, dump_model(model)); }

SpectralModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

json expansion_to_json(const PoleResidueExpansion& e) {
  json doc;
  doc["alpha_m"] = e.alpha;
  doc["sigma_star_S_per_m"] = e.sigma_star;
  doc["N0"] = packed_json(e.n0);
  json poles = json::array();
  for (std::size_t n = 0; n < e.size(); ++n)
    poles.push_back({{"lambda", e.lambdas[n]}, {"s", e.poles_s[n]}, {"nv", e.nv[n]},
                     {"residue", packed_json(e.residues[n])}});
  doc["poles"] = poles;
  return doc;
}

json report_to_json(const OracleReport& r) {
  json doc;
  doc["dim"] = r.dim;
  doc["seed"] = r.seed;
  doc["shape"] = to_string(r.shape);
  doc["grid_points"] = r.grid_points;
  doc["passed"] = r.all_passed();
  json items = json::array();
  for (const auto& it : r.items)
    items.push_back({{"identity", it.name}, {"max_violation", it.max_violation}, {"passed", it.passed}});
  doc["identities"] = items;
  return doc;
}

std::string report_to_text(const OracleReport& r) {
  std::ostringstream os;
  os << "oracle dim=" << r.dim << " seed=" << r.seed << " shape=" << to_string(r.shape)
     << " grid=" << r.grid_points << "\n";
  for (const auto& it : r.items) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-24s %-4s max violation %.3e\n", it.name.c_str(), it.passed ? "ok" : "FAIL",
                  it.max_violation);
    os << buf;
  }
  os << (r.all_passed() ? "all identities hold\n" : "identity failure\n");
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::Io, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const std::vector<std::string>& sweep_csv_header() {
  static const std::vector<std::string> header = [] {
    std::vector<std::string> h{"nu", "omega_rad_s", "f_Hz"};
    for (const char* p : {"R", "I", "ReM", "ImM"})
      for (const char* s : kSlots) h.push_back(std::string(p) + s);
    return h;
  }();
  return header;
}

std::string sweep_csv(double time_scale, const std::vector<double>& nu, const std::vector<Assembly>& values) {
  if (nu.size() != values.size()) throw Error(ErrorKind::InvalidInput, "sweep_csv: size mismatch");
  std::string out;
  const auto& header = sweep_csv_header();
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
  out += "\n";
  for (std::size_t k = 0; k < nu.size(); ++k) {
    const double omega = nu[k] / time_scale;
    out += fmt(nu[k]) + "," + fmt(omega) + "," + fmt(omega / (2.0 * kPi));
    for (const SymTensor3* t : {&values[k].r, &values[k].i, &values[k].m.real, &values[k].m.imag})
      for (double x : t->packed()) out += "," + fmt(x);
    out += "\n";
  }
  return out;
}

SweepTable parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Schema, "sweep CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string expected;
  for (const auto& h : sweep_csv_header()) expected += (expected.empty() ? "" : ",") + h;
  if (line != expected) throw Error(ErrorKind::Schema, "sweep CSV header mismatch");

  SweepTable t;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> cols;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && (*end == ' ' || *end == '\r')) ++end;
      if (end == cell.c_str() || (end && *end != '\0') || errno == ERANGE)
        throw Error(ErrorKind::Schema, "sweep CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      cols.push_back(v);
    }
    if (cols.size() != sweep_csv_header().size())
      throw Error(ErrorKind::Schema, "sweep CSV line " + std::to_string(lineno) + ": wrong column count");
    t.nu.push_back(cols[0]);
    t.omega.push_back(cols[1]);
    t.f_hz.push_back(cols[2]);
    Assembly a;
    auto take = [&](std::size_t off) {
      std::array<double, 6> v{};
      for (int k = 0; k < 6; ++k) v[k] = cols[off + k];
      return SymTensor3(v);
    };
    a.r = take(3);
    a.i = take(9);
    a.m.real = take(15);
    a.m.imag = take(21);
    t.values.push_back(a);
  }
  return t;
}

Assembly isotropic_assembly(std::complex<double> m, double m0) {
  Assembly a;
  a.r = SymTensor3::identity(m.real() - m0);
  a.i = SymTensor3::identity(m.imag());
  a.m.real = SymTensor3::identity(m.real());
  a.m.imag = SymTensor3::identity(m.imag());
  return a;
}

std::string tensor_series_csv(const std::string& time_column, const std::vector<double>& t,
                              const std::vector<SymTensor3>& values) {
  std::string out = time_column;
  for (const char* s : kSlots) out += std::string(",K") + s;
  out += "\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    out += fmt(t[k]);
    for (double x : values[k].packed()) out += "," + fmt(x);
    out += "\n";
  }
  return out;
}

std::string fit_table_csv(const FitTable& table) {
  std::string out = "i,j,skipped,a,b,rms_R,converged_R,c,d,rms_I,converged_I,b_d_agree\n";
  for (const auto& row : table.rows) {
    out += std::to_string(row.i + 1) + "," + std::to_string(row.j + 1) + ",";
    if (row.skipped) {
      out += "1,,,,,,,,,\n";
      continue;
    }
    out += "0," + fmt(row.r.amplitude) + "," + fmt(row.r.eigen) + "," + fmt(row.r.rms) + "," +
           (row.r.converged ? "1" : "0") + "," + fmt(row.im.amplitude) + "," + fmt(row.im.eigen) + "," +
           fmt(row.im.rms) + "," + (row.im.converged ? "1" : "0") + "," +
           (eigen_estimates_agree(row.r.eigen, row.im.eigen) ? "1" : "0") + "\n";
  }
  return out;
}

std::string fit_residuals_csv(const FitTable& table) {
  std::string out = "nu";
  for (const auto& row : table.rows) {
    if (row.skipped) continue;
    const std::string s = std::to_string(row.i + 1) + std::to_string(row.j + 1);
    out += ",resR" + s + ",resI" + s;
  }
  out += "\n";
  for (std::size_t k = 0; k < table.nu.size(); ++k) {
    out += fmt(table.nu[k]);
    for (const auto& row : table.rows) {
      if (row.skipped) continue;
      out += "," + fmt(row.r.residuals[k]) + "," + fmt(row.im.residuals[k]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace mpt
