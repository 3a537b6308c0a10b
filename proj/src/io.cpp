#include "arenkit/io.hpp"

#include "arenkit/error.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace arenkit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw Error(Errc::Parse, "key '" + key + "': " + what);
}

double number(const json& value, const std::string& key) {
  if (!value.is_number()) fail(key, "expected a number");
  return value.get<double>();
}

MatrixXd matrix(const json& value, const std::string& key) {
  if (value.is_number()) return MatrixXd::Constant(1, 1, value.get<double>());
  if (!value.is_array() || value.empty()) fail(key, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(value.size());
  if (!value.front().is_array() || value.front().empty()) fail(key, "rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(value.front().size());
  MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = value[static_cast<std::size_t>(i)];
    const std::string row_key = key + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(row_key, "expected a row of length " + std::to_string(cols));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = number(row[static_cast<std::size_t>(j)], row_key + "[" + std::to_string(j) + "]");
    }
  }
  return out;
}

VectorXd vector(const json& value, const std::string& key) {
  if (value.is_number()) return VectorXd::Constant(1, value.get<double>());
  if (!value.is_array() || value.empty()) fail(key, "expected a non-empty array");
  VectorXd out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number(value[i], key + "[" + std::to_string(i) + "]");
  }
  return out;
}

const json& required(const json& doc, const std::string& key) {
  const auto it = doc.find(key);
  if (it == doc.end()) fail(key, "missing");
  return *it;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::Parse, e.what());
  }
}

BigInt big(const json& value, const std::string& key) {
  try {
    if (value.is_string()) return parse_bigint(value.get<std::string>());
    if (value.is_number_integer()) return BigInt(value.get<std::int64_t>());
  } catch (const std::exception&) {
  }
  fail(key, "expected a decimal integer string");
}

template <typename T>
T get(const json& doc, const std::string& key) {
  const json& value = required(doc, key);
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    fail(key, "wrong type");
  }
}

std::vector<int> int_list(const json& value, const std::string& key) {
  std::vector<int> out;
  if (value.is_number_integer()) {
    out.push_back(value.get<int>());
  } else if (value.is_array()) {
    for (const auto& v : value) {
      if (!v.is_number_integer()) fail(key, "expected integers");
      out.push_back(v.get<int>());
    }
  } else if (value.is_object()) {
    const int from = get<int>(value, "from");
    const int to = get<int>(value, "to");
    const int step = value.contains("step") ? get<int>(value, "step") : 1;
    if (step < 1) fail(key + ".step", "must be positive");
    for (int v = from; v <= to; v += step) out.push_back(v);
  } else {
    fail(key, "expected an integer, a list or {from, to}");
  }
  return out;
}

std::string fixed(double value, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << value;
  return os.str();
}

}  // namespace

SpecFile parse_spec(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw Error(Errc::Parse, "spec must be an object");
  SpecFile file;
  MpcSpec& spec = file.spec;
  spec.A = matrix(required(doc, "A"), "A");
  spec.B = matrix(required(doc, "B"), "B");
  spec.C = matrix(required(doc, "C"), "C");
  spec.Q = matrix(required(doc, "Q"), "Q");
  spec.R = matrix(required(doc, "R"), "R");
  const json& horizon = required(doc, "Nc");
  if (!horizon.is_number_integer()) fail("Nc", "expected an integer");
  spec.horizon = horizon.get<int>();
  spec.y_min = vector(required(doc, "y_min"), "y_min");
  spec.y_max = vector(required(doc, "y_max"), "y_max");
  spec.u_min = vector(required(doc, "u_min"), "u_min");
  spec.u_max = vector(required(doc, "u_max"), "u_max");
  if (doc.contains("epsilon")) spec.epsilon = number(doc["epsilon"], "epsilon");
  if (doc.contains("budget_seconds")) {
    const double seconds = number(doc["budget_seconds"], "budget_seconds");
    if (!(seconds > 0.0)) fail("budget_seconds", "must be positive");
    file.budget = std::chrono::duration<double>(seconds);
  }

  const auto m = spec.B.cols();
  const auto n = spec.A.rows();
  const bool riccati = !doc.contains("P") || (doc["P"].is_string() && doc["P"].get<std::string>() == "riccati");
  if (riccati) {
    if (spec.A.rows() != spec.A.cols() || spec.B.rows() != n || spec.Q.rows() != n || spec.Q.cols() != n ||
        spec.R.rows() != m || spec.R.cols() != m) {
      throw Error(Errc::DimensionMismatch, "A, B, Q, R shapes are inconsistent");
    }
    const RiccatiSolution sol = dare_solve(spec.A, spec.B, spec.Q, spec.R);
    spec.P = sol.P;
    spec.K = doc.contains("K") ? matrix(doc["K"], "K") : sol.K;
    file.terminal_cost = "riccati";
  } else {
    if (doc["P"].is_string()) fail("P", "expected a matrix or \"riccati\"");
    spec.P = matrix(doc["P"], "P");
    spec.K = doc.contains("K") ? matrix(doc["K"], "K") : MatrixXd::Zero(m, n);
  }

  if (doc.contains("domain_box")) {
    const json& box = doc["domain_box"];
    if (!box.is_object()) fail("domain_box", "expected {lower, upper}");
    DomainBox parsed{vector(required(box, "lower"), "domain_box.lower"),
                     vector(required(box, "upper"), "domain_box.upper")};
    if (parsed.lower.size() != n || parsed.upper.size() != n) fail("domain_box", "needs n entries per bound");
    if (!(parsed.lower.array() <= parsed.upper.array()).all()) fail("domain_box", "lower exceeds upper");
    file.domain_box = std::move(parsed);
  }
  validate(spec);
  return file;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Parse, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(Errc::InvalidArgument, "failed writing '" + path.string() + "'");
}

SpecFile load_spec(const std::filesystem::path& path) { return parse_spec(read_text(path)); }

bool operator==(const ArchMetadata& a, const ArchMetadata& b) {
  return a.tool == b.tool && a.version == b.version && a.n == b.n && a.m == b.m && a.l == b.l &&
         a.horizon == b.horizon && a.omega == b.omega && a.rho == b.rho && a.epsilon == b.epsilon &&
         a.n_est == b.n_est && a.m_est == b.m_est && a.two_pow_rho == b.two_pow_rho &&
         a.parameter_count == b.parameter_count && a.maximal_sets == b.maximal_sets &&
         a.complete == b.complete && a.n_est_exact == b.n_est_exact &&
         a.resource_warning == b.resource_warning && a.terminal_cost == b.terminal_cost;
}

std::string write_arch(const ArchFile& file) {
  const ArchMetadata& md = file.metadata;
  json meta = {
      {"tool", md.tool},
      {"version", md.version},
      {"n", md.n},
      {"m", md.m},
      {"l", md.l},
      {"Nc", md.horizon},
      {"omega", md.omega},
      {"rho", md.rho},
      {"epsilon", md.epsilon},
      {"n_est", md.n_est.str()},
      {"m_est", md.m_est.str()},
      {"two_pow_rho", md.two_pow_rho.str()},
      {"parameter_count", md.parameter_count.str()},
      {"maximal_sets", md.maximal_sets},
      {"complete", md.complete},
      {"n_est_exact", md.n_est_exact},
      {"resource_warning", md.resource_warning},
      {"terminal_cost", md.terminal_cost},
      {"timing",
       {{"region_count_ms", md.timing.region_count_ms},
        {"uo_count_ms", md.timing.uo_count_ms},
        {"total_ms", md.timing.total_ms}}},
  };
  json layers = json::array();
  for (const auto& layer : file.arch.layers) {
    layers.push_back({{"in", layer.in.str()},
                      {"out", layer.out.str()},
                      {"role", std::string(role_name(layer.role))},
                      {"activation", layer.activation}});
  }
  json doc = {{"metadata", meta},
              {"input_dim", file.arch.input_dim},
              {"output_dim", file.arch.output_dim},
              {"layers", layers}};
  return doc.dump(2) + "\n";
}

ArchFile parse_arch(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw Error(Errc::Parse, "architecture document must be an object");
  ArchFile file;
  const json& meta = required(doc, "metadata");
  ArchMetadata& md = file.metadata;
  md.tool = get<std::string>(meta, "tool");
  md.version = get<std::string>(meta, "version");
  md.n = get<int>(meta, "n");
  md.m = get<int>(meta, "m");
  md.l = get<int>(meta, "l");
  md.horizon = get<int>(meta, "Nc");
  md.omega = get<int>(meta, "omega");
  md.rho = get<int>(meta, "rho");
  md.epsilon = get<double>(meta, "epsilon");
  md.n_est = big(required(meta, "n_est"), "n_est");
  md.m_est = big(required(meta, "m_est"), "m_est");
  md.two_pow_rho = big(required(meta, "two_pow_rho"), "two_pow_rho");
  md.parameter_count = big(required(meta, "parameter_count"), "parameter_count");
  md.maximal_sets = get<std::size_t>(meta, "maximal_sets");
  md.complete = get<bool>(meta, "complete");
  md.n_est_exact = get<bool>(meta, "n_est_exact");
  md.resource_warning = get<bool>(meta, "resource_warning");
  md.terminal_cost = get<std::string>(meta, "terminal_cost");
  const json& timing = required(meta, "timing");
  md.timing.region_count_ms = get<double>(timing, "region_count_ms");
  md.timing.uo_count_ms = get<double>(timing, "uo_count_ms");
  md.timing.total_ms = get<double>(timing, "total_ms");

  file.arch.input_dim = get<int>(doc, "input_dim");
  file.arch.output_dim = get<int>(doc, "output_dim");
  file.arch.n_local = md.n_est;
  file.arch.n_regions = md.m_est;
  file.arch.resource_warning = md.resource_warning;
  const json& layers = required(doc, "layers");
  if (!layers.is_array()) fail("layers", "expected an array");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::string key = "layers[" + std::to_string(k) + "]";
    const json& layer = layers[k];
    ArchLayer parsed;
    parsed.in = big(required(layer, "in"), key + ".in");
    parsed.out = big(required(layer, "out"), key + ".out");
    parsed.role = parse_role(get<std::string>(layer, "role"));
    parsed.activation = get<bool>(layer, "activation");
    file.arch.layers.push_back(std::move(parsed));
  }
  return file;
}

SweepDescriptor parse_sweep(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw Error(Errc::Parse, "sweep must be an object");
  SweepDescriptor sweep;
  sweep.states = int_list(required(doc, "n"), "n");
  sweep.horizons = int_list(required(doc, "Nc"), "Nc");
  if (doc.contains("m")) sweep.inputs = get<int>(doc, "m");
  if (doc.contains("l")) sweep.outputs = get<int>(doc, "l");
  if (doc.contains("seed")) sweep.seed = get<std::uint64_t>(doc, "seed");
  if (doc.contains("budget_seconds")) {
    const double seconds = number(doc["budget_seconds"], "budget_seconds");
    if (!(seconds > 0.0)) fail("budget_seconds", "must be positive");
    sweep.budget = std::chrono::duration<double>(seconds);
  }
  if (sweep.inputs < 1 || sweep.outputs < 1) fail("m", "input and output counts must be >= 1");
  for (int n : sweep.states) {
    if (n < 1) fail("n", "state counts must be >= 1");
  }
  for (int h : sweep.horizons) {
    if (h < 2) fail("Nc", "horizons must be >= 2");
  }
  return sweep;
}

std::string csv_header() { return "n,m,l,Nc,rho,n_est,two_pow_rho,wall_ms,lp_calls,sat_calls,status\n"; }

std::string csv_row(const BenchRow& row) {
  std::string status = row.status;
  if (status.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : status) {
      if (c == '"') quoted += '"';
      quoted += c == '\n' ? ' ' : c;
    }
    status = quoted + "\"";
  }
  std::ostringstream os;
  os << row.n << ',' << row.m << ',' << row.l << ',' << row.horizon << ',' << row.rho << ','
     << row.n_est.str() << ',' << row.two_pow_rho.str() << ',' << fixed(row.wall_ms, 3) << ','
     << row.lp_calls << ',' << row.sat_calls << ',' << status << '\n';
  return os.str();
}

}  // namespace arenkit
