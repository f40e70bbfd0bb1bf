#include "sparseal/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sparseal/errors.hpp"

namespace sparseal {

namespace {

const char* const kHeader =
    "config_hash,seed,d,t,epsilon,delta,noise_kind,noise_param,algorithm,labels_total,"
    "unlabeled_total,rejected_total,err_estimate,err_stderr,theta_final,k0,wall_ms,"
    "invariant_u_in_W_rate,status";

constexpr int kWallMsColumn = 16;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw ParameterError("csv: bad numeric field '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str()) throw ParameterError("csv: bad integer field '" + s + "'");
  return v;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  // Shortest representation that parses back to the same bits.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_header() {
  return kHeader;
}

std::string to_csv_row(const RunRecord& r) {
  std::ostringstream out;
  out << r.config_hash << ',' << r.seed << ',' << r.d << ',' << r.t << ','
      << format_g17(r.epsilon) << ',' << format_g17(r.delta) << ',' << r.noise_kind << ','
      << format_g17(r.noise_param) << ',' << r.algorithm << ',' << r.labels_total << ','
      << r.unlabeled_total << ',' << r.rejected_total << ',' << format_g17(r.err_estimate) << ','
      << format_g17(r.err_stderr) << ',' << format_g17(r.theta_final) << ',' << r.last_epoch
      << ',' << format_g17(r.wall_ms) << ',' << format_g17(r.target_in_set_rate) << ','
      << r.status;
  return out.str();
}

std::string to_csv(const std::vector<RunRecord>& records) {
  std::string out = csv_header();
  out.push_back('\n');
  for (const RunRecord& r : records) {
    out += to_csv_row(r);
    out.push_back('\n');
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("csv: cannot open for writing: " + path);
  f << to_csv(records);
  if (!f) throw InternalError("csv: write failed: " + path);
}

std::vector<RunRecord> read_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw ParameterError("csv: unexpected header: " + line);

  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_line(line);
    if (f.size() != 19) {
      throw ParameterError("csv: expected 19 fields, got " + std::to_string(f.size()));
    }
    RunRecord r;
    r.config_hash = f[0];
    r.seed = parse_u64(f[1]);
    r.d = static_cast<int>(parse_u64(f[2]));
    r.t = static_cast<int>(parse_u64(f[3]));
    r.epsilon = parse_double(f[4]);
    r.delta = parse_double(f[5]);
    r.noise_kind = f[6];
    r.noise_param = parse_double(f[7]);
    r.algorithm = f[8];
    r.labels_total = parse_u64(f[9]);
    r.unlabeled_total = parse_u64(f[10]);
    r.rejected_total = parse_u64(f[11]);
    r.err_estimate = parse_double(f[12]);
    r.err_stderr = parse_double(f[13]);
    r.theta_final = parse_double(f[14]);
    r.last_epoch = static_cast<int>(parse_u64(f[15]));
    r.wall_ms = parse_double(f[16]);
    r.target_in_set_rate = parse_double(f[17]);
    r.status = f[18];
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunRecord> read_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParameterError("csv: cannot open for reading: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return read_csv_text(buf.str());
}

std::string strip_wall_ms(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const std::vector<std::string> f = split_line(line);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out << ',';
      out << (static_cast<int>(i) == kWallMsColumn && f.size() == 19 ? std::string() : f[i]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace sparseal
