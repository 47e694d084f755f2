#include "fdia/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fdia {
namespace {

void put_double(std::string& line, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  line.append(buf, res.ptr);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::runtime_error("csv: bad numeric field '" + s + "'");
  }
  return v;
}

void header_block(std::string& h, const std::string& base, int count) {
  for (int i = 0; i < count; ++i) {
    h += ',' + base + '_' + std::to_string(i);
  }
}

}  // namespace

void write_trace_csv(const EpisodeTrace& trace, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("csv: cannot open '" + path + "' for writing");

  const int p = trace.dof;
  const int n = 2 * p;
  {
    std::string meta = "# mode=" + to_string(trace.mode);
    meta += " ts=";
    put_double(meta, trace.ts);
    meta += " attack_start=" + std::to_string(trace.attack_start);
    meta += " attack_len=" + std::to_string(trace.attack_len);
    f << meta << '\n';
  }
  std::string h = "k";
  header_block(h, "q", p);
  header_block(h, "qd", p);
  header_block(h, "xhat", n);
  header_block(h, "xtilde", n);
  header_block(h, "y", p);
  header_block(h, "ytilde", p);
  header_block(h, "a", p);
  header_block(h, "delta", p);
  header_block(h, "r", p);
  h += ",z,w,alarm,ztilde,f,scored,resynced";
  header_block(h, "unom", p);
  header_block(h, "u", p);
  h += ",ee_x,ee_y,ref_x,ref_y,plan_x,plan_y";
  f << h << '\n';

  std::string line;
  for (long k = 0; k < trace.steps; ++k) {
    line.clear();
    line += std::to_string(k);
    const auto put_row = [&](const Eigen::MatrixXd& mmat) {
      for (Eigen::Index j = 0; j < mmat.cols(); ++j) {
        line += ',';
        put_double(line, mmat(k, j));
      }
    };
    put_row(trace.q);
    put_row(trace.qd);
    put_row(trace.xhat);
    put_row(trace.xtilde);
    put_row(trace.y);
    put_row(trace.ytilde);
    put_row(trace.a);
    put_row(trace.delta);
    put_row(trace.r);
    line += ',';
    put_double(line, trace.z(k));
    line += ',';
    put_double(line, trace.w(k));
    line += ',' + std::to_string(int(trace.alarm[k]));
    line += ',';
    put_double(line, trace.ztilde(k));
    line += ',';
    put_double(line, trace.f(k));
    line += ',' + std::to_string(int(trace.scored[k]));
    line += ',' + std::to_string(int(trace.resynced[k]));
    put_row(trace.u_nom);
    put_row(trace.u);
    put_row(trace.ee);
    put_row(trace.ref);
    put_row(trace.plan);
    f << line << '\n';
  }
  if (!f) throw std::runtime_error("csv: write to '" + path + "' failed");
}

EpisodeTrace read_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("csv: cannot open '" + path + "'");
  std::string meta, header;
  if (!std::getline(f, meta) || meta.rfind("# ", 0) != 0) {
    throw std::runtime_error("csv: missing metadata line");
  }
  if (!std::getline(f, header)) throw std::runtime_error("csv: missing header");

  EpisodeTrace tr;
  {
    std::istringstream ms(meta.substr(2));
    std::string tok;
    while (ms >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "mode") tr.mode = mode_from_string(val);
      else if (key == "ts") tr.ts = to_double(val);
      else if (key == "attack_start") tr.attack_start = std::stol(val);
      else if (key == "attack_len") tr.attack_len = std::stol(val);
    }
  }
  const auto cols = split(header, ',');
  int p = 0;
  for (const auto& c : cols) {
    if (c.rfind("q_", 0) == 0) ++p;
  }
  if (p == 0) throw std::runtime_error("csv: no joint columns in header");
  tr.dof = p;
  const int n = 2 * p;

  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != cols.size()) {
      throw std::runtime_error("csv: row width mismatch");
    }
    std::vector<double> row(fields.size());
    for (size_t i = 0; i < fields.size(); ++i) row[i] = to_double(fields[i]);
    rows.push_back(std::move(row));
  }
  const long N = static_cast<long>(rows.size());
  tr.steps = N;
  tr.q.resize(N, p);
  tr.qd.resize(N, p);
  tr.xhat.resize(N, n);
  tr.xtilde.resize(N, n);
  tr.y.resize(N, p);
  tr.ytilde.resize(N, p);
  tr.a.resize(N, p);
  tr.delta.resize(N, p);
  tr.r.resize(N, p);
  tr.u_nom.resize(N, p);
  tr.u.resize(N, p);
  tr.z.resize(N);
  tr.w.resize(N);
  tr.ztilde.resize(N);
  tr.f.resize(N);
  tr.alarm.assign(N, 0);
  tr.scored.assign(N, 0);
  tr.resynced.assign(N, 0);
  tr.ee.resize(N, 2);
  tr.ref.resize(N, 2);
  tr.plan.resize(N, 2);

  for (long k = 0; k < N; ++k) {
    const auto& row = rows[k];
    size_t i = 1;  // skip k
    const auto take = [&](Eigen::MatrixXd& mmat) {
      for (Eigen::Index j = 0; j < mmat.cols(); ++j) mmat(k, j) = row[i++];
    };
    take(tr.q);
    take(tr.qd);
    take(tr.xhat);
    take(tr.xtilde);
    take(tr.y);
    take(tr.ytilde);
    take(tr.a);
    take(tr.delta);
    take(tr.r);
    tr.z(k) = row[i++];
    tr.w(k) = row[i++];
    tr.alarm[k] = static_cast<std::uint8_t>(row[i++]);
    tr.ztilde(k) = row[i++];
    tr.f(k) = row[i++];
    tr.scored[k] = static_cast<std::uint8_t>(row[i++]);
    tr.resynced[k] = static_cast<std::uint8_t>(row[i++]);
    take(tr.u_nom);
    take(tr.u);
    take(tr.ee);
    take(tr.ref);
    take(tr.plan);
  }
  return tr;
}

void write_metrics_csv(
    const std::vector<std::pair<std::string, MetricReport>>& rows,
    const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  f << "label,window_start,window_len,devmax_plan,devrms_plan,devmax_ref,"
       "devrms_ref,mean_u_norm,alarm_count,max_w,min_f,finite,first_nonfinite\n";
  for (const auto& [label, m] : rows) {
    std::string line = label;
    line += ',' + std::to_string(m.window_start);
    line += ',' + std::to_string(m.window_len);
    for (double v : {m.devmax_plan, m.devrms_plan, m.devmax_ref, m.devrms_ref,
                     m.mean_u_norm}) {
      line += ',';
      put_double(line, v);
    }
    line += ',' + std::to_string(m.alarm_count);
    line += ',';
    put_double(line, m.max_w);
    line += ',';
    put_double(line, m.min_f);
    line += ',' + std::to_string(static_cast<int>(m.finite));
    line += ',' + std::to_string(m.first_nonfinite);
    f << line << '\n';
  }
  if (!f) throw std::runtime_error("csv: write to '" + path + "' failed");
}

}  // namespace fdia
