#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dgft/gft.hpp"
#include "dgft/graph.hpp"

namespace dgft {

// All numeric output is printed with 17 significant digits so doubles
// round-trip exactly.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write '" + path + "'");
  out << content;
}

// FNV-1a, used to fingerprint inputs in run reports.
inline std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Graph text format: a header line `n <N>`, one `src dst weight` line per
// edge, `#` starts a comment. Weights are written with 17 significant
// digits so save/load round-trips exactly.
inline std::string save_graph(const DirectedGraph& g) {
  std::ostringstream out;
  out << "n " << g.order() << "\n";
  for (const Edge& e : g.edges())
    out << e.src << " " << e.dst << " " << format_double(e.weight) << "\n";
  return out.str();
}

inline void save_graph(const DirectedGraph& g, const std::string& path) {
  write_file(path, save_graph(g));
}

inline DirectedGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (n < 0) {
      std::string tag;
      if (!(ls >> tag)) continue;  // blank/comment before header
      double n_val;
      if (tag != "n" || !(ls >> n_val) || n_val != static_cast<int>(n_val) || n_val <= 0)
        throw validation_error("line " + std::to_string(lineno) +
                               ": expected header 'n <count>'");
      n = static_cast<int>(n_val);
      continue;
    }
    std::string f_src, f_dst, f_weight, trailing;
    if (!(ls >> f_src)) continue;  // blank/comment line
    if (!(ls >> f_dst >> f_weight) || (ls >> trailing))
      throw validation_error("line " + std::to_string(lineno) +
                             ": expected 'src dst weight'");
    Edge e;
    try {
      std::size_t used = 0;
      e.src = std::stoi(f_src, &used);
      if (used != f_src.size()) throw std::invalid_argument(f_src);
      e.dst = std::stoi(f_dst, &used);
      if (used != f_dst.size()) throw std::invalid_argument(f_dst);
      e.weight = std::stod(f_weight, &used);
      if (used != f_weight.size()) throw std::invalid_argument(f_weight);
    } catch (const std::exception&) {
      throw validation_error("line " + std::to_string(lineno) + ": malformed edge '" + line +
                             "'");
    }
    edges.push_back(e);
  }
  if (n < 0) throw validation_error("missing 'n <count>' header");
  return DirectedGraph(n, std::move(edges));
}

inline DirectedGraph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

// Signal CSV: single column with header `value`.
inline std::string save_signal(const Eigen::VectorXd& x) {
  std::ostringstream out;
  out << "value\n";
  for (int i = 0; i < x.size(); ++i) out << format_double(x(i)) << "\n";
  return out.str();
}

inline Eigen::VectorXd parse_signal(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "value")
    throw validation_error("signal CSV must start with a 'value' header");
  std::vector<double> vals;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(line, &used));
      if (used != line.size()) throw std::invalid_argument(line);
    } catch (const std::exception&) {
      throw validation_error("line " + std::to_string(lineno) + ": bad signal value '" +
                             line + "'");
    }
  }
  Eigen::VectorXd x(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) x(i) = vals[i];
  return x;
}

inline Eigen::VectorXd load_signal(const std::string& path) {
  return parse_signal(read_file(path));
}

// Coefficient CSV: `index,sum_block,diff_block`.
inline std::string save_coefficients(const GftCoefficients& c) {
  std::ostringstream out;
  out << "index,sum_block,diff_block\n";
  for (int i = 0; i < c.sum_block.size(); ++i)
    out << i << "," << format_double(c.sum_block(i)) << "," << format_double(c.diff_block(i))
        << "\n";
  return out.str();
}

inline GftCoefficients parse_coefficients(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "index,sum_block,diff_block")
    throw validation_error("coefficient CSV must start with 'index,sum_block,diff_block'");
  std::vector<double> sum, diff;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    double vals[3];
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(ls, cell, c < 2 ? ',' : '\n'))
        throw validation_error("line " + std::to_string(lineno) + ": expected three columns");
      try {
        vals[c] = std::stod(cell);
      } catch (const std::exception&) {
        throw validation_error("line " + std::to_string(lineno) + ": bad value '" + cell + "'");
      }
    }
    sum.push_back(vals[1]);
    diff.push_back(vals[2]);
  }
  GftCoefficients c;
  c.sum_block.resize(sum.size());
  c.diff_block.resize(diff.size());
  for (std::size_t i = 0; i < sum.size(); ++i) {
    c.sum_block(i) = sum[i];
    c.diff_block(i) = diff[i];
  }
  return c;
}

// Dense matrix CSV, plain rows of comma-separated values, no header.
inline std::string save_matrix(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
  return out.str();
}

inline std::string save_vector(const Eigen::VectorXd& v, const std::string& header) {
  std::ostringstream out;
  out << header << "\n";
  for (int i = 0; i < v.size(); ++i) out << format_double(v(i)) << "\n";
  return out.str();
}

}  // namespace dgft
