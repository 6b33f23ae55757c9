#include "clbic/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "clbic/error.hpp"

namespace clbic {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  char delim = 0;
  if (line.find(',') != std::string::npos) {
    delim = ',';
  } else if (line.find('\t') != std::string::npos) {
    delim = '\t';
  }
  if (delim) {
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, delim)) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == delim) cells.emplace_back();
  } else {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) cells.push_back(tok);
  }
  return cells;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

NamedGraph parse_edge_list(std::istream& in) {
  std::unordered_map<std::string, Index> ids;
  std::vector<std::string> names;
  std::set<std::pair<Index, Index>> edges;
  auto id_of = [&](const std::string& name) {
    auto [it, fresh] = ids.emplace(name, static_cast<Index>(names.size()));
    if (fresh) names.push_back(name);
    return it->second;
  };
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw DataError("edge list line " + std::to_string(line_no) + ": expected two node ids");
    }
    if (tokens[0] == tokens[1]) {
      throw DataError("edge list line " + std::to_string(line_no) + ": self-loop on " + tokens[0]);
    }
    const Index u = id_of(tokens[0]);
    const Index v = id_of(tokens[1]);
    edges.emplace(std::min(u, v), std::max(u, v));
  }
  const auto n = static_cast<Index>(names.size());
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
  for (auto [u, v] : edges) a(u, v) = a(v, u) = 1;
  return {Adjacency::validate(a), std::move(names)};
}

NamedGraph parse_edge_list(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_edge_list(in);
}

WeightMatrix read_weight_matrix(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    rows.push_back(split_cells(line));
  }
  if (rows.empty()) throw DataError("weight matrix file is empty");
  std::vector<std::string> header = rows.front();
  const auto n = static_cast<Index>(rows.size() - 1);
  if (static_cast<Index>(header.size()) == n + 1) header.erase(header.begin());
  if (static_cast<Index>(header.size()) != n) {
    throw DataError("weight matrix header names " + std::to_string(header.size()) +
                    " nodes but there are " + std::to_string(n) + " rows");
  }
  Eigen::MatrixXd x(n, n);
  for (Index i = 0; i < n; ++i) {
    std::vector<std::string> cells = rows[i + 1];
    if (static_cast<Index>(cells.size()) == n + 1) cells.erase(cells.begin());
    if (static_cast<Index>(cells.size()) != n) {
      throw DataError("weight matrix row " + std::to_string(i + 1) + " has " +
                      std::to_string(cells.size()) + " values, expected " + std::to_string(n));
    }
    for (Index j = 0; j < n; ++j) {
      double v = 0.0;
      if (!parse_number(cells[j], v) || !std::isfinite(v) || v < 0.0) {
        throw DataError("weight matrix row " + std::to_string(i + 1) + ", column " +
                        std::to_string(j + 1) + ": expected a nonnegative number, got '" +
                        cells[j] + "'");
      }
      x(i, j) = v;
    }
  }
  return {x + x.transpose(), std::move(header)};
}

WeightMatrix read_weight_matrix(const std::filesystem::path& path) {
  auto in = open(path);
  return read_weight_matrix(in);
}

QuantileConvention parse_quantile_convention(const std::string& name) {
  if (name == "lower") return QuantileConvention::Lower;
  if (name == "higher") return QuantileConvention::Higher;
  if (name == "linear") return QuantileConvention::Linear;
  throw DataError("unknown quantile convention '" + name + "' (lower, higher, linear)");
}

std::string to_string(QuantileConvention c) {
  switch (c) {
    case QuantileConvention::Lower:
      return "lower";
    case QuantileConvention::Higher:
      return "higher";
    case QuantileConvention::Linear:
      return "linear";
  }
  return "lower";
}

double weight_quantile(std::vector<double> values, double alpha, QuantileConvention c) {
  if (values.empty()) throw DataError("quantile of an empty set");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must lie in (0, 1)");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  switch (c) {
    case QuantileConvention::Lower: {
      // ECDF at values[i] counts ties, so walk to the end of each tie run.
      double best = values.front();
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
        if (static_cast<double>(i + 1) / n <= alpha) best = values[i];
      }
      return best;
    }
    case QuantileConvention::Higher: {
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (static_cast<double>(i + 1) / n >= alpha) return values[i];
      }
      return values.back();
    }
    case QuantileConvention::Linear: {
      const double h = (n - 1.0) * alpha;
      const auto lo = static_cast<std::size_t>(std::floor(h));
      const std::size_t hi = std::min(lo + 1, values.size() - 1);
      return values[lo] + (h - std::floor(h)) * (values[hi] - values[lo]);
    }
  }
  return values.front();
}

Adjacency weights_to_adjacency(const Eigen::MatrixXd& w, double alpha, QuantileConvention c) {
  if (w.rows() != w.cols()) throw DataError("weight matrix is not square");
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw DataError("weight matrix is asymmetric after symmetrization");
  }
  const Index n = w.rows();
  std::vector<double> upper;
  upper.reserve(n * (n - 1) / 2);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) upper.push_back(w(i, j));
  }
  const double cut = weight_quantile(upper, alpha, c);
  Eigen::MatrixXi a = (w.array() >= cut).cast<int>();
  a.diagonal().setZero();
  return Adjacency::validate(a);
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

SelectionFile to_selection_file(const SelectionResult& result,
                                const std::vector<std::string>& node_names,
                                std::map<std::string, std::string> metadata) {
  SelectionFile f;
  f.metadata = std::move(metadata);
  f.records = result.records;
  for (auto& r : f.records) r.labeling = {};
  f.chosen_clbic = result.chosen_clbic;
  f.chosen_bic = result.chosen_bic;
  f.node_names = node_names;
  const auto& zc = result.record(result.chosen_clbic).labeling.labels;
  const auto& zb = result.record(result.chosen_bic).labeling.labels;
  for (Index i = 0; i < zc.size(); ++i) {
    f.labels_clbic.push_back(zc(i) + 1);
    f.labels_bic.push_back(zb(i) + 1);
  }
  if (f.node_names.empty()) {
    for (Index i = 0; i < zc.size(); ++i) f.node_names.push_back(std::to_string(i + 1));
  }
  return f;
}

namespace {
constexpr const char* kRecordHeader =
    "k,loglik,d_hat,clbic,bic,bic_dimension,excluded_blocks,flagged_deletions,empty_community";
constexpr const char* kLabelHeader = "node,label_clbic,label_bic";
}  // namespace

void write_selection(std::ostream& out, const SelectionFile& f) {
  out << "# clbic selection\n";
  for (const auto& [key, value] : f.metadata) out << "# " << key << "=" << value << "\n";
  out << "# chosen_clbic=" << f.chosen_clbic << "\n";
  out << "# chosen_bic=" << f.chosen_bic << "\n";
  out << kRecordHeader << "\n";
  for (const auto& r : f.records) {
    out << r.k << ',' << format_double(r.loglik) << ',' << format_double(r.d_hat) << ','
        << format_double(r.clbic) << ',' << format_double(r.bic) << ',' << r.bic_dimension << ','
        << r.excluded_blocks << ',' << r.flagged_deletions << ','
        << (r.degenerate_labeling ? 1 : 0) << "\n";
  }
  out << "\n" << kLabelHeader << "\n";
  for (std::size_t i = 0; i < f.node_names.size(); ++i) {
    out << f.node_names[i] << ',' << f.labels_clbic[i] << ',' << f.labels_bic[i] << "\n";
  }
}

SelectionFile read_selection(std::istream& in) {
  SelectionFile f;
  std::string line;
  enum { Meta, Records, Labels } section = Meta;
  auto to_int = [](const std::string& s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw DataError("selection file: bad integer '" + s + "'");
    }
    return v;
  };
  auto to_double = [](const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw DataError("selection file: bad number '" + s + "'");
    }
    return v;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(1, eq - 1));
      const std::string value = line.substr(eq + 1);
      if (key == "chosen_clbic") {
        f.chosen_clbic = to_int(value);
      } else if (key == "chosen_bic") {
        f.chosen_bic = to_int(value);
      } else {
        f.metadata[key] = value;
      }
      continue;
    }
    if (line == kRecordHeader) {
      section = Records;
      continue;
    }
    if (line == kLabelHeader) {
      section = Labels;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (section == Records) {
      if (cells.size() != 9) throw DataError("selection file: malformed record '" + line + "'");
      SelectionRecord r;
      r.k = to_int(cells[0]);
      r.loglik = to_double(cells[1]);
      r.d_hat = to_double(cells[2]);
      r.clbic = to_double(cells[3]);
      r.bic = to_double(cells[4]);
      r.bic_dimension = to_int(cells[5]);
      r.excluded_blocks = to_int(cells[6]);
      r.flagged_deletions = to_int(cells[7]);
      r.degenerate_labeling = to_int(cells[8]) != 0;
      f.records.push_back(std::move(r));
    } else if (section == Labels) {
      if (cells.size() != 3) throw DataError("selection file: malformed label row '" + line + "'");
      f.node_names.push_back(cells[0]);
      f.labels_clbic.push_back(to_int(cells[1]));
      f.labels_bic.push_back(to_int(cells[2]));
    } else {
      throw DataError("selection file: data before the record header");
    }
  }
  return f;
}

}  // namespace clbic
