#include "gwstat/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gwstat::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& field, std::size_t line_no) {
  const std::string t = trimmed(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError("not a decimal number: '" + t + "'", line_no);
  return value;
}

std::vector<std::string> non_empty_lines(const std::string& text,
                                         std::vector<std::size_t>& line_nos,
                                         bool strip_comments) {
  std::vector<std::string> lines;
  std::string line;
  std::stringstream ss(text);
  std::size_t no = 0;
  while (std::getline(ss, line)) {
    ++no;
    std::string t = trimmed(line);
    if (strip_comments) {
      const auto hash = t.find('#');
      if (hash != std::string::npos) t = trimmed(t.substr(0, hash));
    }
    if (t.empty()) continue;
    lines.push_back(t);
    line_nos.push_back(no);
  }
  return lines;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write file: " + path);
  out << content;
}

SampleSet parse_samples_csv(const std::string& text) {
  std::vector<std::size_t> line_nos;
  const std::vector<std::string> lines = non_empty_lines(text, line_nos, false);
  if (lines.empty()) throw ParseError("empty sample file", 1);

  const std::vector<std::string> header = split(lines[0], ',');
  const std::size_t d = header.size();
  for (std::size_t j = 0; j < d; ++j)
    if (trimmed(header[j]) != "x" + std::to_string(j + 1))
      throw ParseError("expected header x1,...,xd", line_nos[0]);

  if (lines.size() < 2) throw ParseError("no observations", line_nos[0]);
  Matrix rows(lines.size() - 1, d);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> fields = split(lines[i], ',');
    if (fields.size() != d)
      throw ParseError("expected " + std::to_string(d) + " fields, got " +
                           std::to_string(fields.size()),
                       line_nos[i]);
    for (std::size_t j = 0; j < d; ++j)
      rows(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j)) =
          parse_double(fields[j], line_nos[i]);
  }
  return SampleSet(std::move(rows));
}

SampleSet read_samples_csv(const std::string& path) {
  return parse_samples_csv(read_file(path));
}

std::string format_samples_csv(const SampleSet& s) {
  std::ostringstream out;
  for (int j = 0; j < s.dim(); ++j) {
    if (j) out << ',';
    out << 'x' << j + 1;
  }
  out << '\n';
  for (int i = 0; i < s.n(); ++i) {
    for (int j = 0; j < s.dim(); ++j) {
      if (j) out << ',';
      out << format_double(s.rows()(i, j));
    }
    out << '\n';
  }
  return out.str();
}

void write_samples_csv(const std::string& path, const SampleSet& s) {
  write_file(path, format_samples_csv(s));
}

GaussianMeasure parse_gaussian_params(const std::string& text) {
  std::vector<std::size_t> line_nos;
  const std::vector<std::string> lines = non_empty_lines(text, line_nos, true);
  if (lines.empty()) throw ParseError("empty parameter file", 1);

  int d = 0;
  {
    const std::string t = trimmed(lines[0]);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), d);
    if (ec != std::errc() || ptr != t.data() + t.size() || d < 1)
      throw ParseError("expected the dimension on the first line", line_nos[0]);
  }
  if (lines.size() != static_cast<std::size_t>(d) + 2)
    throw ParseError("expected dimension, mean row and " + std::to_string(d) +
                         " covariance rows",
                     line_nos.back());

  auto parse_row = [&](const std::string& line, std::size_t line_no) {
    std::stringstream ss(line);
    std::vector<double> vals;
    std::string tok;
    while (ss >> tok) vals.push_back(parse_double(tok, line_no));
    if (vals.size() != static_cast<std::size_t>(d))
      throw ParseError("expected " + std::to_string(d) + " values", line_no);
    return vals;
  };

  Vector mean(d);
  const std::vector<double> mv = parse_row(lines[1], line_nos[1]);
  for (int j = 0; j < d; ++j) mean[j] = mv[j];

  Matrix cov(d, d);
  for (int i = 0; i < d; ++i) {
    const std::vector<double> row = parse_row(lines[2 + i], line_nos[2 + i]);
    for (int j = 0; j < d; ++j) cov(i, j) = row[j];
  }
  return GaussianMeasure(mean, SpdMatrix::from_matrix(cov));
}

GaussianMeasure read_gaussian_params(const std::string& path) {
  return parse_gaussian_params(read_file(path));
}

std::string format_gaussian_params(const GaussianMeasure& g) {
  std::ostringstream out;
  out << g.dim() << '\n';
  for (int j = 0; j < g.dim(); ++j) {
    if (j) out << ' ';
    out << format_double(g.mean[j]);
  }
  out << '\n';
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      if (j) out << ' ';
      out << format_double(g.cov.mat()(i, j));
    }
    out << '\n';
  }
  return out.str();
}

void write_gaussian_params(const std::string& path, const GaussianMeasure& g) {
  write_file(path, format_gaussian_params(g));
}

std::vector<ProteinSite> parse_protein_sites(const std::string& sites_text,
                                             const std::string& refs_text) {
  std::vector<std::size_t> line_nos;
  const std::vector<std::string> lines =
      non_empty_lines(sites_text, line_nos, false);
  if (lines.empty()) throw ParseError("empty sites file", 1);
  if (trimmed(lines[0]) != "site,x1,x2,x3")
    throw ParseError("expected header site,x1,x2,x3", line_nos[0]);

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::array<double, 3>>> positions;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> fields = split(lines[i], ',');
    if (fields.size() != 4)
      throw ParseError("expected 4 fields", line_nos[i]);
    const std::string site = trimmed(fields[0]);
    if (site.empty()) throw ParseError("empty site label", line_nos[i]);
    if (!positions.contains(site)) order.push_back(site);
    positions[site].push_back({parse_double(fields[1], line_nos[i]),
                               parse_double(fields[2], line_nos[i]),
                               parse_double(fields[3], line_nos[i])});
  }

  std::vector<std::size_t> ref_nos;
  const std::vector<std::string> ref_lines =
      non_empty_lines(refs_text, ref_nos, false);
  if (ref_lines.empty()) throw ParseError("empty reference file", 1);
  if (trimmed(ref_lines[0]) != "site,mu1,mu2,mu3,b")
    throw ParseError("expected header site,mu1,mu2,mu3,b", ref_nos[0]);
  std::map<std::string, std::pair<Vector, double>> refs;
  for (std::size_t i = 1; i < ref_lines.size(); ++i) {
    const std::vector<std::string> fields = split(ref_lines[i], ',');
    if (fields.size() != 5)
      throw ParseError("expected 5 fields", ref_nos[i]);
    Vector mu(3);
    for (int j = 0; j < 3; ++j) mu[j] = parse_double(fields[1 + j], ref_nos[i]);
    const double b = parse_double(fields[4], ref_nos[i]);
    if (!(b > 0.0)) throw ParseError("b-factor must be positive", ref_nos[i]);
    refs[trimmed(fields[0])] = {mu, b};
  }

  std::vector<ProteinSite> sites;
  sites.reserve(order.size());
  for (const std::string& site : order) {
    const auto ref = refs.find(site);
    if (ref == refs.end())
      throw InvalidInput("no reference row for site '" + site + "'");
    const auto& rows = positions[site];
    Matrix m(rows.size(), 3);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < 3; ++j)
        m(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    sites.push_back(ProteinSite{SampleSet(std::move(m)), ref->second.first,
                                ref->second.second, site});
  }
  return sites;
}

std::vector<ProteinSite> read_protein_sites(const std::string& sites_path,
                                            const std::string& refs_path) {
  return parse_protein_sites(read_file(sites_path), read_file(refs_path));
}

}  // namespace gwstat::io
