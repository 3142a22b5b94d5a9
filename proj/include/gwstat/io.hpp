#pragma once

#include <string>
#include <vector>

#include "gwstat/gaussian.hpp"
#include "gwstat/inference.hpp"

namespace gwstat::io {

/// Reads a sample CSV: header "x1,...,xd", one observation per row, decimal
/// floating-point text. Throws ParseError with the offending line number.
SampleSet read_samples_csv(const std::string& path);
SampleSet parse_samples_csv(const std::string& text);

/// Writes samples with round-trip-exact formatting.
void write_samples_csv(const std::string& path, const SampleSet& s);
std::string format_samples_csv(const SampleSet& s);

/// Gaussian parameter file: the dimension, then the mean row, then d
/// covariance rows; '#' starts a comment.
GaussianMeasure read_gaussian_params(const std::string& path);
GaussianMeasure parse_gaussian_params(const std::string& text);
void write_gaussian_params(const std::string& path, const GaussianMeasure& g);
std::string format_gaussian_params(const GaussianMeasure& g);

/// Protein batch inputs: sites CSV with header "site,x1,x2,x3" and a
/// reference CSV with header "site,mu1,mu2,mu3,b". Sites keep their order of
/// first appearance; every site needs a reference row.
std::vector<ProteinSite> read_protein_sites(const std::string& sites_path,
                                            const std::string& refs_path);
std::vector<ProteinSite> parse_protein_sites(const std::string& sites_text,
                                             const std::string& refs_text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gwstat::io
