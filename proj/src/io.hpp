#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gain.hpp"
#include "structural.hpp"

namespace sn {

// Text import/export: edge lists, dense matrices, gain files, and the FNV
// content hash used by run manifests.

// Edge-list format: one "src dst [weight]" per line, 1-indexed; '#' starts
// a comment.  Throws ParseError carrying the offending line number.
SystemStructure parse_edge_list(const std::string& text);
SystemStructure load_edge_list(const std::string& path);

std::string format_matrix(const Eigen::MatrixXd& M);          // row-major dense decimal
Eigen::MatrixXd parse_matrix(const std::string& text);        // whitespace separated
std::string format_int_matrix(const Eigen::MatrixXd& M);      // 0-1 rows (for U)
std::string format_index_list(const std::vector<int>& idx);   // e.g. alpha set

// Gain export: header line "N n epsilon rho", then each block dense.
std::string format_gain(const GainMatrix& gain, int n, double epsilon);
GainMatrix parse_gain(const std::string& text);

std::string read_file(const std::string& path);    // throws ParseError when missing
void write_file(const std::string& path, const std::string& contents);

// FNV-1a 64-bit, printed as fixed-width hex in manifests.
std::uint64_t fnv1a(const std::string& data);
std::string fnv1a_hex(const std::string& data);

// Deterministic shortest round-trip double formatting for CSV emission.
std::string format_double(double v);

} // namespace sn
