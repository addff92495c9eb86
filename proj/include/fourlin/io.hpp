#pragma once

// On-disk formats. Binary payloads are little-endian float64, row-major
// with the last axis fastest.
//   FLF1: "FLF1 d=<d> N=<N> kind=<real|complex>\n" + N^d values (2 N^d interleaved for complex)
//   FOP1: "FOP1 d=<d> K=<K> C=<C> real=<0|1>\n" + (2K+1)^d complex pairs, box order
// All writers go through a temporary file and rename.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fourlin/fourier_operator.hpp"
#include "fourlin/grid.hpp"

namespace fourlin {

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

// Appends one line (newline added) by rewriting the file atomically.
void append_line_atomic(const std::filesystem::path& path, std::string_view line);

std::string encode_field(const GridField& u);
std::string encode_field(const GridSpec& spec, std::span<const cplx> values);

struct FieldFile {
  GridSpec spec;
  bool complex = false;
  std::vector<double> real_values;  // kind=real
  std::vector<cplx> complex_values; // kind=complex
};

FieldFile decode_field(std::string_view bytes);

void write_field(const std::filesystem::path& path, const GridField& u);
void write_field(const std::filesystem::path& path, const GridSpec& spec, std::span<const cplx> values);
FieldFile read_field_file(const std::filesystem::path& path);
// Real field; a complex file is a format error.
GridField read_field(const std::filesystem::path& path);

std::string encode_operator(const DiagonalOperator& T);
DiagonalOperator decode_operator(std::string_view bytes);
void write_operator(const std::filesystem::path& path, const DiagonalOperator& T);
DiagonalOperator read_operator(const std::filesystem::path& path);

// Shortest round-trip decimal of a double (17 significant digits).
std::string format_double(double x);

}  // namespace fourlin
