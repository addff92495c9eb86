#include "fourlin/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace fourlin {
namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

[[noreturn]] void format_error(const std::string& what) { fail(ErrorKind::format, what); }

void append_doubles(std::string& out, const double* data, std::size_t count) {
  const std::size_t offset = out.size();
  out.resize(offset + count * sizeof(double));
  std::memcpy(out.data() + offset, data, count * sizeof(double));
}

// Splits "key=value" tokens after the magic word of a header line.
struct Header {
  std::string magic;
  std::vector<std::pair<std::string, std::string>> fields;
  std::size_t payload_offset = 0;

  const std::string& get(const std::string& key) const {
    for (const auto& [k, v] : fields) {
      if (k == key) return v;
    }
    format_error(magic + " header lacks field '" + key + "'");
  }
};

Header parse_header(std::string_view bytes, std::string_view magic) {
  const auto eol = bytes.find('\n');
  if (eol == std::string_view::npos || eol > 256) format_error("missing header line");
  std::istringstream line{std::string(bytes.substr(0, eol))};
  Header h;
  line >> h.magic;
  if (h.magic != magic) format_error("expected magic '" + std::string(magic) + "', got '" + h.magic + "'");
  std::string tok;
  while (line >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) format_error("malformed header token '" + tok + "'");
    h.fields.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  h.payload_offset = eol + 1;
  return h;
}

long long parse_int(const std::string& s, const char* what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    format_error(std::string("bad integer for ") + what + ": '" + s + "'");
  }
  if (used != s.size()) format_error(std::string("bad integer for ") + what + ": '" + s + "'");
  return v;
}

double parse_real(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    format_error(std::string("bad number for ") + what + ": '" + s + "'");
  }
  if (used != s.size()) format_error(std::string("bad number for ") + what + ": '" + s + "'");
  return v;
}

std::vector<double> read_doubles(std::string_view bytes, std::size_t offset, std::size_t count) {
  if (bytes.size() - offset != count * sizeof(double)) {
    format_error("payload holds " + std::to_string(bytes.size() - offset) + " bytes, expected " +
                 std::to_string(count * sizeof(double)));
  }
  std::vector<double> out(count);
  std::memcpy(out.data(), bytes.data() + offset, count * sizeof(double));
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create directory " + dir.string() + ": " + ec.message());
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) fail(ErrorKind::io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::io, "cannot move output into place at " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) fail(ErrorKind::io, "read failed for " + path.string());
  return os.str();
}

void append_line_atomic(const std::filesystem::path& path, std::string_view line) {
  std::string content;
  if (std::filesystem::exists(path)) content = read_file(path);
  content.append(line);
  content.push_back('\n');
  write_file_atomic(path, content);
}

std::string encode_field(const GridField& u) {
  std::string out = "FLF1 d=" + std::to_string(u.spec().dim()) + " N=" + std::to_string(u.spec().side()) +
                    " kind=real\n";
  append_doubles(out, u.values().data(), u.values().size());
  return out;
}

std::string encode_field(const GridSpec& spec, std::span<const cplx> values) {
  require(values.size() == spec.points(), "field length must equal N^d");
  std::string out =
      "FLF1 d=" + std::to_string(spec.dim()) + " N=" + std::to_string(spec.side()) + " kind=complex\n";
  append_doubles(out, reinterpret_cast<const double*>(values.data()), 2 * values.size());
  return out;
}

FieldFile decode_field(std::string_view bytes) {
  const Header h = parse_header(bytes, "FLF1");
  FieldFile f;
  GridSpec spec;
  try {
    spec = GridSpec(static_cast<int>(parse_int(h.get("d"), "d")), parse_int(h.get("N"), "N"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::format) throw;
    format_error(std::string("invalid grid in FLF1 header: ") + e.what());
  }
  f.spec = spec;
  const std::string& kind = h.get("kind");
  if (kind == "real") {
    f.real_values = read_doubles(bytes, h.payload_offset, spec.points());
    require_finite(f.real_values, "FLF1 payload");
  } else if (kind == "complex") {
    f.complex = true;
    const auto raw = read_doubles(bytes, h.payload_offset, 2 * spec.points());
    f.complex_values.resize(spec.points());
    for (std::size_t i = 0; i < spec.points(); ++i) f.complex_values[i] = {raw[2 * i], raw[2 * i + 1]};
    require_finite(f.complex_values, "FLF1 payload");
  } else {
    format_error("unknown FLF1 kind '" + kind + "'");
  }
  return f;
}

void write_field(const std::filesystem::path& path, const GridField& u) { write_file_atomic(path, encode_field(u)); }

void write_field(const std::filesystem::path& path, const GridSpec& spec, std::span<const cplx> values) {
  write_file_atomic(path, encode_field(spec, values));
}

FieldFile read_field_file(const std::filesystem::path& path) {
  try {
    return decode_field(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

GridField read_field(const std::filesystem::path& path) {
  FieldFile f = read_field_file(path);
  if (f.complex) fail(ErrorKind::format, path.string() + ": expected a real field");
  return GridField(f.spec, std::move(f.real_values));
}

std::string encode_operator(const DiagonalOperator& T) {
  std::string out = "FOP1 d=" + std::to_string(T.dim()) + " K=" + std::to_string(T.K()) +
                    " C=" + format_double(T.C()) + " real=" + (T.real_output() ? "1" : "0") + "\n";
  append_doubles(out, reinterpret_cast<const double*>(T.lambdas().data()), 2 * T.lambdas().size());
  return out;
}

DiagonalOperator decode_operator(std::string_view bytes) {
  const Header h = parse_header(bytes, "FOP1");
  const auto d = static_cast<int>(parse_int(h.get("d"), "d"));
  const auto K = parse_int(h.get("K"), "K");
  const double C = parse_real(h.get("C"), "C");
  const auto real = parse_int(h.get("real"), "real");
  if (d < 1 || d > 16 || K < 0 || K > (1 << 20) || (real != 0 && real != 1)) format_error("invalid FOP1 header values");
  const std::size_t count = box_mode_count(d, K);
  const auto raw = read_doubles(bytes, h.payload_offset, 2 * count);
  std::vector<cplx> lambdas(count);
  for (std::size_t i = 0; i < count; ++i) lambdas[i] = {raw[2 * i], raw[2 * i + 1]};
  return DiagonalOperator(d, K, C, std::move(lambdas), real == 1);
}

void write_operator(const std::filesystem::path& path, const DiagonalOperator& T) {
  write_file_atomic(path, encode_operator(T));
}

DiagonalOperator read_operator(const std::filesystem::path& path) {
  try {
    return decode_operator(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace fourlin
