#include "mcl/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mcl/rng.hpp"

namespace mcl {

namespace {

constexpr char kBinaryMagic[4] = {'M', 'C', 'L', '1'};

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::io, std::string("bad decimal '") + tok + "' in " + what);
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

char hex_digit(unsigned v) { return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10); }

unsigned hex_value(char c) {
  if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
  if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
  if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
  throw Error(Errc::io, std::string("bad hex digit '") + c + "'");
}

std::string point_to_hex(const Point& p, std::uint32_t dim) {
  const std::uint32_t digits = (dim + 3) / 4;
  std::string s(digits, '0');
  for (std::uint32_t j = 0; j < digits; ++j) {
    unsigned nib = 0;
    for (std::uint32_t k = 0; k < 4; ++k) {
      const std::uint32_t i = 4 * j + k;
      if (i < dim && p.get_bit(i)) nib |= 8u >> k;
    }
    s[j] = hex_digit(nib);
  }
  return s;
}

Point point_from_hex(const std::string& s, std::uint32_t dim) {
  if (s.size() != (dim + 3) / 4)
    throw Error(Errc::io, "hex point has " + std::to_string(s.size()) + " digits, expected " +
                              std::to_string((dim + 3) / 4));
  Point p = Point::zeros_bits(dim);
  for (std::uint32_t j = 0; j < s.size(); ++j) {
    const unsigned nib = hex_value(s[j]);
    for (std::uint32_t k = 0; k < 4; ++k) {
      const std::uint32_t i = 4 * j + k;
      if (i < dim && (nib & (8u >> k))) p.set_bit(i, true);
    }
  }
  return p;
}

template <typename T>
void write_raw(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_raw(std::istream& in, const char* what) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw Error(Errc::io, std::string("truncated input reading ") + what);
  return v;
}

}  // namespace

std::uint64_t dataset_fingerprint(const Dataset& ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::uint8_t kind = static_cast<std::uint8_t>(ds.spec.kind);
  h = fnv1a(h, &kind, 1);
  h = fnv1a(h, &ds.spec.dim, sizeof ds.spec.dim);
  const std::uint64_t n = ds.points.size();
  h = fnv1a(h, &n, sizeof n);
  for (const Point& p : ds.points) {
    if (!p.bits.empty()) h = fnv1a(h, p.bits.data(), p.bits.size() * sizeof(std::uint64_t));
    if (!p.reals.empty()) h = fnv1a(h, p.reals.data(), p.reals.size() * sizeof(double));
  }
  return h;
}

void write_dataset_text(std::ostream& out, const Dataset& ds) {
  out << to_string(ds.spec.kind) << ',' << ds.spec.dim << ',' << ds.points.size() << ','
      << ds.seed << '\n';
  for (const Point& p : ds.points) {
    if (ds.spec.kind == DomainKind::hamming) {
      out << point_to_hex(p, ds.spec.dim) << '\n';
    } else {
      for (std::size_t i = 0; i < p.reals.size(); ++i) {
        if (i) out << ',';
        out << format_double(p.reals[i]);
      }
      out << '\n';
    }
  }
  if (!out) throw Error(Errc::io, "failed writing dataset");
}

Dataset read_dataset_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(Errc::io, "empty dataset file");
  const auto fields = split(header, ',');
  if (fields.size() != 4)
    throw Error(Errc::io, "dataset header must be kind,d,n,seed; got '" + header + "'");
  Dataset ds;
  const DomainKind kind = domain_kind_from_string(fields[0]);
  const auto dim = static_cast<std::uint32_t>(parse_double(fields[1], "header d"));
  ds.spec = make_domain(kind, dim);
  const auto n = static_cast<std::uint64_t>(parse_double(fields[2], "header n"));
  ds.seed = static_cast<std::uint64_t>(parse_double(fields[3], "header seed"));
  ds.points.reserve(n);
  std::string line;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw Error(Errc::io, "dataset truncated: expected " + std::to_string(n) + " points");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (kind == DomainKind::hamming) {
      ds.points.push_back(point_from_hex(line, dim));
    } else {
      const auto toks = split(line, ',');
      if (toks.size() != dim)
        throw Error(Errc::io, "point " + std::to_string(i) + " has " +
                                  std::to_string(toks.size()) + " coords, expected " +
                                  std::to_string(dim));
      Point p;
      p.reals.reserve(dim);
      for (const auto& t : toks) p.reals.push_back(parse_double(t, "point coordinate"));
      ds.points.push_back(std::move(p));
    }
  }
  return ds;
}

void write_dataset_binary(std::ostream& out, const Dataset& ds) {
  out.write(kBinaryMagic, 4);
  write_raw(out, static_cast<std::uint8_t>(ds.spec.kind));
  write_raw(out, ds.spec.dim);
  write_raw(out, static_cast<std::uint64_t>(ds.points.size()));
  write_raw(out, ds.seed);
  for (const Point& p : ds.points) {
    if (ds.spec.kind == DomainKind::hamming)
      out.write(reinterpret_cast<const char*>(p.bits.data()),
                static_cast<std::streamsize>(p.bits.size() * sizeof(std::uint64_t)));
    else
      out.write(reinterpret_cast<const char*>(p.reals.data()),
                static_cast<std::streamsize>(p.reals.size() * sizeof(double)));
  }
  if (!out) throw Error(Errc::io, "failed writing dataset");
}

Dataset read_dataset_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kBinaryMagic, 4) != 0)
    throw Error(Errc::io, "not an MCL1 dataset file");
  Dataset ds;
  const auto kind = static_cast<DomainKind>(read_raw<std::uint8_t>(in, "kind"));
  const auto dim = read_raw<std::uint32_t>(in, "dim");
  ds.spec = make_domain(kind, dim);
  const auto n = read_raw<std::uint64_t>(in, "n");
  ds.seed = read_raw<std::uint64_t>(in, "seed");
  ds.points.reserve(n);
  const std::size_t words = (dim + 63) / 64;
  for (std::uint64_t i = 0; i < n; ++i) {
    Point p;
    if (kind == DomainKind::hamming) {
      p.bits.resize(words);
      if (!in.read(reinterpret_cast<char*>(p.bits.data()),
                   static_cast<std::streamsize>(words * sizeof(std::uint64_t))))
        throw Error(Errc::io, "truncated MCL1 payload");
    } else {
      p.reals.resize(dim);
      if (!in.read(reinterpret_cast<char*>(p.reals.data()),
                   static_cast<std::streamsize>(dim * sizeof(double))))
        throw Error(Errc::io, "truncated MCL1 payload");
    }
    ds.points.push_back(std::move(p));
  }
  return ds;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open dataset file '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  in.clear();
  in.seekg(0);
  if (std::memcmp(magic, kBinaryMagic, 4) == 0) return read_dataset_binary(in);
  return read_dataset_text(in);
}

void save_dataset(const std::string& path, const Dataset& ds, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open '" + path + "' for writing");
  if (binary)
    write_dataset_binary(out, ds);
  else
    write_dataset_text(out, ds);
}

}  // namespace mcl
