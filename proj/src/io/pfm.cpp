#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "depthrefine/error.hpp"
#include "depthrefine/io.hpp"

namespace depthrefine::io {

namespace {

constexpr std::int64_t kMaxPixels = std::int64_t{1} << 28;

std::string read_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF && std::isspace(c)) c = in.get();
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  // The single whitespace after the last header token has been consumed.
  return tok;
}

std::int64_t parse_dimension(const std::string& tok) {
  if (tok.empty() || tok.size() > 10) throw Error(ErrorCode::ParseDimensions, "bad image dimension '" + tok + "'");
  std::int64_t v = 0;
  for (char ch : tok) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw Error(ErrorCode::ParseDimensions, "bad image dimension '" + tok + "'");
    }
    v = v * 10 + (ch - '0');
  }
  if (v <= 0) throw Error(ErrorCode::ParseDimensions, "image dimension must be positive");
  return v;
}

void check_size(std::int64_t w, std::int64_t h) {
  if (w > std::numeric_limits<int>::max() || h > std::numeric_limits<int>::max() || w * h > kMaxPixels) {
    throw Error(ErrorCode::ParseDimensions, "image dimensions overflow");
  }
}

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  }
  return v;
}

float sanitize(float v) { return std::isfinite(v) && v > 0.0f ? v : DepthMap::kInvalid; }

}  // namespace

DepthMap load_pfm(std::istream& in) {
  const std::string magic = read_token(in);
  if (magic != "Pf") throw Error(ErrorCode::ParseMagic, "expected grayscale PFM magic 'Pf', got '" + magic + "'");
  const std::int64_t w = parse_dimension(read_token(in));
  const std::int64_t h = parse_dimension(read_token(in));
  check_size(w, h);
  const std::string scale_tok = read_token(in);
  double scale = 0.0;
  try {
    std::size_t used = 0;
    scale = std::stod(scale_tok, &used);
    if (used != scale_tok.size()) throw std::invalid_argument(scale_tok);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseSyntax, "bad PFM scale '" + scale_tok + "'");
  }
  if (scale > 0.0) throw Error(ErrorCode::ParseEndianness, "big-endian PFM is not supported");
  if (!(scale < 0.0)) throw Error(ErrorCode::ParseSyntax, "PFM scale must be non-zero");

  DepthMap map(static_cast<int>(w), static_cast<int>(h));
  std::vector<std::uint32_t> raw(static_cast<std::size_t>(w));
  const auto row_bytes = static_cast<std::streamsize>(raw.size() * sizeof(std::uint32_t));
  for (int r = static_cast<int>(h) - 1; r >= 0; --r) {
    if (!in.read(reinterpret_cast<char*>(raw.data()), row_bytes)) {
      throw Error(ErrorCode::ParseTruncated, "PFM payload ends early");
    }
    auto dst = map.row(r);
    for (std::size_t c = 0; c < raw.size(); ++c) dst[c] = sanitize(std::bit_cast<float>(to_little(raw[c])));
  }
  return map;
}

DepthMap load_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return load_pfm(in);
}

void store_pfm(std::ostream& out, const DepthMap& map) {
  out << "Pf\n" << map.width() << ' ' << map.height() << "\n-1.0\n";
  std::vector<std::uint32_t> raw(static_cast<std::size_t>(map.width()));
  for (int r = map.height() - 1; r >= 0; --r) {
    for (int c = 0; c < map.width(); ++c) raw[static_cast<std::size_t>(c)] = to_little(std::bit_cast<std::uint32_t>(map.at(r, c)));
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(std::uint32_t)));
  }
  if (!out) throw Error(ErrorCode::Io, "failed to write PFM");
}

void store_pfm(const std::filesystem::path& path, const DepthMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot create " + path.string());
  store_pfm(out, map);
}

DepthMap load_pgm16(std::istream& in, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "depth scale must be positive");
  const std::string magic = read_token(in);
  if (magic != "P5") throw Error(ErrorCode::ParseMagic, "expected binary PGM magic 'P5', got '" + magic + "'");
  const std::int64_t w = parse_dimension(read_token(in));
  const std::int64_t h = parse_dimension(read_token(in));
  check_size(w, h);
  const std::int64_t maxval = parse_dimension(read_token(in));
  if (maxval <= 255 || maxval > 65535) throw Error(ErrorCode::ParseSyntax, "expected a 16-bit PGM");

  DepthMap map(static_cast<int>(w), static_cast<int>(h));
  std::vector<unsigned char> raw(static_cast<std::size_t>(w) * 2);
  for (int r = 0; r < static_cast<int>(h); ++r) {
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
      throw Error(ErrorCode::ParseTruncated, "PGM payload ends early");
    }
    auto dst = map.row(r);
    for (std::size_t c = 0; c < dst.size(); ++c) {
      const unsigned v = (static_cast<unsigned>(raw[2 * c]) << 8) | raw[2 * c + 1];
      dst[c] = v == 0 ? DepthMap::kInvalid : static_cast<float>(v * scale);
    }
  }
  return map;
}

DepthMap load_depth(const std::filesystem::path& path, double scale) {
  if (path.extension() == ".pgm") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return load_pgm16(in, scale);
  }
  DepthMap map = load_pfm(path);
  if (scale != 1.0) {
    if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "depth scale must be positive");
    for (float& v : map.data()) v = sanitize(static_cast<float>(v * scale));
  }
  return map;
}

}  // namespace depthrefine::io
