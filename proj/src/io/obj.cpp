#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "depthrefine/error.hpp"
#include "depthrefine/io.hpp"

namespace depthrefine::io {

namespace {

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& what) {
  throw Error(code, "OBJ line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& token, std::size_t line) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) fail(ErrorCode::ParseSyntax, line, "bad number '" + token + "'");
  return v;
}

long parse_index(const std::string& token, std::size_t line) {
  const std::string head = token.substr(0, token.find('/'));
  long v = 0;
  const char* end = head.data() + head.size();
  const auto [ptr, ec] = std::from_chars(head.data(), end, v);
  if (head.empty() || ec != std::errc() || ptr != end) {
    fail(ErrorCode::ParseSyntax, line, "bad face index '" + token + "'");
  }
  return v;
}

struct FaceRecord {
  std::vector<long> indices;
  std::size_t line;
  std::size_t vertices_before;  // for relative indices
};

}  // namespace

LoadedMesh load_mesh(std::istream& in) {
  TriangleMesh mesh;
  std::vector<FaceRecord> faces;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    std::istringstream line(text);
    std::string tag;
    if (!(line >> tag)) continue;
    if (tag == "v") {
      std::string t[3];
      if (!(line >> t[0] >> t[1] >> t[2])) fail(ErrorCode::ParseSyntax, line_no, "vertex needs three coordinates");
      mesh.vertices.push_back({parse_double(t[0], line_no), parse_double(t[1], line_no), parse_double(t[2], line_no)});
    } else if (tag == "f") {
      FaceRecord face{{}, line_no, mesh.vertices.size()};
      std::string token;
      while (line >> token) face.indices.push_back(parse_index(token, line_no));
      if (face.indices.size() < 3) fail(ErrorCode::ParseSyntax, line_no, "face needs at least three vertices");
      faces.push_back(std::move(face));
    }
  }

  const long count = static_cast<long>(mesh.vertices.size());
  for (const auto& face : faces) {
    std::vector<std::uint32_t> resolved;
    for (long idx : face.indices) {
      const long zero_based = idx > 0 ? idx - 1 : static_cast<long>(face.vertices_before) + idx;
      if (idx == 0 || zero_based < 0 || zero_based >= count) {
        fail(ErrorCode::ParseIndexRange, face.line,
             "vertex index " + std::to_string(idx) + " out of range (" + std::to_string(count) + " vertices)");
      }
      resolved.push_back(static_cast<std::uint32_t>(zero_based));
    }
    for (std::size_t i = 1; i + 1 < resolved.size(); ++i) {
      mesh.triangles.push_back({resolved[0], resolved[i], resolved[i + 1]});
    }
  }
  if (mesh.triangles.empty()) throw Error(ErrorCode::EmptyGeometry, "OBJ file contains no faces");

  LoadedMesh out{std::move(mesh), {}};
  out.recenter_offset = recenter(out.mesh);
  return out;
}

LoadedMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open mesh " + path.string());
  return load_mesh(in);
}

}  // namespace depthrefine::io
