#include "mmsim/ply.hpp"

#include "mmsim/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mmsim::ply {
namespace {

static_assert(std::endian::native == std::endian::little, "PLY I/O assumes a little-endian host");

enum class Scalar { kI8, kU8, kI16, kU16, kI32, kU32, kF32, kF64 };

Scalar parseScalar(const std::string& name) {
  if (name == "char" || name == "int8") return Scalar::kI8;
  if (name == "uchar" || name == "uint8") return Scalar::kU8;
  if (name == "short" || name == "int16") return Scalar::kI16;
  if (name == "ushort" || name == "uint16") return Scalar::kU16;
  if (name == "int" || name == "int32") return Scalar::kI32;
  if (name == "uint" || name == "uint32") return Scalar::kU32;
  if (name == "float" || name == "float32") return Scalar::kF32;
  if (name == "double" || name == "float64") return Scalar::kF64;
  throw Error("ply", ErrorKind::kParse, "unknown scalar type '" + name + "'");
}

std::size_t scalarSize(Scalar s) {
  switch (s) {
    case Scalar::kI8:
    case Scalar::kU8: return 1;
    case Scalar::kI16:
    case Scalar::kU16: return 2;
    case Scalar::kI32:
    case Scalar::kU32:
    case Scalar::kF32: return 4;
    case Scalar::kF64: return 8;
  }
  return 0;
}

template <typename T>
T load(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

double readScalar(Scalar s, const char* p) {
  switch (s) {
    case Scalar::kI8: return load<std::int8_t>(p);
    case Scalar::kU8: return load<std::uint8_t>(p);
    case Scalar::kI16: return load<std::int16_t>(p);
    case Scalar::kU16: return load<std::uint16_t>(p);
    case Scalar::kI32: return load<std::int32_t>(p);
    case Scalar::kU32: return load<std::uint32_t>(p);
    case Scalar::kF32: return load<float>(p);
    case Scalar::kF64: return load<double>(p);
  }
  return 0.0;
}

struct Property {
  std::string name;
  bool is_list = false;
  Scalar count_type = Scalar::kU8;
  Scalar value_type = Scalar::kF32;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Document {
  std::vector<Element> elements;
  std::string body;
};

Document readDocument(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("ply", ErrorKind::kNotFound, "cannot open " + path.string());
  Document doc;
  std::string line;
  std::getline(in, line);
  if (line != "ply" && line != "ply\r") throw Error("ply", ErrorKind::kParse, path.string() + ": bad header");
  bool format_ok = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt != "binary_little_endian") {
        throw Error("ply", ErrorKind::kParse, path.string() + ": only binary_little_endian is supported");
      }
      format_ok = true;
    } else if (keyword == "element") {
      Element e;
      ls >> e.name >> e.count;
      doc.elements.push_back(std::move(e));
    } else if (keyword == "property") {
      if (doc.elements.empty()) throw Error("ply", ErrorKind::kParse, path.string() + ": property before element");
      Property p;
      std::string type;
      ls >> type;
      if (type == "list") {
        std::string ct, vt;
        ls >> ct >> vt >> p.name;
        p.is_list = true;
        p.count_type = parseScalar(ct);
        p.value_type = parseScalar(vt);
      } else {
        p.value_type = parseScalar(type);
        ls >> p.name;
      }
      doc.elements.back().properties.push_back(std::move(p));
    } else if (keyword == "end_header") {
      break;
    }
  }
  if (!format_ok) throw Error("ply", ErrorKind::kParse, path.string() + ": missing format line");
  doc.body.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return doc;
}

class Cursor {
 public:
  Cursor(const std::string& data, const std::filesystem::path& path) : data_(data), path_(path) {}
  const char* take(std::size_t n) {
    if (pos_ + n > data_.size()) throw Error("ply", ErrorKind::kParse, path_.string() + ": truncated body");
    const char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }

 private:
  const std::string& data_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

// Calls `row(element_index, values_per_property)` for every row of every element.
template <typename RowFn>
void walk(const Document& doc, const std::filesystem::path& path, RowFn&& row) {
  Cursor cur(doc.body, path);
  std::vector<std::vector<double>> values;
  for (std::size_t e = 0; e < doc.elements.size(); ++e) {
    const Element& el = doc.elements[e];
    values.resize(el.properties.size());
    for (std::size_t r = 0; r < el.count; ++r) {
      for (std::size_t p = 0; p < el.properties.size(); ++p) {
        const Property& prop = el.properties[p];
        values[p].clear();
        if (prop.is_list) {
          const double n = readScalar(prop.count_type, cur.take(scalarSize(prop.count_type)));
          if (n < 0) throw Error("ply", ErrorKind::kParse, path.string() + ": negative list length");
          for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
            values[p].push_back(readScalar(prop.value_type, cur.take(scalarSize(prop.value_type))));
          }
        } else {
          values[p].push_back(readScalar(prop.value_type, cur.take(scalarSize(prop.value_type))));
        }
      }
      row(e, values);
    }
  }
}

int indexOf(const Element& el, const std::string& name) {
  for (std::size_t i = 0; i < el.properties.size(); ++i) {
    if (el.properties[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

TriMesh readMesh(const std::filesystem::path& path) {
  const Document doc = readDocument(path);
  int vx = -1, vy = -1, vz = -1, fi = -1;
  std::size_t vertex_el = doc.elements.size(), face_el = doc.elements.size();
  for (std::size_t e = 0; e < doc.elements.size(); ++e) {
    const Element& el = doc.elements[e];
    if (el.name == "vertex") {
      vertex_el = e;
      vx = indexOf(el, "x");
      vy = indexOf(el, "y");
      vz = indexOf(el, "z");
    } else if (el.name == "face") {
      face_el = e;
      fi = indexOf(el, "vertex_indices");
      if (fi < 0) fi = indexOf(el, "vertex_index");
    }
  }
  if (vertex_el == doc.elements.size() || vx < 0 || vy < 0 || vz < 0) {
    throw Error("ply", ErrorKind::kParse, path.string() + ": missing vertex x/y/z");
  }
  if (face_el == doc.elements.size() || fi < 0) {
    throw Error("ply", ErrorKind::kParse, path.string() + ": missing face vertex_indices");
  }
  TriMesh mesh;
  walk(doc, path, [&](std::size_t e, const std::vector<std::vector<double>>& v) {
    if (e == vertex_el) {
      mesh.vertices.emplace_back(v[vx][0], v[vy][0], v[vz][0]);
    } else if (e == face_el) {
      const auto& idx = v[fi];
      if (idx.size() < 3) throw Error("ply", ErrorKind::kParse, path.string() + ": face with < 3 vertices");
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        mesh.triangles.push_back({static_cast<std::uint32_t>(idx[0]), static_cast<std::uint32_t>(idx[k]),
                                  static_cast<std::uint32_t>(idx[k + 1])});
      }
    }
  });
  mesh.velocities.assign(mesh.vertices.size(), Vec3::Zero());
  return mesh;
}

void writeMesh(const std::filesystem::path& path, const TriMesh& mesh) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("ply", ErrorKind::kIo, "cannot write " + path.string());
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << mesh.vertices.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "element face " << mesh.triangles.size() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
  for (const Vec3& v : mesh.vertices) {
    put(out, static_cast<float>(v.x()));
    put(out, static_cast<float>(v.y()));
    put(out, static_cast<float>(v.z()));
  }
  for (const auto& t : mesh.triangles) {
    put(out, std::uint8_t{3});
    for (std::uint32_t i : t) put(out, static_cast<std::int32_t>(i));
  }
  if (!out) throw Error("ply", ErrorKind::kIo, "write failed for " + path.string());
}

void writePoints(const std::filesystem::path& path, const PointTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("ply", ErrorKind::kIo, "cannot write " + path.string());
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << table.rows() << "\n";
  for (const auto& c : table.columns) out << "property float " << c << "\n";
  out << "end_header\n";
  for (float v : table.values) put(out, v);
  if (!out) throw Error("ply", ErrorKind::kIo, "write failed for " + path.string());
}

PointTable readPoints(const std::filesystem::path& path) {
  const Document doc = readDocument(path);
  if (doc.elements.empty() || doc.elements.front().name != "vertex") {
    throw Error("ply", ErrorKind::kParse, path.string() + ": expected a vertex element");
  }
  PointTable table;
  for (const auto& p : doc.elements.front().properties) {
    if (p.is_list) throw Error("ply", ErrorKind::kParse, path.string() + ": list property in point table");
    table.columns.push_back(p.name);
  }
  walk(doc, path, [&](std::size_t e, const std::vector<std::vector<double>>& v) {
    if (e != 0) return;
    for (const auto& col : v) table.values.push_back(static_cast<float>(col[0]));
  });
  return table;
}

}  // namespace mmsim::ply
