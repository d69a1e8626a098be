#include "conflate/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace conflate {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// ---------------------------------------------------------------------------
// PLY
// ---------------------------------------------------------------------------

enum class PlyType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::size_t ply_type_size(PlyType t) {
    switch (t) {
        case PlyType::Int8:
        case PlyType::UInt8: return 1;
        case PlyType::Int16:
        case PlyType::UInt16: return 2;
        case PlyType::Int32:
        case PlyType::UInt32:
        case PlyType::Float32: return 4;
        case PlyType::Float64: return 8;
    }
    return 0;
}

bool parse_ply_type(const std::string& s, PlyType& out) {
    if (s == "char" || s == "int8") out = PlyType::Int8;
    else if (s == "uchar" || s == "uint8") out = PlyType::UInt8;
    else if (s == "short" || s == "int16") out = PlyType::Int16;
    else if (s == "ushort" || s == "uint16") out = PlyType::UInt16;
    else if (s == "int" || s == "int32") out = PlyType::Int32;
    else if (s == "uint" || s == "uint32") out = PlyType::UInt32;
    else if (s == "float" || s == "float32") out = PlyType::Float32;
    else if (s == "double" || s == "float64") out = PlyType::Float64;
    else return false;
    return true;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::Float32;
    bool is_list = false;
    PlyType count_type = PlyType::UInt8;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

struct PlyHeader {
    bool binary = false;
    std::vector<PlyElement> elements;
};

[[noreturn]] void malformed_header(const std::string& what) {
    throw IoError("malformed header: " + what);
}

[[noreturn]] void malformed_body(const std::string& what) {
    throw IoError("malformed body: " + what);
}

PlyHeader read_ply_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) malformed_header("empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "ply") malformed_header("missing ply magic");

    PlyHeader header;
    bool have_format = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;
        if (keyword.empty() || keyword == "comment" || keyword == "obj_info") continue;
        if (keyword == "format") {
            std::string fmt, version;
            ls >> fmt >> version;
            if (fmt == "ascii") header.binary = false;
            else if (fmt == "binary_little_endian") header.binary = true;
            else throw IoError("unsupported format: PLY " + fmt);
            if (version != "1.0") malformed_header("unknown PLY version " + version);
            have_format = true;
        } else if (keyword == "element") {
            PlyElement elem;
            long long count = -1;
            ls >> elem.name >> count;
            if (elem.name.empty() || count < 0) malformed_header("bad element line: " + line);
            elem.count = static_cast<std::size_t>(count);
            header.elements.push_back(std::move(elem));
        } else if (keyword == "property") {
            if (header.elements.empty()) malformed_header("property before element");
            PlyProperty prop;
            std::string type_word;
            ls >> type_word;
            if (type_word == "list") {
                std::string count_word, item_word;
                ls >> count_word >> item_word >> prop.name;
                prop.is_list = true;
                if (!parse_ply_type(count_word, prop.count_type) ||
                    !parse_ply_type(item_word, prop.type) || prop.name.empty()) {
                    malformed_header("bad list property: " + line);
                }
            } else {
                ls >> prop.name;
                if (!parse_ply_type(type_word, prop.type) || prop.name.empty()) {
                    malformed_header("bad property: " + line);
                }
            }
            header.elements.back().properties.push_back(std::move(prop));
        } else if (keyword == "end_header") {
            if (!have_format) malformed_header("missing format line");
            return header;
        } else {
            malformed_header("unknown keyword " + keyword);
        }
    }
    malformed_header("missing end_header");
}

double decode_scalar(const unsigned char* p, PlyType t) {
    // Host is little-endian; binary_little_endian fields map directly.
    switch (t) {
        case PlyType::Int8: return static_cast<double>(*reinterpret_cast<const std::int8_t*>(p));
        case PlyType::UInt8: return static_cast<double>(*p);
        case PlyType::Int16: {
            std::int16_t v;
            std::memcpy(&v, p, 2);
            return v;
        }
        case PlyType::UInt16: {
            std::uint16_t v;
            std::memcpy(&v, p, 2);
            return v;
        }
        case PlyType::Int32: {
            std::int32_t v;
            std::memcpy(&v, p, 4);
            return v;
        }
        case PlyType::UInt32: {
            std::uint32_t v;
            std::memcpy(&v, p, 4);
            return v;
        }
        case PlyType::Float32: {
            float v;
            std::memcpy(&v, p, 4);
            return v;
        }
        case PlyType::Float64: {
            double v;
            std::memcpy(&v, p, 8);
            return v;
        }
    }
    return 0.0;
}

double read_binary_scalar(std::istream& in, PlyType t) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(ply_type_size(t)));
    if (!in) malformed_body("unexpected end of binary data");
    return decode_scalar(buf, t);
}

double read_ascii_scalar(std::istream& in) {
    double v;
    if (!(in >> v)) malformed_body("unexpected end of ascii data");
    return v;
}

struct PlyContents {
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> polygons;
};

PlyContents read_ply(std::istream& in) {
    const PlyHeader header = read_ply_header(in);
    PlyContents out;

    for (const PlyElement& elem : header.elements) {
        const bool is_vertex = elem.name == "vertex";
        const bool is_face = elem.name == "face";

        int ix = -1, iy = -1, iz = -1, ilist = -1;
        if (is_vertex) {
            for (std::size_t p = 0; p < elem.properties.size(); ++p) {
                const auto& prop = elem.properties[p];
                if (prop.is_list) continue;
                if (prop.name == "x") ix = static_cast<int>(p);
                if (prop.name == "y") iy = static_cast<int>(p);
                if (prop.name == "z") iz = static_cast<int>(p);
            }
            if (ix < 0 || iy < 0 || iz < 0) malformed_header("vertex element lacks x/y/z");
            out.vertices.reserve(elem.count);
        }
        if (is_face) {
            for (std::size_t p = 0; p < elem.properties.size(); ++p) {
                const auto& prop = elem.properties[p];
                if (prop.is_list && (prop.name == "vertex_indices" || prop.name == "vertex_index")) {
                    ilist = static_cast<int>(p);
                }
            }
            if (ilist < 0) malformed_header("face element lacks vertex_indices");
            out.polygons.reserve(elem.count);
        }

        std::vector<double> scalars(elem.properties.size(), 0.0);
        std::vector<int> list_values;
        for (std::size_t row = 0; row < elem.count; ++row) {
            list_values.clear();
            for (std::size_t p = 0; p < elem.properties.size(); ++p) {
                const auto& prop = elem.properties[p];
                if (prop.is_list) {
                    const double count_raw = header.binary
                                                 ? read_binary_scalar(in, prop.count_type)
                                                 : read_ascii_scalar(in);
                    if (count_raw < 0 || count_raw > 1e9) malformed_body("bad list count");
                    const auto n = static_cast<std::size_t>(count_raw);
                    for (std::size_t k = 0; k < n; ++k) {
                        const double v = header.binary ? read_binary_scalar(in, prop.type)
                                                       : read_ascii_scalar(in);
                        if (static_cast<int>(p) == ilist) {
                            list_values.push_back(static_cast<int>(v));
                        }
                    }
                } else {
                    scalars[p] = header.binary ? read_binary_scalar(in, prop.type)
                                               : read_ascii_scalar(in);
                }
            }
            if (is_vertex) {
                out.vertices.emplace_back(scalars[static_cast<std::size_t>(ix)],
                                          scalars[static_cast<std::size_t>(iy)],
                                          scalars[static_cast<std::size_t>(iz)]);
            } else if (is_face) {
                if (list_values.size() < 3) malformed_body("face with fewer than 3 indices");
                out.polygons.push_back(list_values);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// OBJ
// ---------------------------------------------------------------------------

int parse_obj_index(std::string_view token, std::size_t vertex_count) {
    // Token forms: i, i/j, i//k, i/j/k. Only the vertex index is used.
    const std::size_t slash = token.find('/');
    if (slash != std::string_view::npos) token = token.substr(0, slash);
    int value = 0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end || value == 0) {
        malformed_body("bad OBJ face index '" + std::string(token) + "'");
    }
    const long long resolved =
        value > 0 ? value - 1 : static_cast<long long>(vertex_count) + value;
    if (resolved < 0 || resolved >= static_cast<long long>(vertex_count)) {
        malformed_body("OBJ face index out of range");
    }
    return static_cast<int>(resolved);
}

PlyContents read_obj(std::istream& in) {
    PlyContents out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) malformed_body("bad OBJ vertex line: " + line);
            out.vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<int> poly;
            std::string token;
            while (ls >> token) poly.push_back(parse_obj_index(token, out.vertices.size()));
            if (poly.size() < 3) malformed_body("OBJ face with fewer than 3 indices");
            out.polygons.push_back(std::move(poly));
        }
        // Everything else (vn, vt, comments, groups, materials) is ignored.
    }
    return out;
}

TriangleMesh assemble(PlyContents&& contents, std::size_t* dropped_faces, bool allow_empty) {
    TriangleMesh mesh;
    mesh.vertices = std::move(contents.vertices);
    for (const Vec3& v : mesh.vertices) {
        if (!v.allFinite()) malformed_body("non-finite vertex coordinate");
    }
    const int n = static_cast<int>(mesh.vertices.size());
    for (const auto& poly : contents.polygons) {
        for (int idx : poly) {
            if (idx < 0 || idx >= n) {
                malformed_body("face references vertex " + std::to_string(idx) + " of " +
                               std::to_string(n));
            }
        }
        for (std::size_t k = 2; k < poly.size(); ++k) {
            mesh.faces.push_back({poly[0], poly[k - 1], poly[k]});
        }
    }
    const std::size_t dropped = drop_degenerate_faces(mesh);
    if (dropped_faces) *dropped_faces = dropped;
    if (mesh.faces.empty() && !allow_empty) throw IoError("empty mesh: zero usable faces");
    return mesh;
}

void write_exact(std::ostream& out, const void* data, std::size_t bytes) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

void write_binary_ply(std::ostream& out, const std::vector<Vec3>& vertices,
                      const std::vector<std::array<int, 3>>& faces) {
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << vertices.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "element face " << faces.size() << "\n";
    out << "property list uchar int vertex_indices\n";
    out << "end_header\n";
    for (const Vec3& v : vertices) {
        const double xyz[3] = {v.x(), v.y(), v.z()};
        write_exact(out, xyz, sizeof(xyz));
    }
    const unsigned char three = 3;
    for (const auto& f : faces) {
        write_exact(out, &three, 1);
        const std::int32_t idx[3] = {f[0], f[1], f[2]};
        write_exact(out, idx, sizeof(idx));
    }
}

void write_ascii_ply(std::ostream& out, const TriangleMesh& mesh) {
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << mesh.vertices.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "element face " << mesh.faces.size() << "\n";
    out << "property list uchar int vertex_indices\n";
    out << "end_header\n";
    char buf[96];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out << buf;
    }
    for (const auto& f : mesh.faces) {
        out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    }
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
    char buf[96];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out << buf;
    }
    for (const auto& f : mesh.faces) {
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    }
}

}  // namespace

TriangleMesh load_mesh(const std::filesystem::path& path, std::size_t* dropped_faces) {
    if (!std::filesystem::exists(path)) {
        throw IoError("file not found: " + path.string());
    }
    const std::string ext = lower_ext(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("file not found: cannot open " + path.string());

    PlyContents contents;
    if (ext == ".ply") {
        contents = read_ply(in);
    } else if (ext == ".obj") {
        contents = read_obj(in);
    } else {
        throw IoError("unsupported format: " + ext);
    }
    return assemble(std::move(contents), dropped_faces, /*allow_empty=*/false);
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path, bool ascii) {
    mesh.validate();
    const std::string ext = lower_ext(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write failed: cannot open " + path.string());
    if (ext == ".ply") {
        if (ascii) write_ascii_ply(out, mesh);
        else write_binary_ply(out, mesh.vertices, mesh.faces);
    } else if (ext == ".obj") {
        write_obj(out, mesh);
    } else {
        throw IoError("unsupported format: " + ext);
    }
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

void save_point_cloud(const std::vector<Vec3>& points, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write failed: cannot open " + path.string());
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << points.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "end_header\n";
    for (const Vec3& p : points) {
        const double xyz[3] = {p.x(), p.y(), p.z()};
        write_exact(out, xyz, sizeof(xyz));
    }
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Vec3> load_point_cloud(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("file not found: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("file not found: cannot open " + path.string());
    PlyContents contents = read_ply(in);
    return std::move(contents.vertices);
}

}  // namespace conflate
