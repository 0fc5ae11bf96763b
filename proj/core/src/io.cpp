#include "inspath/io.hpp"

#include <png.h>

#include <bit>
#include <cerrno>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "inspath/error.hpp"
#include "json.hpp"
#include "json_util.hpp"

namespace inspath {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- text files

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
        out << text;
        if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) fail(ErrorCode::kIo, "cannot rename into " + path.string() + ": " + ec.message());
}

// ---------------------------------------------------------------- PLY

namespace {

enum class PlyType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

std::optional<PlyType> parse_ply_type(const std::string& s) {
    static const std::map<std::string, PlyType> kTypes{
        {"char", PlyType::kInt8},     {"int8", PlyType::kInt8},       {"uchar", PlyType::kUint8},
        {"uint8", PlyType::kUint8},   {"short", PlyType::kInt16},     {"int16", PlyType::kInt16},
        {"ushort", PlyType::kUint16}, {"uint16", PlyType::kUint16},   {"int", PlyType::kInt32},
        {"int32", PlyType::kInt32},   {"uint", PlyType::kUint32},     {"uint32", PlyType::kUint32},
        {"float", PlyType::kFloat32}, {"float32", PlyType::kFloat32}, {"double", PlyType::kFloat64},
        {"float64", PlyType::kFloat64}};
    auto it = kTypes.find(s);
    if (it == kTypes.end()) return std::nullopt;
    return it->second;
}

std::size_t type_size(PlyType t) {
    switch (t) {
        case PlyType::kInt8:
        case PlyType::kUint8: return 1;
        case PlyType::kInt16:
        case PlyType::kUint16: return 2;
        case PlyType::kInt32:
        case PlyType::kUint32:
        case PlyType::kFloat32: return 4;
        case PlyType::kFloat64: return 8;
    }
    return 0;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::kFloat64;
    bool is_list = false;
    PlyType count_type = PlyType::kUint8;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

enum class PlyEncoding { kAscii, kBinaryLittle, kBinaryBig };

struct PlyHeader {
    PlyEncoding encoding = PlyEncoding::kAscii;
    std::vector<PlyElement> elements;
    std::size_t body_offset = 0;
};

[[noreturn]] void header_error(std::size_t line, const std::string& what) {
    fail(ErrorCode::kParse, "PLY header line " + std::to_string(line) + ": " + what);
}

PlyHeader parse_ply_header(const std::string& buf) {
    PlyHeader h;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool saw_format = false;
    for (;;) {
        const std::size_t eol = buf.find('\n', pos);
        ++line_no;
        if (eol == std::string::npos) header_error(line_no, "missing end_header");
        std::string line = buf.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = eol + 1;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        if (line_no == 1) {
            if (word != "ply") header_error(line_no, "expected 'ply' magic");
            continue;
        }
        if (word.empty() || word == "comment" || word == "obj_info") continue;
        if (word == "format") {
            std::string enc, version;
            ss >> enc >> version;
            if (enc == "ascii") h.encoding = PlyEncoding::kAscii;
            else if (enc == "binary_little_endian") h.encoding = PlyEncoding::kBinaryLittle;
            else if (enc == "binary_big_endian") h.encoding = PlyEncoding::kBinaryBig;
            else header_error(line_no, "unknown format '" + enc + "'");
            saw_format = true;
        } else if (word == "element") {
            PlyElement e;
            long long count = -1;
            ss >> e.name >> count;
            if (e.name.empty() || !ss || count < 0) header_error(line_no, "malformed element declaration");
            e.count = static_cast<std::size_t>(count);
            h.elements.push_back(std::move(e));
        } else if (word == "property") {
            if (h.elements.empty()) header_error(line_no, "property before any element");
            PlyProperty p;
            std::string type;
            ss >> type;
            if (type == "list") {
                std::string ct, it;
                ss >> ct >> it >> p.name;
                auto c = parse_ply_type(ct);
                auto i = parse_ply_type(it);
                if (!c || !i || p.name.empty()) header_error(line_no, "malformed list property");
                p.is_list = true;
                p.count_type = *c;
                p.type = *i;
            } else {
                auto t = parse_ply_type(type);
                ss >> p.name;
                if (!t || p.name.empty()) header_error(line_no, "unknown property type '" + type + "'");
                p.type = *t;
            }
            h.elements.back().properties.push_back(std::move(p));
        } else if (word == "end_header") {
            if (!saw_format) header_error(line_no, "missing format line");
            h.body_offset = pos;
            return h;
        } else {
            header_error(line_no, "unexpected keyword '" + word + "'");
        }
    }
}

class BinaryCursor {
public:
    BinaryCursor(const std::string& buf, std::size_t pos, bool big_endian) : buf_(buf), pos_(pos), big_(big_endian) {}

    double read(PlyType t) {
        const std::size_t n = type_size(t);
        if (pos_ + n > buf_.size()) {
            fail(ErrorCode::kParse, "PLY body truncated at byte offset " + std::to_string(pos_));
        }
        unsigned char raw[8];
        std::memcpy(raw, buf_.data() + pos_, n);
        pos_ += n;
        const bool swap = big_ != (std::endian::native == std::endian::big);
        if (swap) std::reverse(raw, raw + n);
        switch (t) {
            case PlyType::kInt8: return static_cast<double>(static_cast<std::int8_t>(raw[0]));
            case PlyType::kUint8: return static_cast<double>(raw[0]);
            case PlyType::kInt16: return decode<std::int16_t>(raw);
            case PlyType::kUint16: return decode<std::uint16_t>(raw);
            case PlyType::kInt32: return decode<std::int32_t>(raw);
            case PlyType::kUint32: return decode<std::uint32_t>(raw);
            case PlyType::kFloat32: return decode<float>(raw);
            case PlyType::kFloat64: return decode<double>(raw);
        }
        return 0.0;
    }

private:
    template <typename T>
    static double decode(const unsigned char* raw) {
        T v;
        std::memcpy(&v, raw, sizeof v);
        return static_cast<double>(v);
    }

    const std::string& buf_;
    std::size_t pos_;
    bool big_;
};

class AsciiCursor {
public:
    AsciiCursor(const std::string& buf, std::size_t pos) : buf_(buf), pos_(pos) {}

    double read(PlyType) {
        while (pos_ < buf_.size() && std::isspace(static_cast<unsigned char>(buf_[pos_]))) ++pos_;
        if (pos_ >= buf_.size()) fail(ErrorCode::kParse, "PLY body truncated at byte offset " + std::to_string(pos_));
        const std::size_t start = pos_;
        while (pos_ < buf_.size() && !std::isspace(static_cast<unsigned char>(buf_[pos_]))) ++pos_;
        const std::string token = buf_.substr(start, pos_ - start);
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size() || errno == ERANGE) {
            fail(ErrorCode::kParse, "PLY body has malformed number '" + token + "' at byte offset " + std::to_string(start));
        }
        return v;
    }

private:
    const std::string& buf_;
    std::size_t pos_;
};

template <typename Cursor>
PointCloud read_ply_body(const PlyHeader& h, Cursor& cur, std::vector<std::string>* warnings) {
    PointCloud cloud;
    for (const PlyElement& e : h.elements) {
        const bool is_vertex = e.name == "vertex";
        if (!is_vertex && warnings && e.count > 0) warnings->push_back("skipping element '" + e.name + "'");
        std::vector<int> slot(e.properties.size(), -1);  // 0..2 xyz, 3..5 normal, 6..8 color
        bool has_normal = false, has_color = false;
        bool color_is_byte = true;
        if (is_vertex) {
            static const std::map<std::string, int> kSlots{{"x", 0},   {"y", 1},     {"z", 2},    {"nx", 3},
                                                           {"ny", 4},  {"nz", 5},    {"red", 6},  {"green", 7},
                                                           {"blue", 8}, {"r", 6},    {"g", 7},    {"b", 8},
                                                           {"diffuse_red", 6}, {"diffuse_green", 7}, {"diffuse_blue", 8}};
            std::set<int> seen;
            for (std::size_t i = 0; i < e.properties.size(); ++i) {
                const PlyProperty& p = e.properties[i];
                auto it = kSlots.find(p.name);
                if (it == kSlots.end() || p.is_list || seen.count(it->second)) {
                    if (warnings) warnings->push_back("skipping vertex property '" + p.name + "'");
                    continue;
                }
                slot[i] = it->second;
                seen.insert(it->second);
                if (it->second >= 6 && p.type != PlyType::kUint8) color_is_byte = false;
            }
            for (int s : {0, 1, 2}) {
                if (!seen.count(s)) fail(ErrorCode::kParse, "PLY vertex element lacks x/y/z");
            }
            has_normal = seen.count(3) && seen.count(4) && seen.count(5);
            has_color = seen.count(6) && seen.count(7) && seen.count(8);
            cloud.points.reserve(e.count);
        }
        for (std::size_t row = 0; row < e.count; ++row) {
            double vals[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
            for (std::size_t i = 0; i < e.properties.size(); ++i) {
                const PlyProperty& p = e.properties[i];
                if (p.is_list) {
                    const double n = cur.read(p.count_type);
                    if (n < 0) fail(ErrorCode::kParse, "negative PLY list length");
                    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) cur.read(p.type);
                    continue;
                }
                const double v = cur.read(p.type);
                if (slot[i] >= 0) vals[slot[i]] = v;
            }
            if (!is_vertex) continue;
            cloud.points.emplace_back(vals[0], vals[1], vals[2]);
            if (has_normal) cloud.normals.emplace_back(vals[3], vals[4], vals[5]);
            if (has_color) {
                const double scale = color_is_byte ? 1.0 / 255.0 : 1.0;
                cloud.colors.emplace_back(vals[6] * scale, vals[7] * scale, vals[8] * scale);
            }
        }
    }
    return cloud;
}

PointCloud read_ply(const std::string& buf, std::vector<std::string>* warnings) {
    const PlyHeader h = parse_ply_header(buf);
    if (h.encoding == PlyEncoding::kAscii) {
        AsciiCursor cur(buf, h.body_offset);
        return read_ply_body(h, cur, warnings);
    }
    BinaryCursor cur(buf, h.body_offset, h.encoding == PlyEncoding::kBinaryBig);
    return read_ply_body(h, cur, warnings);
}

PointCloud read_xyz(const std::string& buf, std::vector<std::string>* warnings) {
    PointCloud cloud;
    std::vector<std::string> columns;
    std::istringstream in(buf);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            const auto tag = line.find("columns:");
            if (tag != std::string::npos) {
                std::istringstream cs(line.substr(tag + 8));
                columns.clear();
                for (std::string c; cs >> c;) columns.push_back(c);
            }
            continue;
        }
        std::vector<double> vals;
        std::istringstream ls(line);
        for (std::string tok; ls >> tok;) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size()) {
                fail(ErrorCode::kParse, "XYZ line " + std::to_string(line_no) + ": malformed number '" + tok + "'");
            }
            vals.push_back(v);
        }
        if (columns.empty()) {
            if (vals.size() == 3) columns = {"x", "y", "z"};
            else if (vals.size() == 6) columns = {"x", "y", "z", "nx", "ny", "nz"};
            else fail(ErrorCode::kParse, "XYZ line " + std::to_string(line_no) + ": expected 3 or 6 columns");
        }
        if (vals.size() != columns.size()) {
            fail(ErrorCode::kParse, "XYZ line " + std::to_string(line_no) + ": expected " + std::to_string(columns.size()) +
                                        " columns, found " + std::to_string(vals.size()));
        }
        Vec3 p = Vec3::Zero(), n = Vec3::Zero(), c = Vec3::Zero();
        bool has_n = false, has_c = false;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const std::string& name = columns[i];
            if (name == "x") p.x() = vals[i];
            else if (name == "y") p.y() = vals[i];
            else if (name == "z") p.z() = vals[i];
            else if (name == "nx") n.x() = vals[i], has_n = true;
            else if (name == "ny") n.y() = vals[i], has_n = true;
            else if (name == "nz") n.z() = vals[i], has_n = true;
            else if (name == "r") c.x() = vals[i], has_c = true;
            else if (name == "g") c.y() = vals[i], has_c = true;
            else if (name == "b") c.z() = vals[i], has_c = true;
            else if (warnings && cloud.points.empty()) warnings->push_back("skipping XYZ column '" + name + "'");
        }
        cloud.points.push_back(p);
        if (has_n) cloud.normals.push_back(n);
        if (has_c) cloud.colors.push_back(c);
    }
    return cloud;
}

void append_binary(std::string& out, const void* data, std::size_t n) {
    const auto* bytes = static_cast<const char*>(data);
    if constexpr (std::endian::native == std::endian::little) {
        out.append(bytes, n);
    } else {
        for (std::size_t i = n; i-- > 0;) out.push_back(bytes[i]);
    }
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint8_t to_byte(double c) { return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); }

}  // namespace

PointCloud read_cloud(const fs::path& path, std::vector<std::string>* warnings) {
    const std::string buf = read_text_file(path);
    PointCloud cloud = buf.rfind("ply", 0) == 0 ? read_ply(buf, warnings) : read_xyz(buf, warnings);
    return cloud;
}

void write_cloud(const PointCloud& cloud, const fs::path& path, CloudFormat format) {
    cloud.validate();
    std::string out;
    const bool normals = cloud.has_normals();
    const bool colors = cloud.has_colors();
    if (format == CloudFormat::kXyz) {
        out = "# columns: x y z";
        if (normals) out += " nx ny nz";
        if (colors) out += " r g b";
        out += "\n";
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            std::vector<double> vals{cloud.points[i].x(), cloud.points[i].y(), cloud.points[i].z()};
            if (normals) vals.insert(vals.end(), {cloud.normals[i].x(), cloud.normals[i].y(), cloud.normals[i].z()});
            if (colors) vals.insert(vals.end(), {cloud.colors[i].x(), cloud.colors[i].y(), cloud.colors[i].z()});
            for (std::size_t j = 0; j < vals.size(); ++j) {
                if (j) out += ' ';
                out += format_real(vals[j]);
            }
            out += '\n';
        }
    } else {
        const bool binary = format == CloudFormat::kPlyBinary;
        out = "ply\n";
        out += binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n";
        out += "comment frame " + cloud.frame + "\n";
        out += "element vertex " + std::to_string(cloud.size()) + "\n";
        out += "property double x\nproperty double y\nproperty double z\n";
        if (normals) out += "property double nx\nproperty double ny\nproperty double nz\n";
        if (colors) out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
        out += "end_header\n";
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            std::vector<double> reals{cloud.points[i].x(), cloud.points[i].y(), cloud.points[i].z()};
            if (normals) reals.insert(reals.end(), {cloud.normals[i].x(), cloud.normals[i].y(), cloud.normals[i].z()});
            std::array<std::uint8_t, 3> rgb{};
            if (colors) rgb = {to_byte(cloud.colors[i].x()), to_byte(cloud.colors[i].y()), to_byte(cloud.colors[i].z())};
            if (binary) {
                for (double v : reals) append_binary(out, &v, sizeof v);
                if (colors) out.append(reinterpret_cast<const char*>(rgb.data()), 3);
            } else {
                for (std::size_t j = 0; j < reals.size(); ++j) {
                    if (j) out += ' ';
                    out += format_real(reals[j]);
                }
                if (colors) {
                    for (auto c : rgb) out += " " + std::to_string(c);
                }
                out += '\n';
            }
        }
    }
    write_text_file(path, out);
}

// ---------------------------------------------------------------- PNG

namespace {

struct PngReadHandle {
    FILE* fp = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadHandle() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

struct PngWriteHandle {
    FILE* fp = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteHandle() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

void png_error_fn(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void png_warning_fn(png_structp, png_const_charp) {}

// Reads into an 8-bit RGB (channels = 3) or 16-bit gray (channels = 1) buffer.
bool read_png_raw(const fs::path& path, bool gray16, int& width, int& height, std::vector<std::uint8_t>& pixels,
                  std::string& error) {
    PngReadHandle h;
    h.fp = std::fopen(path.c_str(), "rb");
    if (!h.fp) {
        error = "cannot open";
        return false;
    }
    h.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warning_fn);
    h.info = h.png ? png_create_info_struct(h.png) : nullptr;
    if (!h.png || !h.info) {
        error = "libpng init failed";
        return false;
    }
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(h.png))) {
        error = "corrupt PNG";
        return false;
    }
    png_init_io(h.png, h.fp);
    png_read_info(h.png, h.info);
    const png_uint_32 w = png_get_image_width(h.png, h.info);
    const png_uint_32 ht = png_get_image_height(h.png, h.info);
    const int bit_depth = png_get_bit_depth(h.png, h.info);
    const int color_type = png_get_color_type(h.png, h.info);
    if (gray16) {
        if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 16) {
            error = "expected 16-bit grayscale";
            return false;
        }
        if constexpr (std::endian::native == std::endian::little) png_set_swap(h.png);
    } else {
        if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(h.png);
        if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(h.png);
        if (bit_depth == 16) png_set_strip_16(h.png);
        if (bit_depth < 8) png_set_expand(h.png);
        if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(h.png);
        if (png_get_valid(h.png, h.info, PNG_INFO_tRNS)) png_set_strip_alpha(h.png);
    }
    png_read_update_info(h.png, h.info);
    const std::size_t rowbytes = png_get_rowbytes(h.png, h.info);
    const std::size_t expected = gray16 ? 2 * static_cast<std::size_t>(w) : 3 * static_cast<std::size_t>(w);
    if (rowbytes != expected) {
        error = "unexpected PNG row layout";
        return false;
    }
    pixels.assign(rowbytes * ht, 0);
    rows.resize(ht);
    for (png_uint_32 y = 0; y < ht; ++y) rows[y] = pixels.data() + y * rowbytes;
    png_read_image(h.png, rows.data());
    png_read_end(h.png, nullptr);
    width = static_cast<int>(w);
    height = static_cast<int>(ht);
    return true;
}

bool write_png_raw(const fs::path& path, bool gray16, int width, int height, const std::vector<std::uint8_t>& pixels,
                   std::string& error) {
    PngWriteHandle h;
    h.fp = std::fopen(path.c_str(), "wb");
    if (!h.fp) {
        error = "cannot open for writing";
        return false;
    }
    h.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warning_fn);
    h.info = h.png ? png_create_info_struct(h.png) : nullptr;
    if (!h.png || !h.info) {
        error = "libpng init failed";
        return false;
    }
    const std::size_t rowbytes = (gray16 ? 2 : 3) * static_cast<std::size_t>(width);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) rows[y] = const_cast<png_bytep>(pixels.data() + y * rowbytes);
    if (setjmp(png_jmpbuf(h.png))) {
        error = "libpng write failed";
        return false;
    }
    png_init_io(h.png, h.fp);
    png_set_IHDR(h.png, h.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), gray16 ? 16 : 8,
                 gray16 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(h.png, h.info);
    if (gray16) {
        if constexpr (std::endian::native == std::endian::little) png_set_swap(h.png);
    }
    png_write_image(h.png, rows.data());
    png_write_end(h.png, nullptr);
    return true;
}

}  // namespace

RgbImage read_rgb_png(const fs::path& path) {
    RgbImage img;
    std::string err;
    if (!read_png_raw(path, false, img.width, img.height, img.data, err)) {
        fail(ErrorCode::kParse, path.string() + ": " + err);
    }
    return img;
}

void write_rgb_png(const RgbImage& image, const fs::path& path) {
    std::string err;
    if (!write_png_raw(path, false, image.width, image.height, image.data, err)) {
        fail(ErrorCode::kIo, path.string() + ": " + err);
    }
}

DepthImage read_depth_png_mm(const fs::path& path) {
    int w = 0, h = 0;
    std::vector<std::uint8_t> raw;
    std::string err;
    if (!read_png_raw(path, true, w, h, raw, err)) fail(ErrorCode::kParse, path.string() + ": " + err);
    DepthImage depth(w, h);
    for (std::size_t i = 0; i < depth.meters.size(); ++i) {
        std::uint16_t mm;
        std::memcpy(&mm, raw.data() + 2 * i, 2);
        depth.meters[i] = mm / 1000.0;
    }
    return depth;
}

void write_depth_png_mm(const DepthImage& depth, const fs::path& path) {
    std::vector<std::uint8_t> raw(depth.meters.size() * 2);
    for (std::size_t i = 0; i < depth.meters.size(); ++i) {
        const double mm = std::clamp(std::round(depth.meters[i] * 1000.0), 0.0, 65535.0);
        const auto v = static_cast<std::uint16_t>(mm);
        std::memcpy(raw.data() + 2 * i, &v, 2);
    }
    std::string err;
    if (!write_png_raw(path, true, depth.width, depth.height, raw, err)) fail(ErrorCode::kIo, path.string() + ": " + err);
}

// ---------------------------------------------------------------- JSON sidecars

Intrinsics read_intrinsics(const fs::path& path) {
    const json j = detail::parse_json(read_text_file(path), path.string());
    Intrinsics k;
    try {
        k.fx = j.at("fx").get<double>();
        k.fy = j.at("fy").get<double>();
        k.cx = j.at("cx").get<double>();
        k.cy = j.at("cy").get<double>();
        k.width = j.at("width").get<int>();
        k.height = j.at("height").get<int>();
    } catch (const json::exception& e) {
        fail(ErrorCode::kParse, path.string() + ": " + e.what());
    }
    if (!(k.fx > 0) || !(k.fy > 0) || k.width < 1 || k.height < 1) fail(ErrorCode::kParse, path.string() + ": invalid intrinsics");
    return k;
}

void write_intrinsics(const Intrinsics& k, const fs::path& path) {
    nlohmann::ordered_json j;
    j["fx"] = k.fx;
    j["fy"] = k.fy;
    j["cx"] = k.cx;
    j["cy"] = k.cy;
    j["width"] = k.width;
    j["height"] = k.height;
    write_text_file(path, j.dump(2) + "\n");
}

RigidTransform read_pose(const fs::path& path) {
    const json j = detail::parse_json(read_text_file(path), path.string());
    try {
        return detail::transform_from_json(j, "pose");
    } catch (const Error& e) {
        fail(ErrorCode::kParse, path.string() + ": " + e.message());
    }
}

void write_pose(const RigidTransform& pose, const fs::path& path) {
    write_text_file(path, detail::transform_to_json(pose).dump(2) + "\n");
}

void write_replay_directory(const std::vector<Frame>& frames, const fs::path& root) {
    if (frames.empty()) fail(ErrorCode::kInvalidArgument, "no frames to write");
    const fs::path dir = root / "frames";
    fs::create_directories(dir);
    write_intrinsics(frames.front().intrinsics, dir / "intrinsics.json");
    write_pose(frames.front().camera_pose, dir / "pose.json");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        char base[32];
        std::snprintf(base, sizeof base, "%04zu", i);
        write_rgb_png(frames[i].color, dir / (std::string(base) + ".color.png"));
        write_depth_png_mm(frames[i].depth, dir / (std::string(base) + ".depth.png"));
    }
}

}  // namespace inspath
