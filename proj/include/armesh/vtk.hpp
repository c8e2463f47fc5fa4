// vtk.hpp — Reader/writer for legacy-format VTK unstructured grids (ASCII and
// big-endian BINARY encodings, "# vtk DataFile Version 2.0".."5.1" headers)
// and time-series assembly over ordered file lists.
#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "armesh/core.hpp"

namespace armesh {

enum class CellType : int {
  Line = 3,
  Triangle = 5,
  Quad = 9,
  Tetra = 10,
  Hexahedron = 12,
  Wedge = 13,
};

inline std::optional<int> cell_arity(int type_code) {
  switch (type_code) {
    case 3: return 2;
    case 5: return 3;
    case 9: return 4;
    case 10: return 4;
    case 12: return 8;
    case 13: return 6;
    default: return std::nullopt;
  }
}

inline const char* cell_type_name(CellType t) {
  switch (t) {
    case CellType::Line: return "line";
    case CellType::Triangle: return "triangle";
    case CellType::Quad: return "quad";
    case CellType::Tetra: return "tetra";
    case CellType::Hexahedron: return "hexahedron";
    case CellType::Wedge: return "wedge";
  }
  return "unknown";
}

struct Cell {
  CellType type = CellType::Tetra;
  std::vector<std::uint32_t> conn;
  bool operator==(const Cell& o) const { return type == o.type && conn == o.conn; }
};

/// One simulation frame: points, typed cells and named data arrays.
/// Coordinates and field values are widened to 64-bit on ingest.
struct UnstructuredGrid {
  std::vector<Vec3> points;
  std::vector<Cell> cells;
  AttributeMap point_fields;  // each count() == points.size()
  AttributeMap cell_fields;   // each count() == cells.size()
  std::optional<double> time; // from dataset-level FIELD array "TIME"/"TimeValue"

  bool same_connectivity(const UnstructuredGrid& o) const {
    return points.size() == o.points.size() && cells == o.cells;
  }
};

struct TimeSeries {
  std::vector<UnstructuredGrid> frames;
  std::vector<double> frame_times;  // empty unless every frame carried a time
  bool constant_connectivity = false;
};

enum class VtkEncoding { Ascii, Binary };

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

enum class VtkScalarType {
  I8, U8, I16, U16, I32, U32, I64, U64, F32, F64,
};

inline std::optional<VtkScalarType> vtk_scalar_type(std::string_view name) {
  if (name == "char" || name == "vtktypeint8") return VtkScalarType::I8;
  if (name == "unsigned_char" || name == "vtktypeuint8") return VtkScalarType::U8;
  if (name == "short" || name == "vtktypeint16") return VtkScalarType::I16;
  if (name == "unsigned_short" || name == "vtktypeuint16") return VtkScalarType::U16;
  if (name == "int" || name == "vtktypeint32") return VtkScalarType::I32;
  if (name == "unsigned_int" || name == "vtktypeuint32") return VtkScalarType::U32;
  if (name == "long" || name == "vtktypeint64") return VtkScalarType::I64;
  if (name == "unsigned_long" || name == "vtktypeuint64") return VtkScalarType::U64;
  if (name == "float") return VtkScalarType::F32;
  if (name == "double") return VtkScalarType::F64;
  return std::nullopt;
}

inline std::size_t scalar_size(VtkScalarType t) {
  switch (t) {
    case VtkScalarType::I8: case VtkScalarType::U8: return 1;
    case VtkScalarType::I16: case VtkScalarType::U16: return 2;
    case VtkScalarType::I32: case VtkScalarType::U32: return 4;
    case VtkScalarType::I64: case VtkScalarType::U64: return 8;
    case VtkScalarType::F32: return 4;
    case VtkScalarType::F64: return 8;
  }
  return 0;
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

/// Cursor over the raw file bytes. Keyword lines are ASCII text in both
/// encodings; numeric payloads are either whitespace-separated tokens (ASCII)
/// or packed big-endian scalars (BINARY).
class VtkCursor {
 public:
  VtkCursor(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  bool eof() {
    std::size_t save = pos_;
    skip_ws();
    bool at_end = pos_ >= size_;
    pos_ = save;
    return at_end;
  }

  std::size_t offset() const { return pos_; }

  /// Next line, stripped of the trailing newline/CR. Empty lines are returned
  /// as-is; callers that want content use next_content_line().
  std::string next_line() {
    std::string line;
    while (pos_ < size_ && data_[pos_] != '\n') line.push_back(char(data_[pos_++]));
    if (pos_ < size_) ++pos_;  // consume '\n'
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    return line;
  }

  std::string next_content_line() {
    while (pos_ < size_) {
      std::string line = next_line();
      if (!line.empty()) return line;
    }
    return {};
  }

  /// True when the next non-whitespace characters spell `word` (keyword peek).
  bool peek_word(std::string_view word) {
    std::size_t p = pos_;
    while (p < size_ && is_space(char(data_[p]))) ++p;
    if (p + word.size() > size_) return false;
    for (std::size_t i = 0; i < word.size(); ++i)
      if (char(data_[p + i]) != word[i]) return false;
    return true;
  }

  // --- ASCII payloads ---

  std::string_view next_token() {
    skip_ws();
    if (pos_ >= size_)
      throw Error(ErrorCode::TruncatedPayload, "unexpected end of file while reading values");
    std::size_t start = pos_;
    while (pos_ < size_ && !is_space(char(data_[pos_]))) ++pos_;
    return std::string_view(reinterpret_cast<const char*>(data_) + start, pos_ - start);
  }

  double next_ascii_value() {
    std::string_view tok = next_token();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw Error(ErrorCode::HeaderMalformed,
                  "expected a numeric value, found \"" + std::string(tok) + "\"");
    return v;
  }

  long long next_ascii_int() {
    std::string_view tok = next_token();
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw Error(ErrorCode::HeaderMalformed,
                  "expected an integer value, found \"" + std::string(tok) + "\"");
    return v;
  }

  // --- BINARY payloads (big-endian per the legacy format) ---

  const std::uint8_t* take(std::size_t n) {
    if (pos_ + n > size_)
      throw Error(ErrorCode::TruncatedPayload,
                  "binary payload ends prematurely (need " + std::to_string(n) + " bytes at offset " +
                      std::to_string(pos_) + ")");
    const std::uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }

  double next_binary_value(VtkScalarType t) {
    const std::uint8_t* p = take(scalar_size(t));
    switch (t) {
      case VtkScalarType::I8: return double(static_cast<std::int8_t>(*p));
      case VtkScalarType::U8: return double(*p);
      case VtkScalarType::I16: return double(load_be<std::int16_t>(p));
      case VtkScalarType::U16: return double(load_be<std::uint16_t>(p));
      case VtkScalarType::I32: return double(load_be<std::int32_t>(p));
      case VtkScalarType::U32: return double(load_be<std::uint32_t>(p));
      case VtkScalarType::I64: return double(load_be<std::int64_t>(p));
      case VtkScalarType::U64: return double(load_be<std::uint64_t>(p));
      case VtkScalarType::F32: return double(load_be<float>(p));
      case VtkScalarType::F64: return load_be<double>(p);
    }
    return 0.0;
  }

 private:
  void skip_ws() {
    while (pos_ < size_ && is_space(char(data_[pos_]))) ++pos_;
  }

  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

inline std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

inline std::string upper(std::string s) {
  for (char& c : s)
    if (c >= 'a' && c <= 'z') c = char(c - 'a' + 'A');
  return s;
}

struct VtkValueReader {
  VtkCursor& cur;
  bool binary;
  VtkScalarType type;

  double value() { return binary ? cur.next_binary_value(type) : cur.next_ascii_value(); }

  long long integer() {
    if (binary) return static_cast<long long>(cur.next_binary_value(type));
    return cur.next_ascii_int();
  }

  void read_into(std::vector<double>& out, std::size_t n) {
    out.reserve(out.size() + n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(value());
  }

  void skip(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) (void)value();
  }
};

inline VtkScalarType parse_scalar_type(const std::string& name, const std::string& where) {
  auto t = vtk_scalar_type(name);
  if (!t)
    throw Error(ErrorCode::HeaderMalformed, "unsupported data type \"" + name + "\" in " + where);
  return *t;
}

inline long long parse_ll(const std::string& s, const std::string& where) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::HeaderMalformed, "bad count \"" + s + "\" in " + where);
  return v;
}

}  // namespace detail

/// Parse one legacy VTK unstructured-grid file. Warnings (skipped auxiliary
/// sections, cell-data averaging notes) are appended to `warnings` when given.
inline UnstructuredGrid parse_vtk(const std::vector<std::uint8_t>& bytes,
                                  std::vector<std::string>* warnings = nullptr) {
  using namespace detail;
  VtkCursor cur(bytes.data(), bytes.size());
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  // Header: "# vtk DataFile Version X.Y", title line, encoding line.
  std::string head = cur.next_line();
  constexpr std::string_view kMagic = "# vtk DataFile Version ";
  if (head.rfind(kMagic, 0) != 0)
    throw Error(ErrorCode::HeaderMalformed, "missing \"# vtk DataFile Version\" header line");
  double version = 0.0;
  {
    std::string vs = head.substr(kMagic.size());
    auto [ptr, ec] = std::from_chars(vs.data(), vs.data() + vs.size(), version);
    (void)ptr;
    if (ec != std::errc())
      throw Error(ErrorCode::HeaderMalformed, "unparsable version in header line \"" + head + "\"");
  }
  if (version < 2.0 || version > 5.1 + 1e-9)
    throw Error(ErrorCode::HeaderMalformed,
                "legacy VTK version " + head.substr(kMagic.size()) + " outside the supported 2.0-5.1 range");
  (void)cur.next_line();  // title, free-form

  std::string encoding = upper(cur.next_content_line());
  bool binary;
  if (encoding == "ASCII") binary = false;
  else if (encoding == "BINARY") binary = true;
  else
    throw Error(ErrorCode::HeaderMalformed, "encoding line must be ASCII or BINARY, found \"" + encoding + "\"");

  UnstructuredGrid grid;
  std::vector<std::vector<std::uint32_t>> raw_cells;  // connectivity, pre CELL_TYPES
  std::vector<int> cell_types;
  bool have_points = false, have_cells = false, have_types = false;

  enum class DataBlock { None, PointData, CellData };
  DataBlock block = DataBlock::None;
  std::size_t block_count = 0;

  auto read_attribute = [&](const std::string& name, int comps, std::size_t count,
                            VtkScalarType type) {
    VtkValueReader rd{cur, binary, type};
    AttributeArray arr;
    arr.components = comps;
    rd.read_into(arr.values, count * std::size_t(comps));
    AttributeMap& dst = block == DataBlock::PointData ? grid.point_fields : grid.cell_fields;
    dst[name] = std::move(arr);
  };

  // Skip a METADATA block: ParaView emits INFORMATION/NAME/DATA lines ended by
  // a blank line.
  auto skip_metadata = [&]() {
    while (!cur.eof()) {
      std::string line = cur.next_line();
      if (line.empty()) break;
    }
  };

  auto parse_field_block = [&](const std::vector<std::string>& words, bool dataset_level) {
    if (words.size() < 3)
      throw Error(ErrorCode::HeaderMalformed, "FIELD line needs a name and array count");
    long long num_arrays = parse_ll(words[2], "FIELD");
    for (long long a = 0; a < num_arrays; ++a) {
      std::vector<std::string> aw = split_words(cur.next_content_line());
      if (aw.size() < 4)
        throw Error(ErrorCode::HeaderMalformed, "FIELD array descriptor needs name/components/tuples/type");
      std::string aname = aw[0];
      long long comps = parse_ll(aw[1], "FIELD array " + aname);
      long long tuples = parse_ll(aw[2], "FIELD array " + aname);
      VtkScalarType type = parse_scalar_type(aw[3], "FIELD array " + aname);
      VtkValueReader rd{cur, binary, type};
      if (dataset_level) {
        if ((aname == "TIME" || aname == "TimeValue") && comps == 1 && tuples == 1) {
          grid.time = rd.value();
        } else {
          rd.skip(std::size_t(comps * tuples));
          warn("skipped dataset field array \"" + aname + "\"");
        }
        continue;
      }
      bool count_ok = std::size_t(tuples) == block_count;
      if ((comps == 1 || comps == 3) && count_ok) {
        AttributeArray arr;
        arr.components = int(comps);
        rd.read_into(arr.values, std::size_t(comps * tuples));
        AttributeMap& dst = block == DataBlock::PointData ? grid.point_fields : grid.cell_fields;
        dst[aname] = std::move(arr);
      } else {
        rd.skip(std::size_t(comps * tuples));
        warn("skipped field array \"" + aname + "\" (" + std::to_string(comps) + " components, " +
             std::to_string(tuples) + " tuples)");
      }
    }
  };

  // DATASET line (dataset-level FIELD blocks may precede it).
  for (;;) {
    std::string line = cur.next_content_line();
    if (line.empty())
      throw Error(ErrorCode::HeaderMalformed, "missing DATASET line");
    std::vector<std::string> words = split_words(line);
    std::string kw = upper(words[0]);
    if (kw == "FIELD") {
      parse_field_block(words, /*dataset_level=*/true);
      continue;
    }
    if (kw != "DATASET")
      throw Error(ErrorCode::HeaderMalformed, "expected DATASET line, found \"" + line + "\"");
    if (words.size() < 2 || upper(words[1]) != "UNSTRUCTURED_GRID")
      throw Error(ErrorCode::UnsupportedDataset,
                  "dataset type \"" + (words.size() > 1 ? words[1] : std::string("?")) +
                      "\" is not UNSTRUCTURED_GRID");
    break;
  }

  while (!cur.eof()) {
    std::string line = cur.next_content_line();
    if (line.empty()) break;
    std::vector<std::string> words = split_words(line);
    std::string kw = upper(words[0]);

    if (kw == "POINTS") {
      if (words.size() < 3)
        throw Error(ErrorCode::HeaderMalformed, "POINTS line needs a count and data type");
      long long n = parse_ll(words[1], "POINTS");
      VtkScalarType type = parse_scalar_type(words[2], "POINTS");
      VtkValueReader rd{cur, binary, type};
      grid.points.resize(std::size_t(n));
      for (auto& p : grid.points) {
        p.x = rd.value();
        p.y = rd.value();
        p.z = rd.value();
      }
      have_points = true;
    } else if (kw == "CELLS") {
      if (words.size() < 3)
        throw Error(ErrorCode::HeaderMalformed, "CELLS line needs two counts");
      long long n = parse_ll(words[1], "CELLS");
      long long total = parse_ll(words[2], "CELLS");
      if (cur.peek_word("OFFSETS")) {
        // 5.1+ layout: OFFSETS array (n entries) then CONNECTIVITY array.
        std::vector<std::string> ow = split_words(cur.next_content_line());
        VtkScalarType otype = parse_scalar_type(ow.size() > 1 ? ow[1] : "", "OFFSETS");
        VtkValueReader ord{cur, binary, otype};
        std::vector<long long> offsets(static_cast<std::size_t>(n));
        for (auto& v : offsets) v = ord.integer();
        std::vector<std::string> cw = split_words(cur.next_content_line());
        if (cw.empty() || upper(cw[0]) != "CONNECTIVITY")
          throw Error(ErrorCode::HeaderMalformed, "OFFSETS block must be followed by CONNECTIVITY");
        VtkScalarType ctype = parse_scalar_type(cw.size() > 1 ? cw[1] : "", "CONNECTIVITY");
        VtkValueReader crd{cur, binary, ctype};
        long long conn_len = offsets.empty() ? 0 : offsets.back();
        std::vector<long long> conn(static_cast<std::size_t>(conn_len));
        for (auto& v : conn) v = crd.integer();
        raw_cells.clear();
        for (std::size_t c = 0; c + 1 < offsets.size(); ++c) {
          long long b = offsets[c], e = offsets[c + 1];
          if (b < 0 || e < b || std::size_t(e) > conn.size())
            throw Error(ErrorCode::HeaderMalformed, "OFFSETS array is not monotone");
          std::vector<std::uint32_t> ids;
          ids.reserve(std::size_t(e - b));
          for (long long k = b; k < e; ++k) {
            if (conn[std::size_t(k)] < 0)
              throw Error(ErrorCode::IndexOutOfRange, "negative connectivity index");
            ids.push_back(std::uint32_t(conn[std::size_t(k)]));
          }
          raw_cells.push_back(std::move(ids));
        }
      } else {
        // Classic layout: per cell, a point count followed by that many ids.
        raw_cells.clear();
        raw_cells.reserve(std::size_t(n));
        VtkValueReader rd{cur, binary, VtkScalarType::I32};
        long long consumed = 0;
        for (long long c = 0; c < n; ++c) {
          long long k = rd.integer();
          if (k < 0 || k > 256)
            throw Error(ErrorCode::HeaderMalformed,
                        "implausible cell point count " + std::to_string(k));
          std::vector<std::uint32_t> ids(static_cast<std::size_t>(k));
          for (auto& id : ids) {
            long long v = rd.integer();
            if (v < 0) throw Error(ErrorCode::IndexOutOfRange, "negative connectivity index");
            id = std::uint32_t(v);
          }
          consumed += 1 + k;
          raw_cells.push_back(std::move(ids));
        }
        if (consumed != total)
          warn("CELLS size field says " + std::to_string(total) + ", payload held " +
               std::to_string(consumed) + " entries");
      }
      have_cells = true;
    } else if (kw == "CELL_TYPES") {
      long long n = words.size() > 1 ? parse_ll(words[1], "CELL_TYPES") : -1;
      if (n < 0) throw Error(ErrorCode::HeaderMalformed, "CELL_TYPES line needs a count");
      cell_types.resize(std::size_t(n));
      VtkValueReader rd{cur, binary, VtkScalarType::I32};
      for (auto& t : cell_types) t = int(rd.integer());
      have_types = true;
    } else if (kw == "POINT_DATA" || kw == "CELL_DATA") {
      long long n = words.size() > 1 ? parse_ll(words[1], kw) : -1;
      std::size_t expected = kw == "POINT_DATA" ? grid.points.size() : raw_cells.size();
      if (n < 0 || std::size_t(n) != expected)
        throw Error(ErrorCode::HeaderMalformed,
                    kw + " count " + std::to_string(n) + " does not match " +
                        std::to_string(expected) + " in the dataset");
      block = kw == "POINT_DATA" ? DataBlock::PointData : DataBlock::CellData;
      block_count = std::size_t(n);
    } else if (kw == "SCALARS") {
      if (block == DataBlock::None)
        throw Error(ErrorCode::HeaderMalformed, "SCALARS outside POINT_DATA/CELL_DATA");
      if (words.size() < 3)
        throw Error(ErrorCode::HeaderMalformed, "SCALARS line needs a name and data type");
      std::string name = words[1];
      VtkScalarType type = parse_scalar_type(words[2], "SCALARS " + name);
      int comps = words.size() > 3 ? int(parse_ll(words[3], "SCALARS")) : 1;
      if (cur.peek_word("LOOKUP_TABLE")) (void)cur.next_content_line();
      if (comps == 1 || comps == 3) {
        read_attribute(name, comps, block_count, type);
      } else {
        VtkValueReader rd{cur, binary, type};
        rd.skip(block_count * std::size_t(comps));
        warn("skipped SCALARS \"" + name + "\" with " + std::to_string(comps) + " components");
      }
    } else if (kw == "VECTORS" || kw == "NORMALS") {
      if (block == DataBlock::None)
        throw Error(ErrorCode::HeaderMalformed, kw + " outside POINT_DATA/CELL_DATA");
      if (words.size() < 3)
        throw Error(ErrorCode::HeaderMalformed, kw + " line needs a name and data type");
      read_attribute(words[1], 3, block_count, parse_scalar_type(words[2], kw));
    } else if (kw == "FIELD") {
      if (block == DataBlock::None) {
        parse_field_block(words, /*dataset_level=*/true);
      } else {
        parse_field_block(words, /*dataset_level=*/false);
      }
    } else if (kw == "LOOKUP_TABLE") {
      // Table definition: size entries of RGBA (4 floats ASCII / 4 bytes BINARY).
      long long n = words.size() > 2 ? parse_ll(words[2], "LOOKUP_TABLE") : 0;
      if (binary) {
        cur.take(std::size_t(n) * 4);
      } else {
        VtkValueReader rd{cur, binary, VtkScalarType::F32};
        rd.skip(std::size_t(n) * 4);
      }
      warn("skipped LOOKUP_TABLE definition");
    } else if (kw == "COLOR_SCALARS") {
      long long m = words.size() > 2 ? parse_ll(words[2], "COLOR_SCALARS") : 0;
      if (binary) {
        cur.take(block_count * std::size_t(m));
      } else {
        VtkValueReader rd{cur, binary, VtkScalarType::F32};
        rd.skip(block_count * std::size_t(m));
      }
      warn("skipped COLOR_SCALARS \"" + (words.size() > 1 ? words[1] : "") + "\"");
    } else if (kw == "TEXTURE_COORDINATES") {
      long long dim = words.size() > 2 ? parse_ll(words[2], "TEXTURE_COORDINATES") : 0;
      VtkValueReader rd{cur, binary, parse_scalar_type(words.size() > 3 ? words[3] : "", kw)};
      rd.skip(block_count * std::size_t(dim));
      warn("skipped TEXTURE_COORDINATES");
    } else if (kw == "TENSORS") {
      VtkValueReader rd{cur, binary, parse_scalar_type(words.size() > 2 ? words[2] : "", kw)};
      rd.skip(block_count * 9);
      warn("skipped TENSORS \"" + (words.size() > 1 ? words[1] : "") + "\"");
    } else if (kw == "METADATA") {
      skip_metadata();
    } else {
      throw Error(ErrorCode::HeaderMalformed, "unrecognized section keyword \"" + words[0] + "\"");
    }
  }

  if (!have_points) throw Error(ErrorCode::HeaderMalformed, "file has no POINTS section");
  if (!have_cells) throw Error(ErrorCode::HeaderMalformed, "file has no CELLS section");
  if (!have_types) throw Error(ErrorCode::HeaderMalformed, "file has no CELL_TYPES section");
  if (cell_types.size() != raw_cells.size())
    throw Error(ErrorCode::HeaderMalformed,
                "CELL_TYPES lists " + std::to_string(cell_types.size()) + " entries for " +
                    std::to_string(raw_cells.size()) + " cells");

  grid.cells.reserve(raw_cells.size());
  for (std::size_t c = 0; c < raw_cells.size(); ++c) {
    int code = cell_types[c];
    auto arity = cell_arity(code);
    if (!arity)
      throw Error(ErrorCode::UnsupportedCellType,
                  "cell " + std::to_string(c) + " has unsupported VTK cell type " + std::to_string(code));
    if (std::size_t(*arity) != raw_cells[c].size())
      throw Error(ErrorCode::HeaderMalformed,
                  "cell " + std::to_string(c) + " (type " + std::to_string(code) + ") lists " +
                      std::to_string(raw_cells[c].size()) + " points, expected " + std::to_string(*arity));
    for (std::uint32_t id : raw_cells[c])
      if (id >= grid.points.size())
        throw Error(ErrorCode::IndexOutOfRange,
                    "cell " + std::to_string(c) + " references point " + std::to_string(id) + " of " +
                        std::to_string(grid.points.size()));
    grid.cells.push_back(Cell{CellType(code), std::move(raw_cells[c])});
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Writing (classic layout, version 3.0 header)
// ---------------------------------------------------------------------------

namespace detail {

inline void append_text(std::vector<std::uint8_t>& out, std::string_view s) {
  out.insert(out.end(), s.begin(), s.end());
}

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Serialize to legacy format. ASCII prints doubles with 17 significant digits
/// so a write/parse round trip reproduces values exactly; BINARY stores
/// big-endian float64 payloads.
inline std::vector<std::uint8_t> write_vtk(const UnstructuredGrid& grid, VtkEncoding encoding) {
  using detail::append_text;
  using detail::fmt_g17;
  std::vector<std::uint8_t> out;
  bool binary = encoding == VtkEncoding::Binary;
  append_text(out, "# vtk DataFile Version 3.0\n");
  append_text(out, "armesh unstructured grid\n");
  append_text(out, binary ? "BINARY\n" : "ASCII\n");
  append_text(out, "DATASET UNSTRUCTURED_GRID\n");

  auto put_value = [&](double v) {
    if (binary) {
      std::size_t n = out.size();
      out.resize(n + 8);
      store_be(out.data() + n, v);
    } else {
      append_text(out, fmt_g17(v));
    }
  };
  auto put_int = [&](long long v) {
    if (binary) {
      std::size_t n = out.size();
      out.resize(n + 4);
      store_be(out.data() + n, std::int32_t(v));
    } else {
      append_text(out, std::to_string(v));
    }
  };

  append_text(out, "POINTS " + std::to_string(grid.points.size()) + " double\n");
  for (const Vec3& p : grid.points) {
    put_value(p.x);
    if (!binary) append_text(out, " ");
    put_value(p.y);
    if (!binary) append_text(out, " ");
    put_value(p.z);
    if (!binary) append_text(out, "\n");
  }
  if (binary) append_text(out, "\n");

  std::size_t conn_total = 0;
  for (const Cell& c : grid.cells) conn_total += 1 + c.conn.size();
  append_text(out, "CELLS " + std::to_string(grid.cells.size()) + " " + std::to_string(conn_total) + "\n");
  for (const Cell& c : grid.cells) {
    put_int(long long(c.conn.size()));
    for (std::uint32_t id : c.conn) {
      if (!binary) append_text(out, " ");
      put_int(id);
    }
    if (!binary) append_text(out, "\n");
  }
  if (binary) append_text(out, "\n");

  append_text(out, "CELL_TYPES " + std::to_string(grid.cells.size()) + "\n");
  for (const Cell& c : grid.cells) {
    put_int(int(c.type));
    if (!binary) append_text(out, "\n");
  }
  if (binary) append_text(out, "\n");

  auto write_block = [&](const AttributeMap& fields, const char* header, std::size_t count) {
    if (fields.empty()) return;
    append_text(out, std::string(header) + " " + std::to_string(count) + "\n");
    for (const auto& [name, arr] : fields) {
      if (arr.components == 1) {
        append_text(out, "SCALARS " + name + " double 1\n");
        append_text(out, "LOOKUP_TABLE default\n");
        for (std::size_t i = 0; i < arr.values.size(); ++i) {
          put_value(arr.values[i]);
          if (!binary) append_text(out, "\n");
        }
      } else {
        append_text(out, "VECTORS " + name + " double\n");
        for (std::size_t i = 0; i < arr.count(); ++i) {
          for (int k = 0; k < 3; ++k) {
            if (!binary && k > 0) append_text(out, " ");
            put_value(arr.values[i * 3 + std::size_t(k)]);
          }
          if (!binary) append_text(out, "\n");
        }
      }
      if (binary) append_text(out, "\n");
    }
  };
  write_block(grid.point_fields, "POINT_DATA", grid.points.size());
  write_block(grid.cell_fields, "CELL_DATA", grid.cells.size());
  return out;
}

// ---------------------------------------------------------------------------
// Series assembly and field selection
// ---------------------------------------------------------------------------

/// Parse an ordered list of already-loaded files into a TimeSeries. Parsing
/// runs in parallel across frames; errors are annotated with the given label.
inline TimeSeries assemble_series(const std::vector<std::vector<std::uint8_t>>& files,
                                  const std::vector<std::string>& labels,
                                  std::vector<std::string>* warnings = nullptr) {
  if (files.empty()) throw Error(ErrorCode::EmptySeries, "no input frames given");
  TimeSeries series;
  series.frames.resize(files.size());
  std::vector<std::vector<std::string>> frame_warnings(files.size());
  std::vector<std::optional<Error>> errors(files.size());
  parallel_for(files.size(), [&](std::size_t i) {
    try {
      series.frames[i] = parse_vtk(files[i], &frame_warnings[i]);
    } catch (const Error& e) {
      std::string label = i < labels.size() ? labels[i] : ("frame " + std::to_string(i));
      errors[i] = Error(e.code(), label + ": " + e.detail());
    }
  });
  for (const auto& e : errors)
    if (e) throw *e;
  if (warnings)
    for (std::size_t i = 0; i < frame_warnings.size(); ++i)
      for (const std::string& w : frame_warnings[i])
        warnings->push_back((i < labels.size() ? labels[i] : "frame " + std::to_string(i)) + ": " + w);

  series.constant_connectivity = true;
  for (std::size_t i = 1; i < series.frames.size(); ++i)
    if (!series.frames[i].same_connectivity(series.frames[0])) {
      series.constant_connectivity = false;
      break;
    }

  bool all_timed = true;
  for (const auto& f : series.frames)
    if (!f.time) {
      all_timed = false;
      break;
    }
  if (all_timed) {
    for (const auto& f : series.frames) series.frame_times.push_back(*f.time);
    for (std::size_t i = 1; i < series.frame_times.size(); ++i)
      if (series.frame_times[i] <= series.frame_times[i - 1]) {
        if (warnings)
          warnings->push_back("frame times are not strictly increasing; falling back to frame indices");
        series.frame_times.clear();
        break;
      }
  }
  return series;
}

enum class FieldComponent { Default, X, Y, Z, Magnitude };

inline FieldComponent parse_component(std::string_view sel) {
  if (sel.empty()) return FieldComponent::Default;
  if (sel == "x") return FieldComponent::X;
  if (sel == "y") return FieldComponent::Y;
  if (sel == "z") return FieldComponent::Z;
  if (sel == "mag" || sel == "magnitude") return FieldComponent::Magnitude;
  throw Error(ErrorCode::BadComponent,
              "component selector \"" + std::string(sel) + "\" is not one of x|y|z|mag");
}

namespace detail {

inline std::vector<double> select_from_attribute(const AttributeArray& arr, FieldComponent comp,
                                                 const std::string& name) {
  if (arr.components == 1) return arr.values;  // selector ignored for scalars
  std::vector<double> out(arr.count());
  switch (comp) {
    case FieldComponent::X:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = arr.values[i * 3];
      break;
    case FieldComponent::Y:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = arr.values[i * 3 + 1];
      break;
    case FieldComponent::Z:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = arr.values[i * 3 + 2];
      break;
    case FieldComponent::Default:
    case FieldComponent::Magnitude:
      for (std::size_t i = 0; i < out.size(); ++i) {
        double x = arr.values[i * 3], y = arr.values[i * 3 + 1], z = arr.values[i * 3 + 2];
        out[i] = std::sqrt(x * x + y * y + z * z);
      }
      break;
  }
  (void)name;
  return out;
}

inline std::string available_fields(const UnstructuredGrid& grid) {
  std::string names;
  for (const auto& [n, a] : grid.point_fields) names += (names.empty() ? "" : ", ") + n;
  for (const auto& [n, a] : grid.cell_fields) names += (names.empty() ? "" : ", ") + n + " (cell)";
  return names.empty() ? "none" : names;
}

}  // namespace detail

/// Resolve a named field to one scalar per point. Vector fields are reduced by
/// the selector (default: magnitude); cell fields are averaged onto points
/// first, which is reported through `warnings`.
inline std::vector<double> select_field(const UnstructuredGrid& grid, const std::string& name,
                                        FieldComponent comp,
                                        std::vector<std::string>* warnings = nullptr) {
  auto it = grid.point_fields.find(name);
  if (it != grid.point_fields.end()) return detail::select_from_attribute(it->second, comp, name);

  auto ct = grid.cell_fields.find(name);
  if (ct != grid.cell_fields.end()) {
    const AttributeArray& arr = ct->second;
    int comps = arr.components;
    std::vector<double> acc(grid.points.size() * std::size_t(comps), 0.0);
    std::vector<int> incidence(grid.points.size(), 0);
    for (std::size_t c = 0; c < grid.cells.size(); ++c) {
      for (std::uint32_t id : grid.cells[c].conn) {
        for (int k = 0; k < comps; ++k)
          acc[id * std::size_t(comps) + std::size_t(k)] += arr.values[c * std::size_t(comps) + std::size_t(k)];
        ++incidence[id];
      }
    }
    for (std::size_t i = 0; i < grid.points.size(); ++i)
      if (incidence[i] > 0)
        for (int k = 0; k < comps; ++k) acc[i * std::size_t(comps) + std::size_t(k)] /= incidence[i];
    if (warnings)
      warnings->push_back("field \"" + name + "\" is cell data; averaged to points");
    AttributeArray averaged{comps, std::move(acc)};
    return detail::select_from_attribute(averaged, comp, name);
  }

  throw Error(ErrorCode::UnknownField,
              "field \"" + name + "\" not found; available: " + detail::available_fields(grid));
}

}  // namespace armesh
