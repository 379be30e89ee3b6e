#include "cgoeit/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace cgoeit {

namespace fs = std::filesystem;

namespace {

void put_le(std::string& out, double v) {
  std::uint64_t u = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xffu));
}

double get_le(const char* p) {
  std::uint64_t u = 0;
  for (int b = 0; b < 8; ++b) u |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[b])) << (8 * b);
  return std::bit_cast<double>(u);
}

std::size_t element_count(const std::vector<std::size_t>& shape, bool complex) {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return complex ? 2 * n : n;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw UsageError("write failed for " + path.string());
}

}  // namespace

void write_array(const fs::path& path, const ArrayFile& file) {
  if (file.data.size() != element_count(file.shape, file.complex)) {
    throw UsageError("array payload does not match its shape");
  }
  Json header = {{"format", kArrayFormat},
                 {"kind", file.kind},
                 {"shape", file.shape},
                 {"complex", file.complex},
                 {"dtype", "float64-le"},
                 {"meta", file.meta}};
  std::string bytes = header.dump();
  bytes.push_back('\n');
  bytes.reserve(bytes.size() + 8 * file.data.size());
  for (double v : file.data) put_le(bytes, v);
  write_bytes(path, bytes);
}

ArrayFile read_array(const fs::path& path) {
  const std::string bytes = read_bytes(path);
  const std::size_t nl = bytes.find('\n');
  if (nl == std::string::npos) throw UsageError(path.string() + ": missing header line");
  Json header;
  try {
    header = Json::parse(bytes.substr(0, nl));
  } catch (const Json::exception& e) {
    throw UsageError(path.string() + ": bad header: " + e.what());
  }
  if (header.value("format", "") != kArrayFormat) {
    throw UsageError(path.string() + ": unknown array format");
  }
  ArrayFile f;
  f.kind = header.at("kind").get<std::string>();
  f.shape = header.at("shape").get<std::vector<std::size_t>>();
  f.complex = header.at("complex").get<bool>();
  f.meta = header.value("meta", Json::object());
  const std::size_t count = element_count(f.shape, f.complex);
  if (bytes.size() - nl - 1 != 8 * count) {
    throw UsageError(path.string() + ": payload size does not match the header");
  }
  f.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) f.data[i] = get_le(bytes.data() + nl + 1 + 8 * i);
  return f;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_hash(const fs::path& path) { return fnv1a_hex(read_bytes(path)); }

void write_text(const fs::path& path, const std::string& text) {
  write_bytes(path, text.empty() || text.back() == '\n' ? text : text + '\n');
}

std::string read_text(const fs::path& path) { return read_bytes(path); }

void write_operator(const fs::path& path, const BoundaryOperator& op) {
  ArrayFile f;
  f.kind = "boundary_operator";
  f.shape = {static_cast<std::size_t>(op.matrix.rows()), static_cast<std::size_t>(op.matrix.cols())};
  f.meta = {{"operator", to_string(op.kind)},
            {"representation", op.rep == Representation::Basis ? "basis" : "nodal"},
            {"mesh_level", op.level},
            {"degree_max", op.degree_max},
            {"raw_asymmetry", op.raw_asymmetry},
            {"layout", "row-major"}};
  f.data.reserve(2 * op.matrix.size());
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
      f.data.push_back(op.matrix(i, j).real());
      f.data.push_back(op.matrix(i, j).imag());
    }
  write_array(path, f);
}

BoundaryOperator read_operator(const fs::path& path) {
  const ArrayFile f = read_array(path);
  if (f.kind != "boundary_operator" || f.shape.size() != 2 || !f.complex) {
    throw UsageError(path.string() + ": not a boundary operator file");
  }
  BoundaryOperator op;
  op.kind = operator_kind_from_string(f.meta.at("operator").get<std::string>());
  op.rep = f.meta.at("representation").get<std::string>() == "basis" ? Representation::Basis
                                                                      : Representation::Nodal;
  op.level = f.meta.value("mesh_level", -1);
  op.degree_max = f.meta.value("degree_max", -1);
  op.raw_asymmetry = f.meta.value("raw_asymmetry", 0.0);
  const auto r = static_cast<Eigen::Index>(f.shape[0]), c = static_cast<Eigen::Index>(f.shape[1]);
  op.matrix.resize(r, c);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j, k += 2) op.matrix(i, j) = {f.data[k], f.data[k + 1]};
  return op;
}

void write_volume(const fs::path& path, const VolumeField& field, const std::string& kind,
                  const Json& meta) {
  ArrayFile f;
  f.kind = kind;
  const auto n = static_cast<std::size_t>(field.grid.n);
  f.shape = {n, n, n};
  f.meta = meta;
  f.meta["grid_n"] = field.grid.n;
  f.meta["pad"] = field.grid.pad;
  f.meta["layout"] = "x-fastest";
  f.data.reserve(2 * field.grid.size());
  for (Eigen::Index i = 0; i < field.values.size(); ++i) {
    f.data.push_back(field.values(i).real());
    f.data.push_back(field.values(i).imag());
  }
  write_array(path, f);
}

VolumeField read_volume(const fs::path& path) {
  const ArrayFile f = read_array(path);
  if (f.shape.size() != 3 || !f.complex) throw UsageError(path.string() + ": not a volume file");
  const VolumeGrid grid(f.meta.at("grid_n").get<int>(), f.meta.at("pad").get<double>());
  if (grid.size() * 2 != f.data.size()) throw UsageError(path.string() + ": bad volume size");
  VolumeField v(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v.values(static_cast<Eigen::Index>(i)) = {f.data[2 * i], f.data[2 * i + 1]};
  }
  return v;
}

Json samples_to_json(const std::vector<ScatteringSample>& samples) {
  Json arr = Json::array();
  for (const auto& s : samples) {
    const CVec3& z = s.pair.zeta;
    Json rec = {{"xi", {s.pair.xi(0), s.pair.xi(1), s.pair.xi(2)}},
                {"zeta_re", {z(0).real(), z(1).real(), z(2).real()}},
                {"zeta_im", {z(0).imag(), z(1).imag(), z(2).imag()}},
                {"a", s.pair.a},
                {"method", to_string(s.method)},
                {"status", s.status},
                {"condition", s.condition},
                {"quadrature_points", s.quadrature_points},
                {"degree", s.degree}};
    if (s.t) {
      rec["t_re"] = s.t->real();
      rec["t_im"] = s.t->imag();
    } else {
      rec["t_re"] = nullptr;
      rec["t_im"] = nullptr;
    }
    arr.push_back(rec);
  }
  return arr;
}

std::vector<ScatteringSample> samples_from_json(const Json& j) {
  std::vector<ScatteringSample> out;
  for (const auto& rec : j) {
    ScatteringSample s;
    const auto xi = rec.at("xi").get<std::vector<double>>();
    const auto zr = rec.at("zeta_re").get<std::vector<double>>();
    const auto zi = rec.at("zeta_im").get<std::vector<double>>();
    if (xi.size() != 3 || zr.size() != 3 || zi.size() != 3) throw UsageError("bad sample record");
    s.pair.xi = Vec3(xi[0], xi[1], xi[2]);
    for (int d = 0; d < 3; ++d) s.pair.zeta(d) = {zr[static_cast<std::size_t>(d)], zi[static_cast<std::size_t>(d)]};
    s.pair.a = rec.value("a", 0.0);
    s.method = scatter_method_from_string(rec.at("method").get<std::string>());
    s.status = rec.value("status", "ok");
    s.condition = rec.value("condition", 0.0);
    s.quadrature_points = rec.value("quadrature_points", 0);
    s.degree = rec.value("degree", 0);
    if (!rec.at("t_re").is_null()) s.t = cdouble(rec.at("t_re").get<double>(), rec.at("t_im").get<double>());
    out.push_back(s);
  }
  return out;
}

Manifest::Manifest(fs::path dir) : dir_(std::move(dir)) {}

void Manifest::load() {
  const fs::path p = dir_ / "manifest.json";
  if (!fs::exists(p)) throw UsageError("no manifest.json in " + dir_.string());
  Json j;
  try {
    j = Json::parse(read_text(p));
  } catch (const Json::exception& e) {
    throw IntegrityError("manifest.json is not valid JSON: " + std::string(e.what()));
  }
  files_ = j.value("files", Json::object());
  extra_ = j;
  extra_.erase("files");
}

void Manifest::record(const std::string& name) {
  const fs::path p = dir_ / name;
  files_[name] = {{"hash", file_hash(p)}, {"bytes", fs::file_size(p)}, {"hash_algorithm", "fnv1a-64"}};
}

bool Manifest::has(const std::string& name) const { return files_.contains(name); }

void Manifest::verify(const std::string& name) const {
  if (!files_.contains(name)) throw IntegrityError(name + " is not listed in the manifest");
  const fs::path p = dir_ / name;
  if (!fs::exists(p)) throw IntegrityError(name + " is missing");
  const std::string expected = files_.at(name).at("hash").get<std::string>();
  const std::string actual = file_hash(p);
  if (actual != expected) {
    throw IntegrityError(name + " hash mismatch (manifest " + expected + ", file " + actual + ")");
  }
}

void Manifest::save() const {
  Json j = extra_;
  j["files"] = files_;
  write_text(dir_ / "manifest.json", j.dump(2));
}

}  // namespace cgoeit
