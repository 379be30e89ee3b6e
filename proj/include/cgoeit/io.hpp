#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgoeit/common.hpp"
#include "cgoeit/forward_dtn.hpp"
#include "cgoeit/scattering.hpp"
#include "cgoeit/volume_grid.hpp"

namespace cgoeit {

using Json = nlohmann::json;

/// A stored file does not match the hash recorded in the manifest.
class IntegrityError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Array files: one line of JSON header, a newline, then the payload as
/// little-endian float64 (complex values interleaved re, im). The header
/// holds "format", "kind", "shape", "complex" and free-form "meta".
struct ArrayFile {
  std::string kind;
  std::vector<std::size_t> shape;
  bool complex = true;
  Json meta = Json::object();
  std::vector<double> data;
};

inline constexpr const char* kArrayFormat = "cgoeit-array-1";

void write_array(const std::filesystem::path& path, const ArrayFile& file);
ArrayFile read_array(const std::filesystem::path& path);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);
std::string file_hash(const std::filesystem::path& path);

/// Text written with a trailing newline.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void write_operator(const std::filesystem::path& path, const BoundaryOperator& op);
BoundaryOperator read_operator(const std::filesystem::path& path);

void write_volume(const std::filesystem::path& path, const VolumeField& field,
                  const std::string& kind, const Json& meta = Json::object());
VolumeField read_volume(const std::filesystem::path& path);

/// JSON array of {xi, zeta_re, zeta_im, a, t_re, t_im, method, status,
/// condition, quadrature_points, degree}; t_re/t_im are null for failures.
Json samples_to_json(const std::vector<ScatteringSample>& samples);
std::vector<ScatteringSample> samples_from_json(const Json& j);

/// manifest.json in a run directory: {"files": {name: {"hash", "bytes"}},
/// plus arbitrary top-level entries}.
class Manifest {
 public:
  explicit Manifest(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  /// Loads an existing manifest; throws UsageError if absent.
  void load();
  /// Records the current hash of a file in the run directory.
  void record(const std::string& name);
  /// Throws IntegrityError unless the file exists and matches.
  void verify(const std::string& name) const;
  bool has(const std::string& name) const;
  Json& extra() { return extra_; }
  const Json& extra() const { return extra_; }
  void save() const;

 private:
  std::filesystem::path dir_;
  Json files_ = Json::object();
  Json extra_ = Json::object();
};

}  // namespace cgoeit
