#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tcdyn/mhd.hpp"

namespace tcdyn {

/// Binary container: magic "TCDYNBIN", format version, then metadata
/// strings and named float64 arrays, all little-endian. Every archive gets a
/// plain-text sidecar (<path>.txt) listing its metadata and array shapes.
struct Archive {
  static constexpr std::uint32_t kVersion = 1;

  std::string kind;  ///< "checkpoint", "snapshot", ...
  std::map<std::string, std::string> meta;
  std::map<std::string, std::vector<double>> arrays;

  void put(const std::string& name, const FourierVectorField& f);
  void put(const std::string& name, const FourierEdgeField& f);
  void put(const std::string& name, const FourierScalarField& f);
  /// Fill a field allocated on the matching grid; throws ConfigError on a
  /// shape mismatch or a missing array.
  void get(const std::string& name, FourierVectorField& f) const;
  void get(const std::string& name, FourierEdgeField& f) const;
  void get(const std::string& name, FourierScalarField& f) const;

  void put_double(const std::string& key, double v);
  double get_double(const std::string& key) const;
  const std::string& at(const std::string& key) const;
};

/// Written to `path` through a temporary file and a rename.
void write_archive(const std::string& path, const Archive& a);
/// Throws ConfigError on a bad magic, another format version or truncation.
Archive read_archive(const std::string& path);

/// Parameters as exact (hexadecimal floating point) metadata entries.
void put_params(Archive& a, const SimParams& p);
SimParams get_params(const Archive& a);

/// Full solver state of a coupled run.
void put_state(Archive& a, const MHDState& s);
/// `s` must come from MHDSolver::initial or zero state on the same grids.
void get_state(const Archive& a, MHDState& s);

}  // namespace tcdyn
