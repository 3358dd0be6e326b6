#include "tcdyn/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tcdyn/error.hpp"

namespace tcdyn {
namespace {

constexpr char kMagic[8] = {'T', 'C', 'D', 'Y', 'N', 'B', 'I', 'N'};
constexpr char kEnd[8] = {'T', 'C', 'D', 'Y', 'N', 'E', 'N', 'D'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}
void put_str(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

class Reader {
 public:
  explicit Reader(std::string data) : d_(std::move(data)) {}
  const char* take(std::size_t n) {
    if (pos_ + n > d_.size()) throw ConfigError("archive is truncated");
    const char* p = d_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::uint64_t u64() {
    const auto* p = reinterpret_cast<const unsigned char*>(take(8));
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return v;
  }
  std::uint32_t u32() {
    const auto* p = reinterpret_cast<const unsigned char*>(take(4));
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    return std::string(take(n), n);
  }

 private:
  std::string d_;
  std::size_t pos_ = 0;
};

std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

template <class F>
void put_field(Archive& a, const std::string& name, const F& f) {
  std::vector<double> v;
  v.reserve(2 * f.size() * static_cast<std::size_t>(f.num_modes()));
  for (int k = 0; k < f.num_modes(); ++k) {
    for (const cplx& c : f.mode(k)) {
      v.push_back(c.real());
      v.push_back(c.imag());
    }
  }
  a.arrays[name] = std::move(v);
  a.meta[name + ".shape"] = std::to_string(f.num_modes()) + "," + std::to_string(f.size()) + "," +
                            std::to_string(f.stride()) + "," + std::to_string(static_cast<int>(f.support()));
}

template <class F>
void get_field(const Archive& a, const std::string& name, F& f) {
  const auto it = a.arrays.find(name);
  if (it == a.arrays.end()) throw ConfigError("archive has no array '" + name + "'");
  const std::string shape = a.at(name + ".shape");
  const std::string want =
      std::to_string(f.num_modes()) + "," + std::to_string(f.size()) + "," + std::to_string(f.stride()) + ",";
  if (shape.rfind(want, 0) != 0) throw ConfigError("array '" + name + "' has shape " + shape + ", expected " + want + "*");
  f.set_support(static_cast<Domain>(std::stoi(shape.substr(want.size()))));
  const std::vector<double>& v = it->second;
  std::size_t p = 0;
  for (int k = 0; k < f.num_modes(); ++k) {
    for (auto& c : f.mode(k)) {
      c = cplx(v[p], v[p + 1]);
      p += 2;
    }
  }
}

}  // namespace

void Archive::put(const std::string& name, const FourierVectorField& f) { put_field(*this, name, f); }
void Archive::put(const std::string& name, const FourierEdgeField& f) { put_field(*this, name, f); }
void Archive::put(const std::string& name, const FourierScalarField& f) { put_field(*this, name, f); }
void Archive::get(const std::string& name, FourierVectorField& f) const { get_field(*this, name, f); }
void Archive::get(const std::string& name, FourierEdgeField& f) const { get_field(*this, name, f); }
void Archive::get(const std::string& name, FourierScalarField& f) const { get_field(*this, name, f); }

void Archive::put_double(const std::string& key, double v) { meta[key] = hex(v); }

double Archive::get_double(const std::string& key) const { return std::strtod(at(key).c_str(), nullptr); }

const std::string& Archive::at(const std::string& key) const {
  const auto it = meta.find(key);
  if (it == meta.end()) throw ConfigError("archive has no entry '" + key + "'");
  return it->second;
}

void write_archive(const std::string& path, const Archive& a) {
  std::string out(kMagic, 8);
  put_u32(out, Archive::kVersion);
  put_str(out, a.kind);
  put_u64(out, a.meta.size());
  for (const auto& [k, v] : a.meta) {
    put_str(out, k);
    put_str(out, v);
  }
  put_u64(out, a.arrays.size());
  for (const auto& [k, v] : a.arrays) {
    put_str(out, k);
    put_u64(out, v.size());
    for (double x : v) put_u64(out, std::bit_cast<std::uint64_t>(x));
  }
  out.append(kEnd, 8);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);

  std::ofstream side(path + ".txt", std::ios::trunc);
  side << "format TCDYNBIN version " << Archive::kVersion << "\nkind " << a.kind << "\n";
  for (const auto& [k, v] : a.meta) side << k << " = " << v << "\n";
  for (const auto& [k, v] : a.arrays) side << "array " << k << " [" << v.size() << " float64]\n";
}

Archive read_archive(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open archive " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  Reader r(ss.str());
  if (std::string(r.take(8), 8) != std::string(kMagic, 8)) throw ConfigError(path + ": not a tcdyn archive");
  const std::uint32_t version = r.u32();
  if (version != Archive::kVersion) {
    throw ConfigError(path + ": archive format version " + std::to_string(version) + ", expected " +
                      std::to_string(Archive::kVersion));
  }
  Archive a;
  a.kind = r.str();
  const std::uint64_t nm = r.u64();
  for (std::uint64_t i = 0; i < nm; ++i) {
    std::string k = r.str();
    a.meta[k] = r.str();
  }
  const std::uint64_t na = r.u64();
  for (std::uint64_t i = 0; i < na; ++i) {
    std::string k = r.str();
    const std::uint64_t n = r.u64();
    std::vector<double> v(n);
    for (auto& x : v) x = std::bit_cast<double>(r.u64());
    a.arrays[k] = std::move(v);
  }
  if (std::string(r.take(8), 8) != std::string(kEnd, 8)) throw ConfigError(path + ": missing end marker");
  return a;
}

void put_params(Archive& a, const SimParams& p) {
  a.put_double("params.Re", p.Re);
  a.put_double("params.Rm", p.Rm);
  a.put_double("params.Omega_i", p.Omega_i);
  a.put_double("params.A", p.A);
  a.put_double("params.epsilon", p.epsilon);
  a.meta["params.M"] = std::to_string(p.M);
  a.put_double("params.dx", p.dx);
  a.put_double("params.dt", p.dt);
  a.put_double("params.Rv", p.Rv);
  a.put_double("params.Zv", p.Zv);
  a.put_double("params.vacuum_stretch", p.vacuum_stretch);
  a.meta["params.inner_core_rotating"] = p.inner_core_rotating ? "1" : "0";
}

SimParams get_params(const Archive& a) {
  SimParams p;
  p.Re = a.get_double("params.Re");
  p.Rm = a.get_double("params.Rm");
  p.Omega_i = a.get_double("params.Omega_i");
  p.A = a.get_double("params.A");
  p.epsilon = a.get_double("params.epsilon");
  p.M = std::stoi(a.at("params.M"));
  p.dx = a.get_double("params.dx");
  p.dt = a.get_double("params.dt");
  p.Rv = a.get_double("params.Rv");
  p.Zv = a.get_double("params.Zv");
  p.vacuum_stretch = a.get_double("params.vacuum_stretch");
  p.inner_core_rotating = a.at("params.inner_core_rotating") == "1";
  return p;
}

void put_state(Archive& a, const MHDState& s) {
  a.put("flow.u", s.flow.u);
  a.put("flow.u_prev", s.flow.u_prev);
  a.put("flow.n_prev", s.flow.n_prev);
  a.put("flow.p", s.flow.p);
  a.put_double("flow.t", s.flow.t);
  a.meta["flow.steps"] = std::to_string(s.flow.steps);
  a.put("mag.H", s.mag.H);
  a.put("mag.H_prev", s.mag.H_prev);
  a.put("mag.phi", s.mag.phi);
  a.put("mag.adv_prev", s.mag.adv_prev);
  a.put_double("mag.t", s.mag.t);
  a.meta["mag.steps"] = std::to_string(s.mag.steps);
  const MeridianGrid& gf = s.flow.u.grid();
  const MeridianGrid& gm = s.mag.H.grid();
  a.meta["grid.fluid"] = std::to_string(gf.nr()) + "x" + std::to_string(gf.nz());
  a.meta["grid.magnetic"] = std::to_string(gm.nr()) + "x" + std::to_string(gm.nz());
}

void get_state(const Archive& a, MHDState& s) {
  const MeridianGrid& gf = s.flow.u.grid();
  const MeridianGrid& gm = s.mag.H.grid();
  if (a.at("grid.fluid") != std::to_string(gf.nr()) + "x" + std::to_string(gf.nz()) ||
      a.at("grid.magnetic") != std::to_string(gm.nr()) + "x" + std::to_string(gm.nz())) {
    throw ConfigError("checkpoint grids do not match the configuration");
  }
  a.get("flow.u", s.flow.u);
  a.get("flow.u_prev", s.flow.u_prev);
  a.get("flow.n_prev", s.flow.n_prev);
  a.get("flow.p", s.flow.p);
  s.flow.t = a.get_double("flow.t");
  s.flow.steps = std::stol(a.at("flow.steps"));
  a.get("mag.H", s.mag.H);
  a.get("mag.H_prev", s.mag.H_prev);
  a.get("mag.phi", s.mag.phi);
  a.get("mag.adv_prev", s.mag.adv_prev);
  s.mag.t = a.get_double("mag.t");
  s.mag.steps = std::stol(a.at("mag.steps"));
}

}  // namespace tcdyn
