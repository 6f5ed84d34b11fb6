#include "fnlw/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include "fnlw/dynamics.hpp"

namespace fnlw {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 4 * 4 + 8;

template <typename T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::istream& in)
      : bytes_(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw std::runtime_error("truncated snapshot");
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
      for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(raw[i], raw[sizeof(T) - 1 - i]);
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }

  std::size_t size() const noexcept { return bytes_.size(); }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

void write_header(std::ostream& out, const GridSpec& grid) {
  out.write("FNLW", 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.N));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.M));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.m));
  put<double>(out, grid.alpha);
}

GridSpec read_header(Reader& in) {
  char magic[4];
  for (char& c : magic) c = in.get<char>();
  if (std::string(magic, 4) != "FNLW") throw std::runtime_error("not an FNLW snapshot");
  const auto version = in.get<std::uint32_t>();
  if (version != kSnapshotVersion)
    throw std::runtime_error("unsupported snapshot version " + std::to_string(version));
  GridSpec grid;
  grid.N = static_cast<int>(in.get<std::uint32_t>());
  grid.M = static_cast<int>(in.get<std::uint32_t>());
  grid.m = static_cast<int>(in.get<std::uint32_t>());
  grid.alpha = in.get<double>();
  if (grid.M < 1) throw std::runtime_error("snapshot has an empty lattice");
  return grid;
}

void write_block(std::ostream& out, const Field& f) {
  const int M = f.size();
  const auto& c = f.coefficients();
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      put<double>(out, c(i, j).real());
      put<double>(out, c(i, j).imag());
    }
}

Field read_block(Reader& in, const GridSpec& grid) {
  Field f(grid);
  auto& c = f.coefficients();
  for (int i = 0; i < grid.M; ++i)
    for (int j = 0; j < grid.M; ++j) {
      const double re = in.get<double>();
      const double im = in.get<double>();
      c(i, j) = {re, im};
    }
  return f;
}

std::size_t block_bytes(const GridSpec& grid) {
  return 16u * static_cast<std::size_t>(grid.M) * grid.M;
}

void check_blocks(const Reader& in, const GridSpec& grid, std::size_t blocks) {
  if (in.size() != kHeaderBytes + blocks * block_bytes(grid))
    throw std::runtime_error("snapshot length does not match " + std::to_string(blocks) +
                             " coefficient block(s)");
}

}  // namespace

void write_field(std::ostream& out, const Field& f) {
  write_header(out, f.grid());
  write_block(out, f);
}

void write_state(std::ostream& out, const PhaseState& state) {
  write_header(out, state.grid());
  write_block(out, state.u);
  write_block(out, state.v);
}

Field read_field(std::istream& stream) {
  Reader in(stream);
  const GridSpec grid = read_header(in);
  check_blocks(in, grid, 1);
  return read_block(in, grid);
}

PhaseState read_state(std::istream& stream) {
  Reader in(stream);
  const GridSpec grid = read_header(in);
  check_blocks(in, grid, 2);
  Field u = read_block(in, grid);
  Field v = read_block(in, grid);
  return PhaseState(std::move(u), std::move(v));
}

void save_state(const std::filesystem::path& path, const PhaseState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_state(out, state);
}

PhaseState load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_state(in);
}

void write_trajectory(std::ostream& out, const TrajectorySample& trajectory) {
  if (trajectory.states.empty()) throw std::invalid_argument("empty trajectory");
  write_header(out, trajectory.states.front().grid());
  for (const auto& s : trajectory.states) {
    write_block(out, s.u);
    write_block(out, s.v);
  }
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    put<double>(out, trajectory.times[k]);
    put<double>(out, trajectory.hamiltonian_log[k]);
  }
  put<std::uint64_t>(out, trajectory.size());
}

TrajectorySample read_trajectory(std::istream& stream) {
  Reader in(stream);
  const GridSpec grid = read_header(in);
  const std::size_t per_state = 2 * block_bytes(grid) + 16;
  if (in.remaining() < 8 || (in.remaining() - 8) % per_state != 0)
    throw std::runtime_error("trajectory length is inconsistent with its lattice");
  const std::size_t count = (in.remaining() - 8) / per_state;
  TrajectorySample traj;
  for (std::size_t k = 0; k < count; ++k) {
    Field u = read_block(in, grid);
    Field v = read_block(in, grid);
    traj.states.emplace_back(std::move(u), std::move(v));
  }
  for (std::size_t k = 0; k < count; ++k) {
    traj.times.push_back(in.get<double>());
    traj.hamiltonian_log.push_back(in.get<double>());
  }
  if (in.get<std::uint64_t>() != count) throw std::runtime_error("trajectory count mismatch");
  return traj;
}

}  // namespace fnlw
