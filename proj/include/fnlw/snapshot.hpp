#ifndef FNLW_SNAPSHOT_HPP
#define FNLW_SNAPSHOT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fnlw/phase_state.hpp"

namespace fnlw {

/*
 Binary snapshot layout (all integers unsigned 32-bit, all floats IEEE-754
 64-bit, little-endian):

   "FNLW" | version | N | M | m | alpha | block_1 ... block_B | [table]

 Each block holds M*M complex coefficients as (real, imag) pairs, row-major
 over the mode lattice: storage row i (wavenumber n1 = wavenumber(i, M)) is
 the outer loop, storage column j (n2 = wavenumber(j, M)) the inner loop.

 A field file has one block, a phase-state file two (u then v). A trajectory
 file stores two blocks per stored state, then one (time, hamiltonian) pair per
 state, then the state count as an unsigned 64-bit integer. The block count is
 determined by the file length.
*/
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct TrajectorySample;

void write_field(std::ostream& out, const Field& f);
void write_state(std::ostream& out, const PhaseState& state);
Field read_field(std::istream& in);
PhaseState read_state(std::istream& in);

void save_state(const std::filesystem::path& path, const PhaseState& state);
PhaseState load_state(const std::filesystem::path& path);

void write_trajectory(std::ostream& out, const TrajectorySample& trajectory);
TrajectorySample read_trajectory(std::istream& in);

}  // namespace fnlw

#endif  // FNLW_SNAPSHOT_HPP
