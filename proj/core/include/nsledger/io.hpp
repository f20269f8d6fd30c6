#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "nsledger/convergence.hpp"
#include "nsledger/energy_ledger.hpp"
#include "nsledger/spectral_basis.hpp"
#include "nsledger/trajectory.hpp"
#include "nsledger/trilinear_form.hpp"

namespace nsledger {

/// Malformed or incompatible input; `row` is the 1-based line (text) or
/// record (binary) index, 0 for header-level problems.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t row)
      : std::runtime_error(row == 0 ? what : what + " (row " + std::to_string(row) + ")"),
        row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

// Trajectory: '#'-prefixed header (basis size and hash, m, nu, interval,
// tolerances), then a column row and one row per time:
//   t,a_1,...,a_m,visc_accum,work_accum
// The binary variant stores the same header fields and row layout as
// little-endian doubles. Rates are not stored; readers fill them with
// finite differences.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& in);
void write_trajectory_binary(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory_binary(std::istream& in);
Trajectory load_trajectory(const std::string& path);
void save_trajectory(const std::string& path, const Trajectory& traj);

/// Ledger CSV with columns t,kinetic,visc,work,V.
void write_ledger_csv(std::ostream& out, const EnergyLedger& ledger);
EnergyLedger read_ledger_csv(std::istream& in);

/// Canonical triples (a, b, c, value) with b < c, 0-based, after a header
/// recording the basis size and ordering hash.
void write_tensor_text(std::ostream& out, const TriadTensor& tensor);
TriadTensor read_tensor_text(std::istream& in, const BasisPtr& basis);
void write_tensor_binary(std::ostream& out, const TriadTensor& tensor);
TriadTensor read_tensor_binary(std::istream& in, const BasisPtr& basis);

/// Audit listing: index,k1,k2,k3,polarization,phase,eigenvalue.
void write_basis_csv(std::ostream& out, const BasisSet& basis);

/// One row per level; gap columns are empty on the first row.
void write_refinement_csv(std::ostream& out, const RefinementReport& report);

}  // namespace nsledger
