#include "nsledger/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace nsledger {

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

namespace {

double parse_double(std::string_view text, std::size_t row) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw FormatError("cannot parse number '" + std::string(text) + "'", row);
  }
  return value;
}

std::uint32_t parse_index(std::string_view text, std::size_t row) {
  std::uint32_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw FormatError("cannot parse index '" + std::string(text) + "'", row);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string hex(std::uint64_t h) {
  std::ostringstream s;
  s << "0x" << std::hex << h;
  return s.str();
}

// Reads '# key=value' lines until the first non-comment line, which is
// returned through `first`. `line_no` tracks 1-based lines.
std::map<std::string, std::string> read_header(std::istream& in, std::string& first,
                                               std::size_t& line_no) {
  std::map<std::string, std::string> header;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] != '#') {
      first = line;
      return header;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(1, eq - 1);
    key.erase(0, key.find_first_not_of(' '));
    key.erase(key.find_last_not_of(' ') + 1);
    header[key] = line.substr(eq + 1);
  }
  first.clear();
  return header;
}

const std::string& require_key(const std::map<std::string, std::string>& header,
                               const std::string& key) {
  const auto it = header.find(key);
  if (it == header.end()) throw FormatError("missing header field '" + key + "'", 0);
  return it->second;
}

std::size_t parse_count(const std::string& text, const std::string& key) {
  std::size_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw FormatError("header field '" + key + "' is not a count: " + text, 0);
  }
  return value;
}

BasisPtr basis_from_header(const std::map<std::string, std::string>& header) {
  const std::size_t size = parse_count(require_key(header, "basis_size"), "basis_size");
  if (size == 0) throw FormatError("basis_size must be positive", 0);
  BasisPtr basis = build_basis(size);
  const auto it = header.find("basis_hash");
  if (it != header.end() && it->second != hex(basis->hash())) {
    throw FormatError("basis hash " + it->second + " does not match the canonical basis of size " +
                          std::to_string(size),
                      0);
  }
  return basis;
}

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "binary I/O assumes little-endian");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, std::size_t record) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw FormatError("truncated binary input", record);
  }
  return value;
}

constexpr std::array<char, 8> kTrajectoryMagic = {'N', 'S', 'L', 'T', 'R', 'J', '0', '1'};
constexpr std::array<char, 8> kTensorMagic = {'N', 'S', 'L', 'T', 'N', 'S', '0', '1'};

void check_magic(std::istream& in, const std::array<char, 8>& magic) {
  std::array<char, 8> got{};
  if (!in.read(got.data(), got.size()) || got != magic) {
    throw FormatError("unrecognized binary header", 0);
  }
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  traj.validate();
  out << "# nsledger trajectory v1\n";
  out << "# basis_size=" << traj.basis->size() << '\n';
  out << "# basis_hash=" << hex(traj.basis->hash()) << '\n';
  out << "# m=" << traj.m << '\n';
  out << "# nu=" << format_double(traj.nu) << '\n';
  out << "# tau=" << format_double(traj.start()) << '\n';
  out << "# T=" << format_double(traj.end()) << '\n';
  out << "# rel_tol=" << format_double(traj.rel_tol) << '\n';
  out << "# abs_tol=" << format_double(traj.abs_tol) << '\n';
  out << 't';
  for (std::size_t j = 1; j <= traj.m; ++j) out << ",a_" << j;
  out << ",visc_accum,work_accum\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_double(traj.times[i]);
    for (double a : traj.states[i]) out << ',' << format_double(a);
    out << ',' << format_double(traj.visc_accum[i]) << ',' << format_double(traj.work_accum[i])
        << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  const auto header = read_header(in, line, line_no);
  if (line.empty()) throw FormatError("trajectory file has no column row", line_no);

  Trajectory traj;
  traj.basis = basis_from_header(header);
  traj.m = parse_count(require_key(header, "m"), "m");
  if (traj.m == 0 || traj.m > traj.basis->size()) throw FormatError("m outside basis", 0);
  traj.nu = parse_double(require_key(header, "nu"), 0);
  traj.rel_tol = parse_double(require_key(header, "rel_tol"), 0);
  traj.abs_tol = parse_double(require_key(header, "abs_tol"), 0);

  const auto columns = split(line, ',');
  if (columns.size() != traj.m + 3 || columns.front() != "t") {
    throw FormatError("column row does not match m = " + std::to_string(traj.m), line_no);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != traj.m + 3) {
      throw FormatError("expected " + std::to_string(traj.m + 3) + " cells, found " +
                            std::to_string(cells.size()),
                        line_no);
    }
    const double t = parse_double(cells[0], line_no);
    if (!traj.times.empty() && !(t > traj.times.back())) {
      throw FormatError("time not strictly increasing", line_no);
    }
    traj.times.push_back(t);
    std::vector<double> row(traj.m);
    for (std::size_t j = 0; j < traj.m; ++j) row[j] = parse_double(cells[j + 1], line_no);
    traj.states.push_back(std::move(row));
    traj.visc_accum.push_back(parse_double(cells[traj.m + 1], line_no));
    traj.work_accum.push_back(parse_double(cells[traj.m + 2], line_no));
  }
  if (traj.times.empty()) throw FormatError("trajectory has no rows", line_no);
  traj.validate();
  traj.estimate_rates();
  return traj;
}

void write_trajectory_binary(std::ostream& out, const Trajectory& traj) {
  traj.validate();
  out.write(kTrajectoryMagic.data(), kTrajectoryMagic.size());
  put<std::uint64_t>(out, traj.basis->size());
  put<std::uint64_t>(out, traj.basis->hash());
  put<std::uint64_t>(out, traj.m);
  put<double>(out, traj.nu);
  put<double>(out, traj.start());
  put<double>(out, traj.end());
  put<double>(out, traj.rel_tol);
  put<double>(out, traj.abs_tol);
  put<std::uint64_t>(out, traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    put<double>(out, traj.times[i]);
    for (double a : traj.states[i]) put<double>(out, a);
    put<double>(out, traj.visc_accum[i]);
    put<double>(out, traj.work_accum[i]);
  }
}

Trajectory read_trajectory_binary(std::istream& in) {
  check_magic(in, kTrajectoryMagic);
  Trajectory traj;
  const auto basis_size = get<std::uint64_t>(in, 0);
  const auto hash = get<std::uint64_t>(in, 0);
  if (basis_size == 0) throw FormatError("basis_size must be positive", 0);
  traj.basis = build_basis(basis_size);
  if (traj.basis->hash() != hash) throw FormatError("basis hash mismatch", 0);
  traj.m = get<std::uint64_t>(in, 0);
  if (traj.m == 0 || traj.m > basis_size) throw FormatError("m outside basis", 0);
  traj.nu = get<double>(in, 0);
  get<double>(in, 0);
  get<double>(in, 0);
  traj.rel_tol = get<double>(in, 0);
  traj.abs_tol = get<double>(in, 0);
  const auto rows = get<std::uint64_t>(in, 0);
  for (std::uint64_t i = 0; i < rows; ++i) {
    traj.times.push_back(get<double>(in, i + 1));
    std::vector<double> row(traj.m);
    for (double& a : row) a = get<double>(in, i + 1);
    traj.states.push_back(std::move(row));
    traj.visc_accum.push_back(get<double>(in, i + 1));
    traj.work_accum.push_back(get<double>(in, i + 1));
  }
  if (traj.times.empty()) throw FormatError("trajectory has no rows", 0);
  traj.validate();
  traj.estimate_rates();
  return traj;
}

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Trajectory load_trajectory(const std::string& path) {
  const bool binary = has_suffix(path, ".bin");
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw FormatError("cannot open trajectory file " + path, 0);
  return binary ? read_trajectory_binary(in) : read_trajectory_csv(in);
}

void save_trajectory(const std::string& path, const Trajectory& traj) {
  const bool binary = has_suffix(path, ".bin");
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (binary) {
    write_trajectory_binary(out, traj);
  } else {
    write_trajectory_csv(out, traj);
  }
}

void write_ledger_csv(std::ostream& out, const EnergyLedger& ledger) {
  out << "t,kinetic,visc,work,V\n";
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    out << format_double(ledger.times[i]) << ',' << format_double(ledger.kinetic[i]) << ','
        << format_double(ledger.visc[i]) << ',' << format_double(ledger.work[i]) << ','
        << format_double(ledger.values[i]) << '\n';
  }
}

EnergyLedger read_ledger_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  read_header(in, line, line_no);
  if (line.empty()) throw FormatError("ledger file is empty", line_no);
  const auto columns = split(line, ',');
  if (columns.size() != 5 || columns[0] != "t" || columns[1] != "kinetic" ||
      columns[2] != "visc" || columns[3] != "work" || columns[4] != "V") {
    throw FormatError("ledger column row must be t,kinetic,visc,work,V", line_no);
  }
  std::vector<double> t, kinetic, visc, work, values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 5) {
      throw FormatError("expected 5 cells, found " + std::to_string(cells.size()), line_no);
    }
    const double time = parse_double(cells[0], line_no);
    if (!t.empty() && !(time > t.back())) {
      throw FormatError("time not strictly increasing", line_no);
    }
    t.push_back(time);
    kinetic.push_back(parse_double(cells[1], line_no));
    visc.push_back(parse_double(cells[2], line_no));
    work.push_back(parse_double(cells[3], line_no));
    values.push_back(parse_double(cells[4], line_no));
  }
  if (t.empty()) throw FormatError("ledger has no rows", line_no);
  EnergyLedger ledger;
  ledger.times = std::move(t);
  ledger.kinetic = std::move(kinetic);
  ledger.visc = std::move(visc);
  ledger.work = std::move(work);
  ledger.values = std::move(values);
  ledger.validate();
  return ledger;
}

void write_tensor_text(std::ostream& out, const TriadTensor& tensor) {
  out << "# nsledger triad tensor v1\n";
  out << "# basis_size=" << tensor.basis()->size() << '\n';
  out << "# basis_hash=" << hex(tensor.basis()->hash()) << '\n';
  out << "# entries=" << tensor.size() << '\n';
  out << "a b c value\n";
  for (const TriadEntry& e : tensor.entries()) {
    out << e.a << ' ' << e.b << ' ' << e.c << ' ' << format_double(e.value) << '\n';
  }
}

TriadTensor read_tensor_text(std::istream& in, const BasisPtr& basis) {
  std::string line;
  std::size_t line_no = 0;
  const auto header = read_header(in, line, line_no);
  if (parse_count(require_key(header, "basis_size"), "basis_size") != basis->size() ||
      require_key(header, "basis_hash") != hex(basis->hash())) {
    throw FormatError("tensor was built for a different basis", 0);
  }
  if (line != "a b c value") throw FormatError("unexpected tensor column row", line_no);
  std::vector<TriadEntry> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ' ');
    if (cells.size() != 4) throw FormatError("expected 'a b c value'", line_no);
    TriadEntry e;
    e.a = parse_index(cells[0], line_no);
    e.b = parse_index(cells[1], line_no);
    e.c = parse_index(cells[2], line_no);
    e.value = parse_double(cells[3], line_no);
    entries.push_back(e);
  }
  const auto expected = parse_count(require_key(header, "entries"), "entries");
  if (expected != entries.size()) throw FormatError("entry count disagrees with header", 0);
  return TriadTensor(basis, std::move(entries));
}

void write_tensor_binary(std::ostream& out, const TriadTensor& tensor) {
  out.write(kTensorMagic.data(), kTensorMagic.size());
  put<std::uint64_t>(out, tensor.basis()->size());
  put<std::uint64_t>(out, tensor.basis()->hash());
  put<std::uint64_t>(out, tensor.size());
  for (const TriadEntry& e : tensor.entries()) {
    put<std::uint32_t>(out, e.a);
    put<std::uint32_t>(out, e.b);
    put<std::uint32_t>(out, e.c);
    put<double>(out, e.value);
  }
}

TriadTensor read_tensor_binary(std::istream& in, const BasisPtr& basis) {
  check_magic(in, kTensorMagic);
  const auto size = get<std::uint64_t>(in, 0);
  const auto hash = get<std::uint64_t>(in, 0);
  if (size != basis->size() || hash != basis->hash()) {
    throw FormatError("tensor was built for a different basis", 0);
  }
  const auto count = get<std::uint64_t>(in, 0);
  std::vector<TriadEntry> entries(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    entries[i].a = get<std::uint32_t>(in, i + 1);
    entries[i].b = get<std::uint32_t>(in, i + 1);
    entries[i].c = get<std::uint32_t>(in, i + 1);
    entries[i].value = get<double>(in, i + 1);
  }
  return TriadTensor(basis, std::move(entries));
}

void write_basis_csv(std::ostream& out, const BasisSet& basis) {
  out << "index,k1,k2,k3,polarization,phase,eigenvalue\n";
  const auto records = basis_records(basis);
  for (std::size_t j = 0; j < records.size(); ++j) {
    const auto& r = records[j];
    out << j + 1 << ',' << r.k.k[0] << ',' << r.k.k[1] << ',' << r.k.k[2] << ','
        << r.polarization << ',' << to_string(r.phase) << ',' << format_double(r.eigenvalue)
        << '\n';
  }
}

void write_refinement_csv(std::ostream& out, const RefinementReport& report) {
  out << "level,l2H_gap,pointwise_gap,ledger_gap,nonlinear_gap";
  const std::size_t fields = report.weak_gaps.empty() ? 0 : report.weak_gaps.front().size();
  for (std::size_t f = 0; f < fields; ++f) out << ",weak_gap_" << f + 1;
  out << '\n';
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    out << report.levels[i];
    if (i == 0) {
      out << ",,,,";
      for (std::size_t f = 0; f < fields; ++f) out << ',';
    } else {
      const std::size_t p = i - 1;
      out << ',' << format_double(report.l2H_gaps[p]) << ','
          << format_double(report.pointwise_gaps[p]) << ','
          << format_double(report.ledger_gaps[p]) << ','
          << format_double(report.nonlinear_gaps[p]);
      for (double w : report.weak_gaps[p]) out << ',' << format_double(w);
    }
    out << '\n';
  }
}

}  // namespace nsledger
