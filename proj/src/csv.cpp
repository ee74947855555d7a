#include "stasim/csv.hpp"

#include <charconv>
#include <system_error>

namespace stasim {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  if (res.ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& metadata,
                     const std::vector<std::string>& columns)
    : path_(path), columns_(columns.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error("cannot open " + path.string() + " for writing");
  for (const auto& line : metadata) out_ << "# " << line << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw InvalidArgument("row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
  out_ << '\n';
  if (!out_) throw Error("write to " + path_.string() + " failed");
}

void write_field_schedule(const std::filesystem::path& path, const FieldSchedule& schedule,
                          const std::vector<std::string>& metadata) {
  CsvWriter w(path, metadata, {"t_ns", "Bx", "By", "Bz"});
  for (const auto& s : schedule.samples) w.row({s.t, s.b.x(), s.b.y(), s.b.z()});
}

void write_drive_program(const std::filesystem::path& path, const DriveProgram& drive,
                         const std::vector<std::string>& metadata) {
  CsvWriter w(path, metadata, {"t_ns", "E", "Phi", "xi"});
  for (const auto& s : drive.samples) w.row({s.t, s.envelope, s.phase, s.detuning_phase});
}

void write_trajectory(const std::filesystem::path& path, const TrajectoryRecord& record,
                      const std::vector<std::string>& metadata) {
  const bool with_d = !record.points.empty() && record.points.front().dframe_bloch.has_value();
  std::vector<std::string> cols{"t_ns",   "P0",     "P1",      "P2",     "re_rho01", "im_rho01",
                                "re_rho02", "im_rho02", "re_rho12", "im_rho12"};
  if (with_d) cols.insert(cols.end(), {"xD", "yD", "zD"});
  CsvWriter w(path, metadata, cols);
  for (const auto& p : record.points) {
    const auto& r = p.rho.matrix();
    std::vector<double> v{p.t,           p.populations(0), p.populations(1), p.populations(2),
                          r(0, 1).real(), r(0, 1).imag(),  r(0, 2).real(),   r(0, 2).imag(),
                          r(1, 2).real(), r(1, 2).imag()};
    if (with_d) v.insert(v.end(), {p.dframe_bloch->x(), p.dframe_bloch->y(), p.dframe_bloch->z()});
    w.row(v);
  }
}

}  // namespace stasim
