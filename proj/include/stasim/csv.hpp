#pragma once

#include "stasim/dynamics.hpp"
#include "stasim/fields.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace stasim {

/// Shortest round-trippable form capped at 12 significant digits, always with a '.' separator.
std::string format_number(double value);

/// Comma-separated table preceded by '#'-prefixed metadata lines.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& metadata,
            const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

void write_field_schedule(const std::filesystem::path& path, const FieldSchedule& schedule,
                          const std::vector<std::string>& metadata);

void write_drive_program(const std::filesystem::path& path, const DriveProgram& drive,
                         const std::vector<std::string>& metadata);

/// t_ns, P0, P1, P2, real and imaginary parts of rho01, rho02, rho12, and xD, yD, zD when present.
void write_trajectory(const std::filesystem::path& path, const TrajectoryRecord& record,
                      const std::vector<std::string>& metadata);

}  // namespace stasim
