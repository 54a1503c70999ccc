#ifndef PAULTRAP_IO_HPP
#define PAULTRAP_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "paultrap/mode.hpp"
#include "paultrap/states_cylindrical.hpp"

namespace paultrap {

// 17 significant digits, round-trip exact.
std::string format_double(double v);

// Columns t, re_xi, im_xi, re_xidot, im_xidot, phi, phi_dot, theta.
void write_mode_csv(const std::filesystem::path& path, const ModeSolution& mode);

// Columns p1, p2, trace_r, trace_z, stable_r, stable_z, stable_trap.
void write_chart_csv(const std::filesystem::path& path,
                     const StabilityChart& chart);

struct FieldSample1D {
  double coord;
  double t;
  Complex value;
};
// Columns <axis>, t, re, im, abs2.
void write_field_csv_1d(const std::filesystem::path& path,
                        const std::string& axis_name,
                        const std::vector<FieldSample1D>& rows);

struct FieldSamplePolar {
  double r;
  double theta;
  double t;
  Complex value;
};
// Columns r, theta, t, re, im, abs2.
void write_field_csv_polar(const std::filesystem::path& path,
                           const std::vector<FieldSamplePolar>& rows);

// 3-D field as JSON: {"axes": [...], "spacings": [...], "origin": [...],
// "t": ..., "data": [re, im, re, im, ...]} with the first axis fastest.
struct Field3DAxis {
  std::string name;
  double min;
  double max;
  std::size_t count;
};
void write_field_json_3d(const std::filesystem::path& path,
                         const std::vector<Field3DAxis>& axes, double t,
                         const std::vector<Complex>& data);

// Columns n, m, n_r, l_z for every level N <= levels.
void write_lattice_csv(const std::filesystem::path& path, int levels);

}  // namespace paultrap

#endif
