#include "paultrap/io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "paultrap/errors.hpp"

namespace paultrap {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file " + path.string());
  return out;
}

}  // namespace

void write_mode_csv(const std::filesystem::path& path,
                    const ModeSolution& mode) {
  std::ofstream out = open_out(path);
  out << "t,re_xi,im_xi,re_xidot,im_xidot,phi,phi_dot,theta\n";
  for (std::size_t i = 0; i < mode.t.size(); ++i) {
    out << format_double(mode.t[i]) << ',' << format_double(mode.xi[i].real())
        << ',' << format_double(mode.xi[i].imag()) << ','
        << format_double(mode.xi_dot[i].real()) << ','
        << format_double(mode.xi_dot[i].imag()) << ','
        << format_double(mode.phi[i]) << ',' << format_double(mode.phi_dot[i])
        << ',' << format_double(mode.theta[i]) << '\n';
  }
}

void write_chart_csv(const std::filesystem::path& path,
                     const StabilityChart& chart) {
  std::ofstream out = open_out(path);
  out << "p1,p2,trace_r,trace_z,stable_r,stable_z,stable_trap\n";
  for (std::size_t i = 0; i < chart.p1.size(); ++i) {
    for (std::size_t j = 0; j < chart.p2.size(); ++j) {
      const std::size_t c = chart.index(i, j);
      out << format_double(chart.p1[i]) << ',' << format_double(chart.p2[j])
          << ',' << format_double(chart.trace_r[c]) << ','
          << format_double(chart.trace_z[c]) << ','
          << int(chart.stable_r[c]) << ',' << int(chart.stable_z[c]) << ','
          << int(chart.stable_trap[c]) << '\n';
    }
  }
}

void write_field_csv_1d(const std::filesystem::path& path,
                        const std::string& axis_name,
                        const std::vector<FieldSample1D>& rows) {
  std::ofstream out = open_out(path);
  out << axis_name << ",t,re,im,abs2\n";
  for (const FieldSample1D& s : rows) {
    out << format_double(s.coord) << ',' << format_double(s.t) << ','
        << format_double(s.value.real()) << ',' << format_double(s.value.imag())
        << ',' << format_double(std::norm(s.value)) << '\n';
  }
}

void write_field_csv_polar(const std::filesystem::path& path,
                           const std::vector<FieldSamplePolar>& rows) {
  std::ofstream out = open_out(path);
  out << "r,theta,t,re,im,abs2\n";
  for (const FieldSamplePolar& s : rows) {
    out << format_double(s.r) << ',' << format_double(s.theta) << ','
        << format_double(s.t) << ',' << format_double(s.value.real()) << ','
        << format_double(s.value.imag()) << ','
        << format_double(std::norm(s.value)) << '\n';
  }
}

void write_field_json_3d(const std::filesystem::path& path,
                         const std::vector<Field3DAxis>& axes, double t,
                         const std::vector<Complex>& data) {
  nlohmann::json j;
  j["axes"] = nlohmann::json::array();
  j["spacings"] = nlohmann::json::array();
  j["origin"] = nlohmann::json::array();
  for (const Field3DAxis& ax : axes) {
    j["axes"].push_back({{"name", ax.name}, {"min", ax.min}, {"max", ax.max},
                         {"count", ax.count}});
    j["spacings"].push_back((ax.max - ax.min) /
                            static_cast<double>(ax.count - 1));
    j["origin"].push_back(ax.min);
  }
  j["t"] = t;
  j["order"] = "first axis fastest";
  std::vector<double> flat;
  flat.reserve(2 * data.size());
  for (const Complex& v : data) {
    flat.push_back(v.real());
    flat.push_back(v.imag());
  }
  j["data"] = std::move(flat);
  std::ofstream out = open_out(path);
  out << j.dump() << '\n';
}

void write_lattice_csv(const std::filesystem::path& path, int levels) {
  std::ofstream out = open_out(path);
  out << "n,m,n_r,l_z\n";
  for (int N = 0; N <= levels; ++N) {
    for (const CylindricalQN& qn : level_degeneracy(N).states) {
      const PolarQN p = cyl_to_polar(qn);
      out << p.n << ',' << p.m << ',' << qn.n_r << ',' << qn.l_z << '\n';
    }
  }
}

}  // namespace paultrap
