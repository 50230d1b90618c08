#include "qfc/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qfc/errors.hpp"

namespace qfc {

std::string format_sig9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

double round_sig9(double v) {
    return std::strtod(format_sig9(v).c_str(), nullptr);
}

std::string curve_csv(const ConversionCurve& curve) {
    std::string out = "pump_W,eta\n";
    for (const CurvePoint& pt : curve.points) {
        out += format_sig9(pt.pump_w);
        out += ',';
        out += format_sig9(pt.eta);
        out += '\n';
    }
    return out;
}

std::string trace_csv(const SpectrumTrace& trace) {
    trace.validate();
    std::string out = "wavelength_nm,transmission\n";
    for (std::size_t i = 0; i < trace.wavelength_nm.size(); ++i) {
        out += format_sig9(trace.wavelength_nm[i]);
        out += ',';
        out += format_sig9(trace.transmission[i]);
        out += '\n';
    }
    return out;
}

SpectrumTrace trace_from_csv(const std::string& text, Band band) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "wavelength_nm,transmission") {
        fail(errc::io, "trace CSV must start with header 'wavelength_nm,transmission'");
    }
    SpectrumTrace trace;
    trace.band = band;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const std::size_t comma = line.find(',');
        std::size_t used_a = 0;
        std::size_t used_b = 0;
        double lambda = 0.0;
        double t = 0.0;
        try {
            if (comma == std::string::npos) {
                throw std::invalid_argument("missing comma");
            }
            lambda = std::stod(line.substr(0, comma), &used_a);
            t = std::stod(line.substr(comma + 1), &used_b);
        } catch (const std::exception&) {
            fail(errc::io, "trace CSV line " + std::to_string(line_no) +
                               " is not 'number,number'");
        }
        if (used_a != comma || comma + 1 + used_b != line.size()) {
            fail(errc::io, "trace CSV line " + std::to_string(line_no) +
                               " has trailing characters");
        }
        trace.wavelength_nm.push_back(lambda);
        trace.transmission.push_back(t);
    }
    trace.validate();
    return trace;
}

std::string path_csv(const PathPolyline& path) {
    path.validate();
    const bool with_width = !path.width_nm.empty();
    std::string out = with_width ? "s_um,x_um,y_um,theta_rad,k_per_um,width_nm\n"
                                 : "s_um,x_um,y_um,theta_rad,k_per_um\n";
    for (std::size_t i = 0; i < path.size(); ++i) {
        out += format_sig9(path.s_um[i]);
        out += ',';
        out += format_sig9(path.x_um[i]);
        out += ',';
        out += format_sig9(path.y_um[i]);
        out += ',';
        out += format_sig9(path.theta_rad[i]);
        out += ',';
        out += format_sig9(path.curvature_per_um[i]);
        if (with_width) {
            out += ',';
            out += format_sig9(path.width_nm[i]);
        }
        out += '\n';
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(errc::io, "cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) {
        fail(errc::io, "read failed on '" + path.string() + "'");
    }
    return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(errc::io, "cannot open '" + path.string() + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        fail(errc::io, "write failed on '" + path.string() + "'");
    }
}

} // namespace qfc
