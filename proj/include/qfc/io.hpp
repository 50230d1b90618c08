#pragma once

#include <filesystem>
#include <string>

#include "qfc/cmt.hpp"
#include "qfc/layout.hpp"
#include "qfc/spectra.hpp"

namespace qfc {

// Every floating value leaving the toolkit goes through %.9g, so identical
// inputs produce byte-identical reports.
std::string format_sig9(double v);

// Nearest double to the %.9g rendering; applied to numbers before they are
// handed to the JSON writer.
double round_sig9(double v);

std::string curve_csv(const ConversionCurve& curve);
std::string trace_csv(const SpectrumTrace& trace);
SpectrumTrace trace_from_csv(const std::string& text, Band band);
std::string path_csv(const PathPolyline& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

} // namespace qfc
